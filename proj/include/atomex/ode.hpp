// Embedded Dormand-Prince 5(4) integrator with adaptive step control and
// forced stepping onto supplied stop times (output samples and drive kinks).
#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace atomex {

class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
};

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

// Advances y from t0 to t1. `stops` must be sorted, inside (t0, t1]; the
// integrator lands exactly on each stop and invokes on_stop(t, y) there.
// t1 itself is always treated as a stop. Throws numeric_error on step-size
// underflow (stiffness).
void integrate_ode(const OdeRhs& rhs, std::vector<double>& y, double t0, double t1,
                   std::span<const double> stops,
                   const std::function<void(double, std::span<const double>)>& on_stop,
                   const OdeOptions& opt = {});

}  // namespace atomex
