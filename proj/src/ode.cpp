#include "atomex/ode.hpp"

#include <algorithm>
#include <cmath>

namespace atomex {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

}  // namespace

void integrate_ode(const OdeRhs& rhs, std::vector<double>& y, double t0, double t1,
                   std::span<const double> stops,
                   const std::function<void(double, std::span<const double>)>& on_stop,
                   const OdeOptions& opt) {
  const size_t n = y.size();
  if (t1 <= t0) {
    if (t1 == t0 && on_stop) on_stop(t0, y);
    return;
  }
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);

  std::vector<double> all_stops(stops.begin(), stops.end());
  if (all_stops.empty() || all_stops.back() < t1) all_stops.push_back(t1);

  double t = t0;
  rhs(t, y, k1);
  double h = (t1 - t0) / 100.0;
  size_t next_stop = 0;
  while (next_stop < all_stops.size() && all_stops[next_stop] <= t) ++next_stop;

  while (next_stop < all_stops.size()) {
    double target = all_stops[next_stop];
    double t_eps = 1e-14 * std::max(1.0, std::fabs(t));
    if (target - t <= t_eps) {
      // Stop coincides with the current time up to rounding; report it
      // rather than forcing a vanishing step.
      if (on_stop) on_stop(t, y);
      ++next_stop;
      continue;
    }
    bool hit = false;
    if (t + h >= target - 1e-14 * std::max(1.0, std::fabs(target))) {
      h = target - t;
      hit = true;
    }
    if (h < t_eps) {
      throw numeric_error("integrate_ode: step size underflow at t = " + std::to_string(t));
    }

    for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp, k5);
    for (size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, ynew, k7);

    double err2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double scale = opt.atol + opt.rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
      double r = e / scale;
      err2 += r * r;
    }
    double err = std::sqrt(err2 / static_cast<double>(n ? n : 1));

    if (err <= 1.0) {
      t += h;
      y.swap(ynew);
      k1.swap(k7);
      if (hit) {
        t = target;
        if (on_stop) on_stop(t, y);
        ++next_stop;
        // A kink in the drive may sit exactly at the stop; refresh the cached slope.
        rhs(t, y, k1);
      }
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      h *= std::clamp(fac, 0.2, 5.0);
    } else {
      double fac = 0.9 * std::pow(err, -0.2);
      h *= std::clamp(fac, 0.1, 0.9);
    }
    double remaining = all_stops.back() - t;
    if (h > remaining && remaining > 0) h = remaining;
  }
}

}  // namespace atomex
