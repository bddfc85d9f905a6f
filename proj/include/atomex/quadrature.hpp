// Adaptive Simpson quadrature helpers used throughout the library.
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace atomex {

// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10);

// Same, but the interval is first split at the given breakpoints (integrand
// kinks), so each adaptive pass sees a smooth piece.
double integrate_with_breaks(const std::function<double(double)>& f, double a, double b,
                             std::span<const double> breaks, double tol = 1e-10);

// Composite Simpson over [a, b] with panel doubling until two successive
// refinements agree to tol (absolute). Used for the per-cell pieces of
// cumulative integrals.
double refined_simpson(const std::function<double(double)>& f, double a, double b,
                       double tol = 1e-12);

}  // namespace atomex
