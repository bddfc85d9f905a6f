// Self-contained error function, its inverse, and the confluent hypergeometric
// polynomial 1F1(-n, b, x). No external math libraries so results are
// bit-reproducible across platforms.
#pragma once

namespace atomex {

// Error function, absolute error below 1e-14 on the whole real line.
// Odd symmetry erf(-x) == -erf(x) is exact.
double erf(double x);

// Complementary error function.
double erfc(double x);

// exp(x*x) * erfc(x) for x >= 0; stays representable where erfc underflows.
double erfc_scaled(double x);

// Inverse of erf on (-1, 1). Rational initial guess polished by Newton steps
// on erf itself; round-trip |erf(inverse_erf(y)) - y| <= 1e-13.
// Throws std::domain_error for |y| >= 1.
double inverse_erf(double y);

// 1F1(-n, b, x) for integer n >= 0: a degree-n polynomial in x, summed with
// the rational term recurrence c_{k+1} = c_k * (-n+k) x / ((b+k)(k+1)).
// The alternating terms grow like e^{2 sqrt(n x)} before cancelling, so the
// sum is accurate only while n*x stays moderate (a few units); every caller
// here has n*x <= pi^2/4. Throws std::invalid_argument for n < 0 or b a
// non-positive integer reachable by the recurrence.
double hyp1f1_neg_int(int n, double b, double x);

}  // namespace atomex
