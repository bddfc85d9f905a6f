// Strong-drive perturbation machinery: the pulse-area clock theta(tau), the
// first-order excitation deficit at the pi point, per-shape optimized deficit
// coefficients, and the photon-number-state corrections built on the
// confluent hypergeometric polynomial.
#pragma once

#include <string>

#include "atomex/pulse.hpp"

namespace atomex {

// Dimensionless frame of the expansion: drive scale Omega0 = 2 sqrt(nbar_eff
// gamma_p / T), small parameter epsilon = gamma/Omega0, and the total pulse
// area. nbar_eff is the mean photon number (coherent) or the photon count.
struct ScaledFrame {
  double omega0 = 0.0;
  double epsilon = 0.0;
  double omega0T = 0.0;
  double theta_total = 0.0;
};

ScaledFrame scaled_frame(PulseKind kind, double T, double nbar_eff, const LossModel& loss);

// Pulse area theta(tau): cumulative integral of the scaled envelope
// g(tau) = sqrt(T) f(t), tau = Omega0 t. Supported kinds: Square, Gaussian,
// DecayingExp, RisingExp.
double theta_of_tau(PulseKind kind, double omega0T, double tau);
double theta_total(PulseKind kind, double omega0T);

// Inverse of theta_of_tau on [0, theta_total); closed forms everywhere.
// Returns -infinity at theta = 0 for the shapes whose support extends left.
// Throws std::domain_error for theta outside [0, theta_total).
double invert_theta(PulseKind kind, double omega0T, double theta);

// Scaled envelope value g at accumulated area theta.
double g_of_theta(PulseKind kind, double omega0T, double theta);

// First-order deficit 1 - P_e at the pi-pulse point:
//   epsilon * int_0^pi sin^4(theta/2) / g(theta) dtheta.
// Throws std::domain_error when the total area cannot reach pi.
double deficit_integral(PulseKind kind, double T, double nbar_eff, const LossModel& loss);

// (alpha, beta) with T_opt = alpha/(nbar_eff gamma_p) and optimized deficit
// beta * gamma/(nbar_eff gamma_p). fock_shift marks coefficients destined for
// the number-state formula that carries the +pi^2/16N zero-order shift.
struct AsymptoticCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  bool fock_shift = false;
};

AsymptoticCoefficients optimize_deficit(PulseKind kind, double nbar_eff, const LossModel& loss);

// int_0^pi sin^4(theta/2)/theta dtheta, the deficit integral of the
// threshold-duration rising exponential (per unit Omega0 T).
double rising_exp_threshold_integral();

// Zero-order number-state excitation (1 - 1F1(-n, 1/2, theta^2/4n))/2 and its
// large-n trigonometric limit (1 - e^{theta^2/8n} cos(theta))/2.
double fock_zero_order_pe(int n, double theta);
double fock_zero_order_pe_trig(int n, double theta);

// Curly-brace kernel of the first-order number-state correction: two finite
// sums evaluated by exact term recurrences for n <= 500, and by their
// trigonometric limit cos(t-t')(1-cos t') - sin(t-t') sin(t')/2 beyond.
double fock_first_order_kernel(int n, double theta, double theta_prime);

// Peak excitation estimates carrying the optimized deficit coefficients:
// coherent: 1 - beta*gamma/(nbar gamma_p);
// number state: 1 + pi^2/16n - beta*gamma/(n gamma_p).
double coherent_asymptotic_pe(PulseKind kind, double nbar, const LossModel& loss);
double fock_asymptotic_pe(PulseKind kind, int n, const LossModel& loss);

}  // namespace atomex
