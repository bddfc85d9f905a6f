#include "atomex/fock_single.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "atomex/csv.hpp"
#include "atomex/quadrature.hpp"
#include "atomex/special_functions.hpp"

namespace atomex {

namespace {

// J(t1) = e^{-gamma dt/2} J(t0) + int_{t0}^{t1} e^{-gamma(t1-s)/2} f(s) ds,
// with the integral split exactly at envelope kinks.
double advance_amplitude(const PulseShape& shape, double gamma, double J, double t0, double t1,
                         std::span<const double> kinks) {
  if (t1 <= t0) return J;
  double out = std::exp(-gamma * (t1 - t0) / 2.0) * J;
  std::vector<double> edges{t0};
  for (double k : kinks) {
    if (k > t0 && k < t1) edges.push_back(k);
  }
  edges.push_back(t1);
  auto integrand = [&](double s) {
    return std::exp(-gamma * (t1 - s) / 2.0) * evaluate_extended(shape, s);
  };
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    out += refined_simpson(integrand, edges[i], edges[i + 1], 1e-13);
  }
  return out;
}

}  // namespace

Fock1Result pe_trace_fock1(const PulseShape& shape, const LossModel& loss,
                           std::span<const double> grid) {
  loss.validate();
  if (grid.empty()) throw std::invalid_argument("pe_trace_fock1: empty time grid");
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i + 1] > grid[i])) {
      throw std::invalid_argument("pe_trace_fock1: grid must increase strictly");
    }
  }
  double gamma = loss.total();
  std::vector<double> kinks = kink_times(shape);
  std::sort(kinks.begin(), kinks.end());

  Fock1Result result;
  result.shape = shape;
  result.loss = loss;
  result.t.assign(grid.begin(), grid.end());
  result.pe.resize(grid.size());
  result.amplitude.resize(grid.size());

  // Seed the amplitude from far enough below the grid that the neglected tail
  // is below double rounding noise.
  double J = 0.0;
  double seed_lo = drive_start_time(shape);
  if (seed_lo < grid[0]) J = advance_amplitude(shape, gamma, J, seed_lo, grid[0], kinks);

  result.amplitude[0] = J;
  result.pe[0] = loss.gamma_p * J * J;
  for (size_t i = 1; i < grid.size(); ++i) {
    J = advance_amplitude(shape, gamma, J, grid[i - 1], grid[i], kinks);
    result.amplitude[i] = J;
    result.pe[i] = loss.gamma_p * J * J;
  }
  return result;
}

Fock1Result pe_trace_fock1(const PulseShape& shape, const LossModel& loss) {
  std::vector<double> grid = default_trace_grid(shape, loss.total());
  return pe_trace_fock1(shape, loss, grid);
}

double fock1_pe_between(const Fock1Result& result, size_t cell, double t) {
  if (cell + 1 >= result.t.size()) throw std::invalid_argument("fock1_pe_between: bad cell index");
  double t0 = result.t[cell], t1 = result.t[cell + 1];
  if (t < t0 || t > t1) throw std::invalid_argument("fock1_pe_between: t outside cell");
  std::vector<double> kinks = kink_times(result.shape);
  std::sort(kinks.begin(), kinks.end());
  double J = advance_amplitude(result.shape, result.loss.total(), result.amplitude[cell], t0, t,
                               kinks);
  return result.loss.gamma_p * J * J;
}

double closed_form_pe(const PulseShape& s, const LossModel& loss, double t) {
  loss.validate();
  double gp = loss.gamma_p;
  double gam = loss.total();
  switch (s.kind) {
    case PulseKind::Square: {
      if (t <= 0.0) return 0.0;
      double T = s.duration;
      double te = std::min(t, T);
      double J = (2.0 / (gam * std::sqrt(T))) *
                 (std::exp(-gam * (t - te) / 2.0) - std::exp(-gam * t / 2.0));
      return gp * J * J;
    }
    case PulseKind::Gaussian: {
      double T = s.duration;
      double z = t / T - gam * T / 4.0;
      double pref = gp * std::sqrt(2.0 * std::numbers::pi) * T / 4.0;
      if (z >= 0.0) {
        double w = 1.0 + erf(z);
        return pref * std::exp(-gam * t + gam * gam * T * T / 8.0) * w * w;
      }
      double w = erfc_scaled(-z);
      return pref * std::exp(-2.0 * t * t / (T * T)) * w * w;
    }
    case PulseKind::DecayingExp: {
      if (t <= 0.0) return 0.0;
      double T = s.duration;
      double a = gam / 2.0 - 1.0 / T;
      double J;
      if (std::fabs(a * t) < 1e-3) {
        double x = a * t;
        double exprel = x == 0.0 ? 1.0 : std::expm1(x) / x;
        J = std::sqrt(2.0 / T) * std::exp(-gam * t / 2.0) * t * exprel;
      } else {
        J = std::sqrt(2.0 / T) * (std::exp(-t / T) - std::exp(-gam * t / 2.0)) / a;
      }
      return gp * J * J;
    }
    case PulseKind::AtomCavityDecay: {
      if (t <= 0.0) return 0.0;
      double g = s.g, k = s.kappa;
      double disc = cavity_discriminant(s);
      double J;
      if (cavity_degenerate_regime(s)) {
        double c = (gam - k) / 2.0;
        double x = c * t;
        if (std::fabs(x) < 1e-3) {
          J = g * std::sqrt(2.0 * k) * std::exp(-gam * t / 2.0) * t * t *
              (0.5 + x / 3.0 + x * x / 8.0 + x * x * x / 30.0);
        } else {
          J = g * std::sqrt(2.0 * k) *
              (t * std::exp(-k * t / 2.0) / c -
               (std::exp(-k * t / 2.0) - std::exp(-gam * t / 2.0)) / (c * c));
        }
      } else if (disc > 0.0) {
        double d = std::sqrt(disc);
        auto convolved = [&](double beta) {
          // int_0^t e^{-gam(t-s)/2} e^{beta s/2} ds, beta < 0 here.
          double x = (beta + gam) * t / 2.0;
          if (std::fabs(x) < 1e-3) {
            return t * std::exp(-gam * t / 2.0) * (1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0);
          }
          return (2.0 / (beta + gam)) * (std::exp(beta * t / 2.0) - std::exp(-gam * t / 2.0));
        };
        J = (g * std::sqrt(2.0 * k) / d) * (convolved(d - k) - convolved(-(d + k)));
      } else {
        double om = std::sqrt(-disc);
        double a = (gam - k) / 2.0;
        double w = om / 2.0;
        J = (2.0 * g * std::sqrt(2.0 * k) / om) *
            (std::exp(-k * t / 2.0) * (a * std::sin(w * t) - w * std::cos(w * t)) +
             w * std::exp(-gam * t / 2.0)) /
            (a * a + w * w);
      }
      return gp * J * J;
    }
    default:
      throw std::invalid_argument("closed_form_pe: no analytic solution for this pulse kind");
  }
}

double cauchy_schwarz_bound(const PulseShape& shape, const LossModel& loss, double t0) {
  loss.validate();
  return loss.ratio() * cumulative_norm(shape, t0);
}

PulseShape optimal_rising_profile(const LossModel& loss, double t0) {
  loss.validate();
  return PulseShape::rising_exp(2.0 / loss.total(), t0);
}

std::string fock1_to_csv(const Fock1Result& result) {
  CsvWriter w({"t", "pe"});
  for (size_t i = 0; i < result.t.size(); ++i) w.row({result.t[i], result.pe[i]});
  return w.str();
}

}  // namespace atomex
