// Scalar and nested searches for the best pulse parameters and observation
// time: duration optimization for every drive, the cavity-shape optimum with
// its analytic peak time, and the cavity-filtered Gaussian search.
#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>

#include "atomex/dynamics.hpp"
#include "atomex/fock_single.hpp"
#include "atomex/pulse.hpp"

namespace atomex {

enum class FieldKind { Fock1, Coherent, Fock };

struct FieldSpec {
  FieldKind kind = FieldKind::Fock1;
  double nbar = 1.0;
  int n_photons = 1;

  static FieldSpec fock1() { return {FieldKind::Fock1, 1.0, 1}; }
  static FieldSpec coherent(double nbar) { return {FieldKind::Coherent, nbar, 1}; }
  static FieldSpec fock(int n) { return {FieldKind::Fock, 1.0, n}; }

  // Photon-number scale that sets the duration search bracket.
  double effective_photons() const;
};

struct OptimizationResult {
  std::map<std::string, double> params;
  double t_max = 0.0;
  double pe_max = 0.0;
  long evaluations = 0;
  bool converged = false;
  std::map<std::string, double> bracket;  // final bracket width per parameter
};

struct ScalarMax {
  double x = 0.0;
  double value = 0.0;
  long evaluations = 0;
  bool converged = false;
  double bracket = 0.0;
};

// Golden-section maximum of a unimodal function on [lo, hi].
ScalarMax golden_max(const std::function<double(double)>& f, double lo, double hi,
                     double xtol_rel = 1e-6, int max_iter = 200);

// Refined peak of sampled values: argmax over the samples, then golden-section
// on the continuous re-evaluation callback inside the bracketing cells.
PeakPoint maximize_trace(std::span<const double> t, std::span<const double> pe,
                         const std::function<double(double)>& reevaluate);
PeakPoint maximize_trace(const Fock1Result& trace);

// Peak P_e over time for the given drive, on the default grid with golden
// refinement.
PeakPoint peak_excitation(const PulseShape& shape, const LossModel& loss, const FieldSpec& field);

// Best duration for a single-parameter envelope family: 60-point log scan of
// T over [1e-3, 1e3]/(n_eff gamma_p), golden refinement, peak re-extraction.
OptimizationResult optimize_duration(PulseKind family, const LossModel& loss,
                                     const FieldSpec& field);

// Cavity-decay envelope: kappa pinned to gamma_p+gamma_b, g optimized with the
// analytic peak time; full_search cross-checks with a free (g, kappa, t) search.
OptimizationResult optimize_cavity_shape(const LossModel& loss, bool full_search = false);

// Gaussian reshaped by the atom-cavity filter, then absorbed as a one-photon
// wavepacket: coarse (T, g, kappa) scan plus cyclic golden refinement. The
// warm-start overload refines around a known good point (figure sweeps).
OptimizationResult optimize_filtered_gaussian(const LossModel& loss);
OptimizationResult optimize_filtered_gaussian(const LossModel& loss, double T0, double g0,
                                              double kappa0);

// Peak time of the underdamped cavity envelope when kappa equals the total
// linewidth: (4/w) atan(w/kappa), w = sqrt(4g^2 - kappa^2).
double cavity_peak_time(double g, double kappa);

// Peak time of the one-photon decaying-exponential solution.
double decaying_exp_peak_time(double T, const LossModel& loss);

std::string optimization_to_csv(const OptimizationResult& result);
std::string optimization_to_text(const OptimizationResult& result);

}  // namespace atomex
