// Single-photon (one-quantum wavepacket) excitation of a lossy two-level
// atom: exact trace via a co-moving absorbed amplitude, per-shape analytic
// solutions, and the Cauchy-Schwarz ceiling with the envelope that attains it.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "atomex/pulse.hpp"

namespace atomex {

struct Fock1Result {
  std::vector<double> t;
  std::vector<double> pe;
  // Co-moving absorbed amplitude J(t) with J' = -(gamma/2) J + f;
  // pe = gamma_p * J^2. Kept because peak refinement restarts from it.
  std::vector<double> amplitude;
  PulseShape shape;
  LossModel loss;
};

// P_e(t) on the given strictly increasing grid. The amplitude accumulates
// cell by cell with composite Simpson refined to 1e-13 per cell, split at
// envelope kinks, and is seeded by integrating from far below the grid so
// truncation sits near 1e-12.
Fock1Result pe_trace_fock1(const PulseShape& shape, const LossModel& loss,
                           std::span<const double> grid);
Fock1Result pe_trace_fock1(const PulseShape& shape, const LossModel& loss);

// Analytic P_e(t); supported kinds: Square, Gaussian, DecayingExp,
// AtomCavityDecay. Throws std::invalid_argument otherwise.
double closed_form_pe(const PulseShape& shape, const LossModel& loss, double t);

// (gamma_p/gamma) * integral of f^2 up to t0: a hard ceiling on P_e(t0).
double cauchy_schwarz_bound(const PulseShape& shape, const LossModel& loss, double t0);

// Rising exponential with rate gamma_p + gamma_b ending at t0; it drives P_e
// exactly to gamma_p/gamma at t0.
PulseShape optimal_rising_profile(const LossModel& loss, double t0 = 0.0);

// Continuation of a computed trace: P_e at any t in [result.t[i], result.t[i+1]]
// by restarting the amplitude from the checkpoint at the cell start.
double fock1_pe_between(const Fock1Result& result, size_t cell, double t);

std::string fock1_to_csv(const Fock1Result& result);

}  // namespace atomex
