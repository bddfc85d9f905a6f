// Time-domain integration of the driven two-level atom: the coherent-state
// Bloch system, the N-photon ladder of coupled sectors, the exactly solvable
// square coherent drive, and the quasi-steady (adiabatic) response.
#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "atomex/pulse.hpp"

namespace atomex {

struct BlochState {
  double sigma = 0.0;  // dipole cross term driving the excited population
  double pe = 0.0;     // excited-state population
};

struct FockHierarchyState {
  int photon_number = 0;
  std::vector<double> sigma_levels;  // Sigma_{n-1} for n = 1..N
  std::vector<double> pe_levels;     // P_{e,n} for n = 1..N
};

struct ExcitationTrace {
  std::vector<double> t;
  std::vector<double> pe;
  std::vector<double> sigma;
  LossModel loss;
  int n_photons = 0;  // ladder depth when driven by a photon-number state, else 0
  double nbar = 0.0;  // mean photon number when driven by a coherent state, else 0
};

// Core Bloch integrator with explicit coefficients:
//   sigma' = -(gamma/2) sigma + 4 A f(t) pe - 2 A f(t)
//   pe'    = -gamma pe - A f(t) sigma
// starting from the ground state. When start_time is finite and below
// grid.front(), the system is first integrated quietly from start_time so a
// drive that is already live before the first recorded sample is not
// truncated. extra_stops lets callers force steps onto drive kinks that are
// not grid points.
ExcitationTrace integrate_bloch_raw(const std::function<double(double)>& f, double gamma,
                                    double drive_amp, std::span<const double> grid,
                                    std::span<const double> extra_stops = {},
                                    double start_time = std::numeric_limits<double>::quiet_NaN());

// Coherent drive with mean photon number nbar: A = sqrt(nbar * gamma_p).
// Integration starts at drive_start_time(shape), so envelopes with a soft
// left tail contribute their amplitude below grid.front() as well; the trace
// records on grid.
ExcitationTrace integrate_coherent(const PulseShape& shape, const LossModel& loss, double nbar,
                                   std::span<const double> grid);
ExcitationTrace integrate_coherent(const PulseShape& shape, const LossModel& loss, double nbar);

// N-photon wavepacket: 2N coupled equations over sectors n = 1..N,
//   pe_n'      = -gamma pe_n - sqrt(gamma_p n) f sigma_{n-1}
//   sigma_n-1' = -(gamma/2) sigma_{n-1} + 4 sqrt(gamma_p n) f pe_{n-1} - 2 sqrt(gamma_p n) f
// with pe_0 = 0; the trace reports the top sector. State layout is interleaved
// (sigma_0, pe_1, sigma_1, pe_2, ...) so coupling stays nearest-neighbour.
// Like integrate_coherent, integration starts at drive_start_time(shape).
ExcitationTrace integrate_fock_hierarchy(const PulseShape& shape, const LossModel& loss,
                                         int n_photons, std::span<const double> grid,
                                         FockHierarchyState* final_state = nullptr);
ExcitationTrace integrate_fock_hierarchy(const PulseShape& shape, const LossModel& loss,
                                         int n_photons);

// Analytic solution for the square coherent drive in the oscillatory regime
// Omega0^2 > gamma^2/16, Omega0 = 2 sqrt(nbar gamma_p / T). Throws
// numeric_error in the overdamped regime. Valid on [0, T]; continues by free
// decay beyond T.
double coherent_square_exact(const LossModel& loss, double nbar, double T, double t);

struct PeakPoint {
  double t = 0.0;
  double pe = 0.0;
};

// First interior swing of the square coherent drive: t = pi/Omega with
// pe = P_inf (1 + e^{-3 pi gamma / (4 Omega)}). Requires t <= T to be the
// in-pulse maximum; callers check.
PeakPoint coherent_square_interior_peak(const LossModel& loss, double nbar, double T);

// Quasi-steady response 4 nbar gamma_p f^2 / (gamma^2 + 8 nbar gamma_p f^2).
double adiabatic_pe(const PulseShape& shape, const LossModel& loss, double nbar, double t);

// Checkpointed continuation of a driven system for peak refinement: the
// committed state only moves forward via advance_to, while probe_pe
// integrates a scratch copy, so a bracketing search can probe the same
// interval repeatedly at full integrator accuracy. Construction integrates
// quietly from drive_start_time(shape) up to t_start when the drive is
// already live before t_start, matching the batch integrators.
class DriveSystem {
 public:
  static DriveSystem coherent(const PulseShape& shape, const LossModel& loss, double nbar,
                              double t_start);
  static DriveSystem fock(const PulseShape& shape, const LossModel& loss, int n_photons,
                          double t_start);

  double front() const { return t_; }
  void advance_to(double t);
  double probe_pe(double t) const;

 private:
  DriveSystem() = default;
  std::function<void(double, std::span<const double>, std::span<double>)> rhs_;
  std::vector<double> kinks_;
  std::vector<double> y_;
  double t_ = 0.0;
  size_t pe_index_ = 0;
};

// Header "t,pe,sigma"; hierarchy traces report the top sector.
std::string trace_to_csv(const ExcitationTrace& trace);

}  // namespace atomex
