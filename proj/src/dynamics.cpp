#include "atomex/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "atomex/csv.hpp"
#include "atomex/ode.hpp"

namespace atomex {

namespace {

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("integrate: empty time grid");
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i + 1] > grid[i])) throw std::invalid_argument("integrate: grid must increase strictly");
  }
}

// Output grid plus drive kinks, sorted, with near-duplicates collapsed onto
// the grid values so stop matching stays exact.
std::vector<double> build_stops(std::span<const double> grid, std::span<const double> extra) {
  std::vector<double> stops(grid.begin() + 1, grid.end());
  for (double e : extra) {
    if (e <= grid.front() || e >= grid.back()) continue;
    auto it = std::lower_bound(stops.begin(), stops.end(), e);
    double tol = 1e-9 * (1.0 + std::fabs(e));
    bool dup = (it != stops.end() && *it - e < tol) || (it != stops.begin() && e - *(it - 1) < tol);
    if (!dup) stops.insert(it, e);
  }
  return stops;
}

void run_recorded(const OdeRhs& rhs, std::vector<double>& y, std::span<const double> grid,
                  std::span<const double> extra, double start_time, size_t sigma_index,
                  size_t pe_index, ExcitationTrace& out) {
  if (std::isfinite(start_time) && start_time < grid.front()) {
    std::vector<double> pre;
    for (double e : extra) {
      if (e > start_time && e < grid.front()) pre.push_back(e);
    }
    std::sort(pre.begin(), pre.end());
    integrate_ode(rhs, y, start_time, grid.front(), pre, nullptr);
  }
  out.t.assign(grid.begin(), grid.end());
  out.sigma.resize(grid.size());
  out.pe.resize(grid.size());
  out.sigma[0] = y[sigma_index];
  out.pe[0] = y[pe_index];
  if (grid.size() == 1) return;
  std::vector<double> stops = build_stops(grid, extra);
  size_t next = 1;
  integrate_ode(rhs, y, grid.front(), grid.back(), stops,
                [&](double t, std::span<const double> state) {
                  if (next < grid.size() &&
                      std::fabs(t - grid[next]) <= 1e-9 * (1.0 + std::fabs(t))) {
                    out.sigma[next] = state[sigma_index];
                    out.pe[next] = state[pe_index];
                    ++next;
                  }
                });
  if (next != grid.size()) throw numeric_error("integrate: output grid was not fully visited");
}

}  // namespace

ExcitationTrace integrate_bloch_raw(const std::function<double(double)>& f, double gamma,
                                    double drive_amp, std::span<const double> grid,
                                    std::span<const double> extra_stops, double start_time) {
  if (!(std::isfinite(gamma) && gamma >= 0.0)) {
    throw std::invalid_argument("integrate_bloch_raw: gamma must be finite and >= 0");
  }
  if (!std::isfinite(drive_amp)) {
    throw std::invalid_argument("integrate_bloch_raw: drive amplitude must be finite");
  }
  check_grid(grid);
  OdeRhs rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    double fv = f(t);
    dy[0] = -0.5 * gamma * y[0] + 4.0 * drive_amp * fv * y[1] - 2.0 * drive_amp * fv;
    dy[1] = -gamma * y[1] - drive_amp * fv * y[0];
  };
  std::vector<double> y = {0.0, 0.0};
  ExcitationTrace out;
  run_recorded(rhs, y, grid, extra_stops, start_time, 0, 1, out);
  return out;
}

ExcitationTrace integrate_coherent(const PulseShape& shape, const LossModel& loss, double nbar,
                                   std::span<const double> grid) {
  loss.validate();
  if (!(std::isfinite(nbar) && nbar > 0.0)) {
    throw std::invalid_argument("integrate_coherent: nbar must be finite and positive");
  }
  double amp = std::sqrt(nbar * loss.gamma_p);
  ExcitationTrace out = integrate_bloch_raw(
      [&shape](double t) { return evaluate_extended(shape, t); }, loss.total(), amp, grid,
      kink_times(shape), drive_start_time(shape));
  out.loss = loss;
  out.nbar = nbar;
  return out;
}

ExcitationTrace integrate_coherent(const PulseShape& shape, const LossModel& loss, double nbar) {
  std::vector<double> grid = default_trace_grid(shape, loss.total());
  return integrate_coherent(shape, loss, nbar, grid);
}

ExcitationTrace integrate_fock_hierarchy(const PulseShape& shape, const LossModel& loss,
                                         int n_photons, std::span<const double> grid,
                                         FockHierarchyState* final_state) {
  loss.validate();
  if (n_photons < 1) throw std::invalid_argument("integrate_fock_hierarchy: needs n >= 1");
  check_grid(grid);
  size_t n = static_cast<size_t>(n_photons);
  double gamma = loss.total();
  std::vector<double> c(n);
  for (size_t k = 0; k < n; ++k) c[k] = std::sqrt(loss.gamma_p * static_cast<double>(k + 1));

  // Interleaved state: y[2k] = Sigma_k, y[2k+1] = P_{e,k+1}.
  OdeRhs rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    double fv = evaluate_extended(shape, t);
    for (size_t k = 0; k < n; ++k) {
      double pe_below = k > 0 ? y[2 * k - 1] : 0.0;
      dy[2 * k] = -0.5 * gamma * y[2 * k] + 4.0 * c[k] * fv * pe_below - 2.0 * c[k] * fv;
      dy[2 * k + 1] = -gamma * y[2 * k + 1] - c[k] * fv * y[2 * k];
    }
  };

  std::vector<double> y(2 * n, 0.0);
  ExcitationTrace out;
  run_recorded(rhs, y, grid, kink_times(shape), drive_start_time(shape), 2 * n - 2, 2 * n - 1,
               out);
  out.loss = loss;
  out.n_photons = n_photons;
  if (final_state != nullptr) {
    final_state->photon_number = n_photons;
    final_state->sigma_levels.resize(n);
    final_state->pe_levels.resize(n);
    for (size_t k = 0; k < n; ++k) {
      final_state->sigma_levels[k] = y[2 * k];
      final_state->pe_levels[k] = y[2 * k + 1];
    }
  }
  return out;
}

ExcitationTrace integrate_fock_hierarchy(const PulseShape& shape, const LossModel& loss,
                                         int n_photons) {
  std::vector<double> grid = default_trace_grid(shape, loss.total());
  return integrate_fock_hierarchy(shape, loss, n_photons, grid);
}

double coherent_square_exact(const LossModel& loss, double nbar, double T, double t) {
  loss.validate();
  if (!(std::isfinite(nbar) && nbar > 0.0) || !(std::isfinite(T) && T > 0.0)) {
    throw std::invalid_argument("coherent_square_exact: nbar and T must be positive");
  }
  double gamma = loss.total();
  double om0sq = 4.0 * nbar * loss.gamma_p / T;
  double omsq = om0sq - gamma * gamma / 16.0;
  if (!(omsq > 0.0)) {
    throw numeric_error("coherent_square_exact: overdamped regime has no oscillatory solution");
  }
  double om = std::sqrt(omsq);
  double pinf = om0sq / (gamma * gamma + 2.0 * om0sq);
  auto during = [&](double tt) {
    return pinf * (1.0 - std::exp(-0.75 * gamma * tt) *
                             (std::cos(om * tt) + 0.75 * gamma / om * std::sin(om * tt)));
  };
  if (t <= 0.0) return 0.0;
  if (t <= T) return during(t);
  return during(T) * std::exp(-gamma * (t - T));
}

PeakPoint coherent_square_interior_peak(const LossModel& loss, double nbar, double T) {
  loss.validate();
  double gamma = loss.total();
  double om0sq = 4.0 * nbar * loss.gamma_p / T;
  double omsq = om0sq - gamma * gamma / 16.0;
  if (!(omsq > 0.0)) {
    throw numeric_error("coherent_square_interior_peak: overdamped regime");
  }
  double om = std::sqrt(omsq);
  double pinf = om0sq / (gamma * gamma + 2.0 * om0sq);
  double pi = std::numbers::pi;
  return {pi / om, pinf * (1.0 + std::exp(-0.75 * gamma * pi / om))};
}

double adiabatic_pe(const PulseShape& shape, const LossModel& loss, double nbar, double t) {
  loss.validate();
  double f = evaluate_extended(shape, t);
  double drive = nbar * loss.gamma_p * f * f;
  double gamma = loss.total();
  return 4.0 * drive / (gamma * gamma + 8.0 * drive);
}

namespace {

void propagate(const OdeRhs& rhs, std::vector<double>& y, double t0, double t1,
               const std::vector<double>& kinks) {
  if (t1 <= t0) return;
  std::vector<double> stops;
  for (double k : kinks) {
    double tol = 1e-12 * (1.0 + std::fabs(k));
    if (k > t0 + tol && k < t1 - tol) stops.push_back(k);
  }
  integrate_ode(rhs, y, t0, t1, stops, nullptr);
}

}  // namespace

DriveSystem DriveSystem::coherent(const PulseShape& shape, const LossModel& loss, double nbar,
                                  double t_start) {
  loss.validate();
  if (!(std::isfinite(nbar) && nbar > 0.0)) {
    throw std::invalid_argument("DriveSystem::coherent: nbar must be positive");
  }
  DriveSystem sys;
  double gamma = loss.total();
  double amp = std::sqrt(nbar * loss.gamma_p);
  sys.rhs_ = [shape, gamma, amp](double t, std::span<const double> y, std::span<double> dy) {
    double fv = evaluate_extended(shape, t);
    dy[0] = -0.5 * gamma * y[0] + 4.0 * amp * fv * y[1] - 2.0 * amp * fv;
    dy[1] = -gamma * y[1] - amp * fv * y[0];
  };
  sys.kinks_ = kink_times(shape);
  std::sort(sys.kinks_.begin(), sys.kinks_.end());
  sys.y_ = {0.0, 0.0};
  sys.t_ = t_start;
  sys.pe_index_ = 1;
  double live_from = drive_start_time(shape);
  if (live_from < t_start) propagate(sys.rhs_, sys.y_, live_from, t_start, sys.kinks_);
  return sys;
}

DriveSystem DriveSystem::fock(const PulseShape& shape, const LossModel& loss, int n_photons,
                              double t_start) {
  loss.validate();
  if (n_photons < 1) throw std::invalid_argument("DriveSystem::fock: needs n >= 1");
  DriveSystem sys;
  size_t n = static_cast<size_t>(n_photons);
  double gamma = loss.total();
  std::vector<double> c(n);
  for (size_t k = 0; k < n; ++k) c[k] = std::sqrt(loss.gamma_p * static_cast<double>(k + 1));
  sys.rhs_ = [shape, gamma, c = std::move(c), n](double t, std::span<const double> y,
                                                 std::span<double> dy) {
    double fv = evaluate_extended(shape, t);
    for (size_t k = 0; k < n; ++k) {
      double pe_below = k > 0 ? y[2 * k - 1] : 0.0;
      dy[2 * k] = -0.5 * gamma * y[2 * k] + 4.0 * c[k] * fv * pe_below - 2.0 * c[k] * fv;
      dy[2 * k + 1] = -gamma * y[2 * k + 1] - c[k] * fv * y[2 * k];
    }
  };
  sys.kinks_ = kink_times(shape);
  std::sort(sys.kinks_.begin(), sys.kinks_.end());
  sys.y_.assign(2 * n, 0.0);
  sys.t_ = t_start;
  sys.pe_index_ = 2 * n - 1;
  double live_from = drive_start_time(shape);
  if (live_from < t_start) propagate(sys.rhs_, sys.y_, live_from, t_start, sys.kinks_);
  return sys;
}

void DriveSystem::advance_to(double t) {
  if (t < t_) throw std::invalid_argument("DriveSystem::advance_to: time runs forward only");
  propagate(rhs_, y_, t_, t, kinks_);
  t_ = t;
}

double DriveSystem::probe_pe(double t) const {
  if (t < t_) throw std::invalid_argument("DriveSystem::probe_pe: t before committed front");
  std::vector<double> scratch = y_;
  propagate(rhs_, scratch, t_, t, kinks_);
  return scratch[pe_index_];
}

std::string trace_to_csv(const ExcitationTrace& trace) {
  CsvWriter w({"t", "pe", "sigma"});
  for (size_t i = 0; i < trace.t.size(); ++i) w.row({trace.t[i], trace.pe[i], trace.sigma[i]});
  return w.str();
}

}  // namespace atomex
