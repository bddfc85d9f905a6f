#include "atomex/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "atomex/csv.hpp"

namespace atomex {

namespace {

constexpr double kGolden = 0.61803398874989484820;

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    xs[static_cast<size_t>(j)] = lo * std::pow(hi / lo, static_cast<double>(j) / (n - 1));
  }
  return xs;
}

}  // namespace

double FieldSpec::effective_photons() const {
  switch (kind) {
    case FieldKind::Fock1:
      return 1.0;
    case FieldKind::Coherent:
      return nbar;
    case FieldKind::Fock:
      return static_cast<double>(n_photons);
  }
  return 1.0;
}

ScalarMax golden_max(const std::function<double(double)>& f, double lo, double hi,
                     double xtol_rel, int max_iter) {
  if (!(hi > lo)) throw std::invalid_argument("golden_max: needs lo < hi");
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  ScalarMax out;
  out.evaluations = 2;
  for (int i = 0; i < max_iter; ++i) {
    if (b - a <= xtol_rel * (std::fabs(a) + std::fabs(b) + 1e-30)) {
      out.converged = true;
      break;
    }
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    }
    ++out.evaluations;
  }
  out.bracket = b - a;
  if (f1 >= f2) {
    out.x = x1;
    out.value = f1;
  } else {
    out.x = x2;
    out.value = f2;
  }
  return out;
}

PeakPoint maximize_trace(std::span<const double> t, std::span<const double> pe,
                         const std::function<double(double)>& reevaluate) {
  if (t.empty() || t.size() != pe.size()) {
    throw std::invalid_argument("maximize_trace: needs matching non-empty samples");
  }
  size_t best = 0;
  for (size_t i = 1; i < t.size(); ++i) {
    if (pe[i] > pe[best]) best = i;
  }
  if (t.size() == 1 || !reevaluate) return {t[best], pe[best]};
  size_t i0 = best > 0 ? best - 1 : best;
  size_t i1 = best + 1 < t.size() ? best + 1 : best;
  if (i0 == i1) return {t[best], pe[best]};
  ScalarMax m = golden_max(reevaluate, t[i0], t[i1], 1e-8, 300);
  if (m.value >= pe[best]) return {m.x, m.value};
  return {t[best], pe[best]};
}

PeakPoint maximize_trace(const Fock1Result& trace) {
  auto cb = [&trace](double t) {
    auto it = std::upper_bound(trace.t.begin(), trace.t.end(), t);
    size_t cell = it == trace.t.begin() ? 0 : static_cast<size_t>(it - trace.t.begin()) - 1;
    if (cell + 1 >= trace.t.size()) cell = trace.t.size() - 2;
    return fock1_pe_between(trace, cell, t);
  };
  return maximize_trace(trace.t, trace.pe, cb);
}

PeakPoint peak_excitation(const PulseShape& shape, const LossModel& loss, const FieldSpec& field) {
  // Every pumping term carries the envelope, so pe decays once the pulse
  // ends: the search grid can stop at the support edge. 600 points are ample
  // to bracket the winning oscillation; the golden probe restores precision.
  std::vector<double> grid = default_trace_grid(shape, loss.total(), 600, false);
  if (field.kind == FieldKind::Fock1) {
    return maximize_trace(pe_trace_fock1(shape, loss, grid));
  }
  ExcitationTrace trace = field.kind == FieldKind::Coherent
                              ? integrate_coherent(shape, loss, field.nbar, grid)
                              : integrate_fock_hierarchy(shape, loss, field.n_photons, grid);
  size_t best = 0;
  for (size_t i = 1; i < trace.pe.size(); ++i) {
    if (trace.pe[i] > trace.pe[best]) best = i;
  }
  size_t i0 = best > 0 ? best - 1 : best;
  DriveSystem sys = field.kind == FieldKind::Coherent
                        ? DriveSystem::coherent(shape, loss, field.nbar, grid.front())
                        : DriveSystem::fock(shape, loss, field.n_photons, grid.front());
  sys.advance_to(grid[i0]);
  auto cb = [&sys](double t) { return sys.probe_pe(t); };
  return maximize_trace(trace.t, trace.pe, cb);
}

OptimizationResult optimize_duration(PulseKind family, const LossModel& loss,
                                     const FieldSpec& field) {
  loss.validate();
  auto make_shape = [&](double T) {
    switch (family) {
      case PulseKind::Square:
        return PulseShape::square(T);
      case PulseKind::Gaussian:
        return PulseShape::gaussian(T);
      case PulseKind::DecayingExp:
        return PulseShape::decaying_exp(T);
      case PulseKind::RisingExp:
        return PulseShape::rising_exp(T);
      default:
        throw std::invalid_argument("optimize_duration: family needs a single duration parameter");
    }
  };
  long evals = 0;
  // The exact peak is a probability. Far above the optimal duration the
  // photon-ladder system becomes violently non-normal (level-to-level gains
  // ~ sqrt(N gamma T)), and truncation errors can cascade into values far
  // outside [0, 1]; such points are rejected rather than compared.
  auto objective = [&](double T) {
    ++evals;
    double pe = peak_excitation(make_shape(T), loss, field).pe;
    return pe >= -1e-6 && pe <= 1.0 + 1e-6 ? pe : -1e300;
  };

  double scale = field.effective_photons() * loss.gamma_p;
  constexpr int kScan = 60;
  std::vector<double> ts = log_spaced(1e-3 / scale, 1e3 / scale, kScan);
  int best = 0;
  std::vector<double> vs(kScan);
  for (int j = 0; j < kScan; ++j) {
    vs[static_cast<size_t>(j)] = objective(ts[static_cast<size_t>(j)]);
    if (vs[static_cast<size_t>(j)] > vs[static_cast<size_t>(best)]) best = j;
  }
  double a = best > 0 ? ts[static_cast<size_t>(best - 1)] : ts[static_cast<size_t>(best)];
  double b = best + 1 < kScan ? ts[static_cast<size_t>(best + 1)] : ts[static_cast<size_t>(best)];
  ScalarMax m = golden_max(objective, a, b, 1e-6, 200);
  evals += 0;  // objective already counts
  double t_opt = m.value >= vs[static_cast<size_t>(best)] ? m.x : ts[static_cast<size_t>(best)];

  PeakPoint pk = peak_excitation(make_shape(t_opt), loss, field);
  OptimizationResult out;
  out.params["T"] = t_opt;
  out.t_max = pk.t;
  out.pe_max = pk.pe;
  out.evaluations = evals;
  out.converged = m.converged;
  out.bracket["T"] = m.bracket;
  return out;
}

double cavity_peak_time(double g, double kappa) {
  if (!(std::isfinite(g) && g > 0.0 && std::isfinite(kappa) && kappa > 0.0)) {
    throw std::invalid_argument("cavity_peak_time: rates must be positive");
  }
  double disc = 4.0 * g * g - kappa * kappa;
  if (disc <= 0.0) {
    throw std::domain_error("cavity_peak_time: needs 2g > kappa (oscillatory envelope)");
  }
  double w = std::sqrt(disc);
  double x = w / kappa;
  if (x < 1e-6) return (4.0 / kappa) * (1.0 - x * x / 3.0 + x * x * x * x / 5.0);
  return (4.0 / w) * std::atan(x);
}

double decaying_exp_peak_time(double T, const LossModel& loss) {
  loss.validate();
  if (!(std::isfinite(T) && T > 0.0)) {
    throw std::invalid_argument("decaying_exp_peak_time: T must be positive");
  }
  double x = loss.total() * T;
  if (std::fabs(x - 2.0) < 1e-12) return T;
  return 2.0 * T * std::log1p((x - 2.0) / 2.0) / (x - 2.0);
}

namespace {

// Peak over time of the analytic cavity-decay solution at free (g, kappa).
PeakPoint cavity_free_peak(const LossModel& loss, double g, double kappa) {
  PulseShape s = PulseShape::atom_cavity(g, kappa);
  std::vector<double> grid = default_trace_grid(s, loss.total(), 1200, false);
  std::vector<double> pes(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) pes[i] = closed_form_pe(s, loss, grid[i]);
  auto cb = [&](double t) { return closed_form_pe(s, loss, t); };
  return maximize_trace(grid, pes, cb);
}

}  // namespace

OptimizationResult optimize_cavity_shape(const LossModel& loss, bool full_search) {
  loss.validate();
  double gamma = loss.total();
  long evals = 0;
  OptimizationResult out;

  if (!full_search) {
    double kappa = gamma;
    auto objective = [&](double g) {
      ++evals;
      PulseShape s = PulseShape::atom_cavity(g, kappa);
      return closed_form_pe(s, loss, cavity_peak_time(g, kappa));
    };
    constexpr int kScan = 60;
    std::vector<double> gs = log_spaced(0.52 * kappa, 5.0 * kappa, kScan);
    int best = 0;
    std::vector<double> vs(kScan);
    for (int j = 0; j < kScan; ++j) {
      vs[static_cast<size_t>(j)] = objective(gs[static_cast<size_t>(j)]);
      if (vs[static_cast<size_t>(j)] > vs[static_cast<size_t>(best)]) best = j;
    }
    double a = best > 0 ? gs[static_cast<size_t>(best - 1)] : gs[static_cast<size_t>(best)];
    double b = best + 1 < kScan ? gs[static_cast<size_t>(best + 1)] : gs[static_cast<size_t>(best)];
    ScalarMax m = golden_max(objective, a, b, 1e-7, 200);
    double g_opt = m.x;
    out.params["g"] = g_opt;
    out.params["kappa"] = kappa;
    out.t_max = cavity_peak_time(g_opt, kappa);
    out.pe_max = closed_form_pe(PulseShape::atom_cavity(g_opt, kappa), loss, out.t_max);
    out.evaluations = evals;
    out.converged = m.converged;
    out.bracket["g"] = m.bracket;
    return out;
  }

  // Free (g, kappa, t) search: coarse log grid, then cyclic per-coordinate
  // golden refinement with shrinking brackets.
  std::vector<double> gs = log_spaced(0.2 * gamma, 4.0 * gamma, 36);
  std::vector<double> ks = log_spaced(0.25 * gamma, 6.0 * gamma, 36);
  double best_g = gs[0], best_k = ks[0], best_pe = -1.0;
  for (double g : gs) {
    for (double k : ks) {
      ++evals;
      PeakPoint pk = cavity_free_peak(loss, g, k);
      if (pk.pe > best_pe) {
        best_pe = pk.pe;
        best_g = g;
        best_k = k;
      }
    }
  }
  double width_g = 0.0, width_k = 0.0;
  for (double factor : {1.35, 1.2, 1.1, 1.05, 1.02, 1.008}) {
    ScalarMax mg = golden_max(
        [&](double g) {
          ++evals;
          return cavity_free_peak(loss, g, best_k).pe;
        },
        best_g / factor, best_g * factor, 1e-6, 120);
    best_g = mg.x;
    width_g = mg.bracket;
    ScalarMax mk = golden_max(
        [&](double k) {
          ++evals;
          return cavity_free_peak(loss, best_g, k).pe;
        },
        best_k / factor, best_k * factor, 1e-6, 120);
    best_k = mk.x;
    width_k = mk.bracket;
  }
  PeakPoint pk = cavity_free_peak(loss, best_g, best_k);
  out.params["g"] = best_g;
  out.params["kappa"] = best_k;
  out.t_max = pk.t;
  out.pe_max = pk.pe;
  out.evaluations = evals;
  out.converged = true;
  out.bracket["g"] = width_g;
  out.bracket["kappa"] = width_k;
  return out;
}

namespace {

PeakPoint filtered_gaussian_peak(const LossModel& loss, double T, double g, double kappa,
                                 int samples) {
  PulseShape filtered = cavity_filter_output(PulseShape::gaussian(T), g, kappa, samples);
  return maximize_trace(pe_trace_fock1(filtered, loss));
}

// Search resolution: the objective is smooth in (T, g, kappa), so the scan
// and bracket shrinking run on a reduced filter grid; only the reported
// optimum is re-evaluated at full resolution.
constexpr int kFilterSearchSamples = 1280;
constexpr int kFilterFinalSamples = 4096;

OptimizationResult refine_filtered(const LossModel& loss, double T, double g, double kappa,
                                   long evals, const std::vector<double>& factors) {
  OptimizationResult out;
  double pe_prev = -1.0;
  double wT = 0.0, wg = 0.0, wk = 0.0;
  bool settled = false;
  for (double factor : factors) {
    ScalarMax mT = golden_max(
        [&](double x) {
          ++evals;
          return filtered_gaussian_peak(loss, x, g, kappa, kFilterSearchSamples).pe;
        },
        T / factor, T * factor, 1e-4, 80);
    T = mT.x;
    wT = mT.bracket;
    ScalarMax mg = golden_max(
        [&](double x) {
          ++evals;
          return filtered_gaussian_peak(loss, T, x, kappa, kFilterSearchSamples).pe;
        },
        g / factor, g * factor, 1e-4, 80);
    g = mg.x;
    wg = mg.bracket;
    ScalarMax mk = golden_max(
        [&](double x) {
          ++evals;
          return filtered_gaussian_peak(loss, T, g, x, kFilterSearchSamples).pe;
        },
        kappa / factor, kappa * factor, 1e-4, 80);
    kappa = mk.x;
    wk = mk.bracket;
    if (std::fabs(mk.value - pe_prev) < 1e-8) {
      settled = true;
      break;
    }
    pe_prev = mk.value;
  }
  PeakPoint pk = filtered_gaussian_peak(loss, T, g, kappa, kFilterFinalSamples);
  out.params["T"] = T;
  out.params["g"] = g;
  out.params["kappa"] = kappa;
  out.t_max = pk.t;
  out.pe_max = pk.pe;
  out.evaluations = evals;
  out.converged = settled || (wT < 1e-3 * T && wg < 1e-3 * g && wk < 1e-3 * kappa);
  out.bracket["T"] = wT;
  out.bracket["g"] = wg;
  out.bracket["kappa"] = wk;
  return out;
}

}  // namespace

OptimizationResult optimize_filtered_gaussian(const LossModel& loss) {
  loss.validate();
  double gamma = loss.total();
  std::vector<double> Ts = log_spaced(0.4 / gamma, 4.0 / gamma, 6);
  std::vector<double> gs = log_spaced(0.5 * gamma, 4.0 * gamma, 7);
  std::vector<double> ks = log_spaced(0.8 * gamma, 8.0 * gamma, 7);
  long evals = 0;
  double bT = Ts[0], bg = gs[0], bk = ks[0], bpe = -1.0;
  for (double T : Ts) {
    for (double g : gs) {
      for (double k : ks) {
        ++evals;
        double pe = filtered_gaussian_peak(loss, T, g, k, kFilterSearchSamples).pe;
        if (pe > bpe) {
          bpe = pe;
          bT = T;
          bg = g;
          bk = k;
        }
      }
    }
  }
  return refine_filtered(loss, bT, bg, bk, evals, {1.6, 1.35, 1.2, 1.1, 1.05, 1.02});
}

OptimizationResult optimize_filtered_gaussian(const LossModel& loss, double T0, double g0,
                                              double kappa0) {
  loss.validate();
  if (!(T0 > 0.0 && g0 > 0.0 && kappa0 > 0.0)) {
    throw std::invalid_argument("optimize_filtered_gaussian: warm start must be positive");
  }
  return refine_filtered(loss, T0, g0, kappa0, 0, {1.12, 1.04, 1.015});
}

std::string optimization_to_csv(const OptimizationResult& result) {
  std::vector<std::string> header;
  std::vector<double> row;
  for (const auto& [key, value] : result.params) {
    header.push_back(key);
    row.push_back(value);
  }
  header.insert(header.end(), {"t_max", "pe_max", "evaluations", "converged"});
  row.push_back(result.t_max);
  row.push_back(result.pe_max);
  row.push_back(static_cast<double>(result.evaluations));
  row.push_back(result.converged ? 1.0 : 0.0);
  CsvWriter w(std::move(header));
  w.row(row);
  return w.str();
}

std::string optimization_to_text(const OptimizationResult& result) {
  std::string text;
  for (const auto& [key, value] : result.params) {
    text += key + " = " + format_float(value) + "\n";
  }
  text += "t_max = " + format_float(result.t_max) + "\n";
  text += "pe_max = " + format_float(result.pe_max) + "\n";
  text += "evaluations = " + std::to_string(result.evaluations) + "\n";
  text += std::string("converged = ") + (result.converged ? "yes" : "no") + "\n";
  for (const auto& [key, value] : result.bracket) {
    text += "bracket_" + key + " = " + format_float(value) + "\n";
  }
  return text;
}

}  // namespace atomex
