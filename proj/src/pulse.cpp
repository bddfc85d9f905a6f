#include "atomex/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "atomex/csv.hpp"
#include "atomex/ode.hpp"
#include "atomex/quadrature.hpp"
#include "atomex/special_functions.hpp"

namespace atomex {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

// Exact integral of the squared linear interpolant.
double tabulated_norm(std::span<const double> ts, std::span<const double> fs) {
  double total = 0.0;
  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    double dt = ts[i + 1] - ts[i];
    double a = fs[i], b = fs[i + 1];
    total += dt * (a * a + a * b + b * b) / 3.0;
  }
  return total;
}

// Tail norm of the atom-cavity envelope from t to infinity, in closed form.
double cavity_tail(const PulseShape& s, double t) {
  if (t <= 0.0) return 1.0;
  double g = s.g, k = s.kappa;
  double disc = cavity_discriminant(s);
  if (cavity_degenerate_regime(s)) {
    return 2.0 * g * g * std::exp(-k * t) * (t * t + 2.0 * t / k + 2.0 / (k * k));
  }
  if (disc > 0.0) {
    double d = std::sqrt(disc);
    double A2 = 8.0 * g * g * k / disc;
    return 0.5 * A2 *
           (0.5 * (std::exp(-(k - d) * t) / (k - d) + std::exp(-(k + d) * t) / (k + d)) -
            std::exp(-k * t) / k);
  }
  double om = std::sqrt(-disc);
  double A2 = 8.0 * g * g * k / (om * om);
  double osc = (k * std::cos(om * t) - om * std::sin(om * t)) / (k * k + om * om);
  return 0.5 * A2 * std::exp(-k * t) * (1.0 / k - osc);
}

double square_f(const PulseShape& s, double t) {
  return (t > 0.0 && t < s.duration) ? 1.0 / std::sqrt(s.duration) : 0.0;
}

double gaussian_f(const PulseShape& s, double t) {
  double T = s.duration;
  return std::exp(-t * t / (T * T)) / std::sqrt(T * std::sqrt(std::atan(1.0) * 2.0));
}

double tabulated_f(const PulseShape& s, double t) {
  if (t < s.ts.front() || t > s.ts.back()) {
    throw std::domain_error("evaluate: time outside tabulated sample range");
  }
  auto it = std::upper_bound(s.ts.begin(), s.ts.end(), t);
  if (it == s.ts.begin()) return s.fs.front();
  if (it == s.ts.end()) return s.fs.back();
  size_t i = static_cast<size_t>(it - s.ts.begin()) - 1;
  double w = (t - s.ts[i]) / (s.ts[i + 1] - s.ts[i]);
  return s.fs[i] + w * (s.fs[i + 1] - s.fs[i]);
}

}  // namespace

void LossModel::validate() const {
  require(finite_positive(gamma_p), "LossModel: gamma_p must be finite and positive");
  require(std::isfinite(gamma_b) && gamma_b >= 0.0, "LossModel: gamma_b must be finite and >= 0");
}

PulseShape PulseShape::square(double T) {
  require(finite_positive(T), "square pulse: duration must be finite and positive");
  PulseShape s;
  s.kind = PulseKind::Square;
  s.duration = T;
  return s;
}

PulseShape PulseShape::gaussian(double T) {
  require(finite_positive(T), "gaussian pulse: duration must be finite and positive");
  PulseShape s;
  s.kind = PulseKind::Gaussian;
  s.duration = T;
  return s;
}

PulseShape PulseShape::decaying_exp(double T) {
  require(finite_positive(T), "decaying exponential: duration must be finite and positive");
  PulseShape s;
  s.kind = PulseKind::DecayingExp;
  s.duration = T;
  return s;
}

PulseShape PulseShape::rising_exp(double T, double t0) {
  require(finite_positive(T), "rising exponential: duration must be finite and positive");
  require(std::isfinite(t0), "rising exponential: anchor must be finite");
  PulseShape s;
  s.kind = PulseKind::RisingExp;
  s.duration = T;
  s.anchor = t0;
  return s;
}

PulseShape PulseShape::atom_cavity(double g, double kappa) {
  require(finite_positive(g), "atom-cavity pulse: g must be finite and positive");
  require(finite_positive(kappa), "atom-cavity pulse: kappa must be finite and positive");
  PulseShape s;
  s.kind = PulseKind::AtomCavityDecay;
  s.g = g;
  s.kappa = kappa;
  return s;
}

PulseShape PulseShape::tabulated(std::vector<double> t, std::vector<double> f) {
  require(t.size() == f.size(), "tabulated pulse: sample vectors must match in length");
  require(t.size() >= 2, "tabulated pulse: needs at least two samples");
  for (size_t i = 0; i < t.size(); ++i) {
    require(std::isfinite(t[i]) && std::isfinite(f[i]), "tabulated pulse: samples must be finite");
    if (i > 0) require(t[i] > t[i - 1], "tabulated pulse: abscissas must increase strictly");
  }
  double norm = tabulated_norm(t, f);
  require(norm > 0.0, "tabulated pulse: zero norm");
  PulseShape s;
  s.kind = PulseKind::Tabulated;
  if (std::fabs(norm - 1.0) > 1e-12) {
    double scale = 1.0 / std::sqrt(norm);
    for (double& v : f) v *= scale;
  }
  s.ts = std::move(t);
  s.fs = std::move(f);
  return s;
}

double evaluate(const PulseShape& s, double t) {
  switch (s.kind) {
    case PulseKind::Square:
      return square_f(s, t);
    case PulseKind::Gaussian:
      return gaussian_f(s, t);
    case PulseKind::DecayingExp:
      return t >= 0.0 ? std::sqrt(2.0 / s.duration) * std::exp(-t / s.duration) : 0.0;
    case PulseKind::RisingExp:
      return t <= s.anchor ? std::sqrt(2.0 / s.duration) * std::exp((t - s.anchor) / s.duration)
                           : 0.0;
    case PulseKind::AtomCavityDecay: {
      if (t <= 0.0) return 0.0;
      double g = s.g, k = s.kappa;
      double disc = cavity_discriminant(s);
      if (cavity_degenerate_regime(s)) {
        return g * std::sqrt(2.0 * k) * t * std::exp(-k * t / 2.0);
      }
      if (disc > 0.0) {
        double d = std::sqrt(disc);
        return (g * std::sqrt(2.0 * k) / d) *
               (std::exp((d - k) * t / 2.0) - std::exp(-(d + k) * t / 2.0));
      }
      double om = std::sqrt(-disc);
      return (2.0 * g * std::sqrt(2.0 * k) / om) * std::exp(-k * t / 2.0) * std::sin(om * t / 2.0);
    }
    case PulseKind::Tabulated:
      return tabulated_f(s, t);
  }
  throw std::logic_error("evaluate: unknown pulse kind");
}

double evaluate_windowed(const PulseShape& s, const Window& win, double t) {
  if (t < win.lo || t > win.hi) return 0.0;
  return evaluate(s, t);
}

double evaluate_extended(const PulseShape& s, double t) {
  if (s.kind == PulseKind::Tabulated && (t < s.ts.front() || t > s.ts.back())) return 0.0;
  return evaluate(s, t);
}

double cumulative_norm(const PulseShape& s, double t) {
  switch (s.kind) {
    case PulseKind::Square:
      return std::clamp(t, 0.0, s.duration) / s.duration;
    case PulseKind::Gaussian:
      return 0.5 * (1.0 + erf(std::sqrt(2.0) * t / s.duration));
    case PulseKind::DecayingExp:
      return t <= 0.0 ? 0.0 : 1.0 - std::exp(-2.0 * t / s.duration);
    case PulseKind::RisingExp:
      return t >= s.anchor ? 1.0 : std::exp(2.0 * (t - s.anchor) / s.duration);
    case PulseKind::AtomCavityDecay:
      return 1.0 - cavity_tail(s, t);
    case PulseKind::Tabulated: {
      if (t <= s.ts.front()) return 0.0;
      double total = 0.0;
      for (size_t i = 0; i + 1 < s.ts.size(); ++i) {
        double t1 = s.ts[i + 1];
        double dt = t1 - s.ts[i];
        double a = s.fs[i], b = s.fs[i + 1];
        if (t >= t1) {
          total += dt * (a * a + a * b + b * b) / 3.0;
        } else {
          double u = t - s.ts[i];
          double m = (b - a) / dt;
          total += a * a * u + a * m * u * u + m * m * u * u * u / 3.0;
          break;
        }
      }
      return total;
    }
  }
  throw std::logic_error("cumulative_norm: unknown pulse kind");
}

double normalization_deviation(const PulseShape& s) {
  if (s.kind == PulseKind::Tabulated) {
    return std::fabs(tabulated_norm(s.ts, s.fs) - 1.0);
  }
  Window win = support_window(s, 1e-12);
  auto f2 = [&](double t) {
    double v = evaluate(s, t);
    return v * v;
  };
  std::vector<double> breaks = kink_times(s);
  double integral = integrate_with_breaks(f2, win.lo, win.hi, breaks, 1e-12);
  return std::fabs(integral - 1.0);
}

Window support_window(const PulseShape& s, double eps) {
  require(std::isfinite(eps) && eps > 0.0 && eps < 1.0, "support_window: eps must lie in (0, 1)");
  switch (s.kind) {
    case PulseKind::Square:
      return {0.0, s.duration};
    case PulseKind::Gaussian: {
      double w = eps < 0.5 ? s.duration / std::sqrt(2.0) * inverse_erf(1.0 - 2.0 * eps) : 0.0;
      return {-w, w};
    }
    case PulseKind::DecayingExp:
      return {0.0, 0.5 * s.duration * std::log(1.0 / eps)};
    case PulseKind::RisingExp:
      return {s.anchor - 0.5 * s.duration * std::log(1.0 / eps), s.anchor};
    case PulseKind::AtomCavityDecay: {
      double hi = 10.0 / s.kappa;
      for (int i = 0; i < 80 && cavity_tail(s, hi) >= eps; ++i) hi *= 2.0;
      double lo = 0.0;
      for (int i = 0; i < 200 && (hi - lo) > 1e-13 * (1.0 + hi); ++i) {
        double mid = 0.5 * (lo + hi);
        (cavity_tail(s, mid) >= eps ? lo : hi) = mid;
      }
      return {0.0, hi};
    }
    case PulseKind::Tabulated: {
      double total = tabulated_norm(s.ts, s.fs);
      size_t lo = 0;
      while (lo + 2 < s.ts.size() && cumulative_norm(s, s.ts[lo + 1]) <= eps) ++lo;
      size_t hi = s.ts.size() - 1;
      while (hi >= 2 && total - cumulative_norm(s, s.ts[hi - 1]) <= eps) --hi;
      return {s.ts[lo], s.ts[hi]};
    }
  }
  throw std::logic_error("support_window: unknown pulse kind");
}

double drive_start_time(const PulseShape& s) {
  Window win = support_window(s, 1e-12);
  // Envelopes with an asymptotic left tail keep a small amplitude integral
  // below any finite-mass window (it shrinks only like the square root of the
  // discarded mass); one extra window length pushes the remainder below double
  // rounding noise. Hard-edged envelopes are exactly zero left of the window.
  if (s.kind == PulseKind::Gaussian || s.kind == PulseKind::RisingExp) {
    return win.lo - win.length();
  }
  return win.lo;
}

std::vector<double> kink_times(const PulseShape& s) {
  switch (s.kind) {
    case PulseKind::Square:
      return {0.0, s.duration};
    case PulseKind::Gaussian:
      return {};
    case PulseKind::DecayingExp:
      return {0.0};
    case PulseKind::RisingExp:
      return {s.anchor};
    case PulseKind::AtomCavityDecay:
      return {0.0};
    case PulseKind::Tabulated:
      return {};
  }
  return {};
}

PulseShape cavity_filter_output(const PulseShape& inner, double g, double kappa, int samples) {
  require(std::isfinite(g) && g >= 0.0, "cavity_filter_output: g must be finite and >= 0");
  require(finite_positive(kappa), "cavity_filter_output: kappa must be finite and positive");
  require(samples >= 16, "cavity_filter_output: needs at least 16 samples");

  Window win = support_window(inner, 1e-9);
  // Slowest decay rate of the (cavity, atom) pair sets the ring-down time.
  double rate;
  if (g == 0.0) {
    rate = kappa / 2.0;
  } else {
    double disc = kappa * kappa / 4.0 - 4.0 * g * g;
    rate = disc >= 0.0 ? 0.5 * (kappa / 2.0 - std::sqrt(disc)) : kappa / 4.0;
  }
  rate = std::max(rate, kappa / 40.0);
  double t_end = win.hi + 16.0 / rate;

  std::vector<double> times(static_cast<size_t>(samples));
  double dt = (t_end - win.lo) / (samples - 1);
  for (int i = 0; i < samples; ++i) times[static_cast<size_t>(i)] = win.lo + i * dt;
  times.back() = t_end;

  std::vector<double> stops = times;
  for (double k : kink_times(inner)) {
    if (k > win.lo && k < t_end) stops.push_back(k);
  }
  std::sort(stops.begin(), stops.end());

  auto fin = [&](double t) { return evaluate_windowed(inner, win, t); };
  OdeRhs rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    dy[0] = -kappa / 2.0 * y[0] - g * y[1] + std::sqrt(kappa) * fin(t);
    dy[1] = g * y[0];
  };

  std::vector<double> fout(times.size(), 0.0);
  size_t next = 0;
  std::vector<double> y = {0.0, 0.0};
  fout[0] = std::sqrt(kappa) * y[0] - fin(times[0]);
  next = 1;
  integrate_ode(rhs, y, times[0], t_end, std::span<const double>(stops).subspan(1),
                [&](double t, std::span<const double> st) {
                  if (next < times.size() &&
                      std::fabs(t - times[next]) <= 1e-9 * (1.0 + std::fabs(t))) {
                    fout[next] = std::sqrt(kappa) * st[0] - fin(t);
                    ++next;
                  }
                });

  double norm = tabulated_norm(times, fout);
  if (!(norm > 1e-6)) throw numeric_error("cavity_filter_output: degenerate output norm");
  return PulseShape::tabulated(std::move(times), std::move(fout));
}

std::string pulse_to_csv(const PulseShape& s, int samples) {
  std::vector<double> t, f;
  if (s.kind == PulseKind::Tabulated) {
    t = s.ts;
    f = s.fs;
  } else {
    require(samples >= 2, "pulse_to_csv: needs at least two samples");
    Window win = support_window(s, 1e-9);
    double dt = win.length() / (samples - 1);
    for (int i = 0; i < samples; ++i) {
      double x = win.lo + i * dt;
      t.push_back(x);
      f.push_back(evaluate(s, x));
    }
  }
  CsvWriter w({"t", "f"});
  for (size_t i = 0; i < t.size(); ++i) w.row({t[i], f[i]});
  return w.str();
}

PulseShape pulse_from_csv(const std::string& text) {
  CsvTable table = parse_csv(text);
  if (table.header != std::vector<std::string>{"t", "f"}) {
    throw std::invalid_argument("pulse_from_csv: expected header \"t,f\"");
  }
  std::vector<double> t, f;
  for (const auto& row : table.rows) {
    if (row.size() != 2) throw std::invalid_argument("pulse_from_csv: expected two columns");
    t.push_back(row[0]);
    f.push_back(row[1]);
  }
  return PulseShape::tabulated(std::move(t), std::move(f));
}

std::vector<double> default_trace_grid(const PulseShape& s, double gamma_total, int points,
                                       bool include_tail) {
  require(finite_positive(gamma_total), "default_trace_grid: gamma must be positive");
  require(points >= 16, "default_trace_grid: needs at least 16 points");
  Window win = support_window(s, 1e-9);
  std::vector<double> grid;
  if (s.kind == PulseKind::Tabulated) {
    for (double t : s.ts) {
      if (t >= win.lo && t <= win.hi) grid.push_back(t);
    }
  } else {
    double dt = win.length() / (points - 1);
    for (int i = 0; i < points; ++i) grid.push_back(win.lo + i * dt);
    for (double k : kink_times(s)) {
      if (k > win.lo && k < win.hi) grid.push_back(k);
    }
  }
  if (include_tail) {
    int tail_points = std::max(points / 6, 24);
    double tail_dt = 8.0 / gamma_total / tail_points;
    for (int i = 1; i <= tail_points; ++i) grid.push_back(win.hi + i * tail_dt);
  }
  std::sort(grid.begin(), grid.end());
  double merge_eps = 1e-12 * (1.0 + std::fabs(grid.back()) + std::fabs(grid.front()));
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [&](double a, double b) { return std::fabs(a - b) < merge_eps; }),
             grid.end());
  return grid;
}

}  // namespace atomex
