#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "atomex/fock_single.hpp"
#include "atomex/pulse.hpp"

using namespace atomex;

namespace {

std::vector<double> grid_to(const PulseShape& shape, double t_end, int points = 48) {
  Window win = support_window(shape, 1e-10);
  double lo = std::min(win.lo, t_end - 1.0);
  std::vector<double> g(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i) {
    g[static_cast<size_t>(i)] = lo + (t_end - lo) * i / (points - 1);
  }
  g.back() = t_end;
  return g;
}

}  // namespace

TEST_CASE("square closed form reproduces frozen one-photon peaks") {
  LossModel lossless{1.0, 0.0};
  CHECK(closed_form_pe(PulseShape::square(2.513), lossless, 2.513) ==
        doctest::Approx(0.8145287542546923).epsilon(1e-12));
  double t_opt = 2.512862417252339;
  CHECK(closed_form_pe(PulseShape::square(t_opt), lossless, t_opt) ==
        doctest::Approx(0.8145287551781475).epsilon(1e-12));
}

TEST_CASE("decaying-exponential closed form hits its exact optimum") {
  LossModel lossless{1.0, 0.0};
  double expect = 4.0 * std::exp(-2.0);
  CHECK(closed_form_pe(PulseShape::decaying_exp(2.0), lossless, 2.0) ==
        doctest::Approx(expect).epsilon(1e-14));
  // The resonant-duration branch is the limit of the two-exponential branch.
  double near = closed_form_pe(PulseShape::decaying_exp(2.0 + 1e-7), lossless, 2.0);
  CHECK(std::fabs(near - closed_form_pe(PulseShape::decaying_exp(2.0), lossless, 2.0)) < 1e-6);
}

TEST_CASE("gaussian closed form reproduces the frozen optimum") {
  LossModel lossless{1.0, 0.0};
  PulseShape ga = PulseShape::gaussian(1.3675613109232483);
  CHECK(closed_form_pe(ga, lossless, 0.9999999985142665) ==
        doctest::Approx(0.8009820591930945).epsilon(1e-10));
}

TEST_CASE("cavity-decay closed form matches the frozen quadrature value") {
  LossModel lossless{1.0, 0.0};
  PulseShape cav = PulseShape::atom_cavity(0.9076, 1.0);
  CHECK(closed_form_pe(cav, lossless, 2.607) ==
        doctest::Approx(0.7162862311138065).epsilon(1e-11));
}

TEST_CASE("traced excitation matches the closed forms uniformly") {
  LossModel cases[] = {{1.0, 0.0}, {0.7, 0.3}};
  std::vector<PulseShape> shapes = {
      PulseShape::square(2.513),
      PulseShape::gaussian(1.37),
      PulseShape::decaying_exp(2.0),
      PulseShape::atom_cavity(0.9076, 1.0),
      PulseShape::atom_cavity(0.3, 1.0),
  };
  for (const LossModel& loss : cases) {
    for (const PulseShape& s : shapes) {
      CAPTURE(static_cast<int>(s.kind));
      CAPTURE(loss.gamma_p);
      std::vector<double> grid = default_trace_grid(s, loss.total(), 160);
      Fock1Result tr = pe_trace_fock1(s, loss, grid);
      double worst = 0.0;
      for (size_t i = 0; i < tr.t.size(); ++i) {
        worst = std::max(worst, std::fabs(tr.pe[i] - closed_form_pe(s, loss, tr.t[i])));
      }
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("splitting the pulse rate scales the excitation exactly") {
  // pe is gamma_p J^2 and J only sees the total linewidth, so moving part of
  // the decay into the unobserved channel multiplies the whole trace by
  // gamma_p / gamma.
  for (double ratio : {0.5, 0.7, 0.9}) {
    CAPTURE(ratio);
    PulseShape s = PulseShape::gaussian(1.37);
    std::vector<double> grid = default_trace_grid(s, 1.0, 80);
    Fock1Result full = pe_trace_fock1(s, LossModel{1.0, 0.0}, grid);
    Fock1Result split = pe_trace_fock1(s, LossModel{ratio, 1.0 - ratio}, grid);
    for (size_t i = 0; i < grid.size(); ++i) {
      CHECK(split.pe[i] == doctest::Approx(ratio * full.pe[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("absorbed fraction never beats the overlap bound") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    double ratio = 0.3 + 0.7 * unif(rng);
    LossModel loss{ratio, 1.0 - ratio};
    PulseShape shape;
    switch (trial % 5) {
      case 0: shape = PulseShape::square(0.5 + 3.0 * unif(rng)); break;
      case 1: shape = PulseShape::gaussian(0.4 + 2.0 * unif(rng)); break;
      case 2: shape = PulseShape::decaying_exp(0.5 + 3.0 * unif(rng)); break;
      case 3: shape = PulseShape::rising_exp(0.5 + 3.0 * unif(rng), unif(rng)); break;
      default: shape = PulseShape::atom_cavity(0.3 + 1.5 * unif(rng), 1.0); break;
    }
    Window win = support_window(shape, 1e-9);
    double t = win.lo + (win.hi - win.lo) * unif(rng);
    Fock1Result tr = pe_trace_fock1(shape, loss, grid_to(shape, t));
    double slack = cauchy_schwarz_bound(shape, loss, t) - tr.pe.back();
    CAPTURE(trial);
    CAPTURE(t);
    CHECK(slack >= -1e-9);
  }
}

TEST_CASE("the matched rising profile saturates the bound at its end time") {
  for (double ratio : {1.0, 0.7, 0.5}) {
    CAPTURE(ratio);
    LossModel loss{ratio, 1.0 - ratio};
    PulseShape opt = optimal_rising_profile(loss, 0.0);
    CHECK(opt.kind == PulseKind::RisingExp);
    CHECK(opt.duration == doctest::Approx(2.0 / loss.total()).epsilon(1e-15));
    Fock1Result tr = pe_trace_fock1(opt, loss, grid_to(opt, 0.0));
    CHECK(tr.pe.back() == doctest::Approx(ratio).epsilon(1e-9));
  }
}

TEST_CASE("between-sample continuation agrees with the committed trace") {
  LossModel loss{1.0, 0.0};
  PulseShape s = PulseShape::square(2.513);
  std::vector<double> grid = default_trace_grid(s, 1.0, 60);
  Fock1Result tr = pe_trace_fock1(s, loss, grid);
  size_t cell = grid.size() / 2;
  CHECK(fock1_pe_between(tr, cell, tr.t[cell]) == tr.pe[cell]);
  double mid = 0.5 * (tr.t[cell] + tr.t[cell + 1]);
  CHECK(fock1_pe_between(tr, cell, mid) ==
        doctest::Approx(closed_form_pe(s, loss, mid)).epsilon(1e-9));
  CHECK_THROWS_AS(fock1_pe_between(tr, grid.size() - 1, tr.t.back()), std::invalid_argument);
  CHECK_THROWS_AS(fock1_pe_between(tr, cell, tr.t[cell + 1] + 0.1), std::invalid_argument);
}

TEST_CASE("excitation decays freely once the pulse has passed") {
  LossModel loss{0.8, 0.2};
  PulseShape s = PulseShape::square(2.0);
  double p2 = closed_form_pe(s, loss, 2.0);
  double p3 = closed_form_pe(s, loss, 3.0);
  CHECK(p3 == doctest::Approx(p2 * std::exp(-1.0)).epsilon(1e-12));
  std::vector<double> grid = {0.0, 1.0, 2.0, 2.5, 3.5};
  Fock1Result tr = pe_trace_fock1(s, loss, grid);
  CHECK(tr.pe[4] == doctest::Approx(tr.pe[3] * std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("trace stays inside physical bounds") {
  LossModel loss{0.6, 0.4};
  for (const PulseShape& s : {PulseShape::square(2.5), PulseShape::rising_exp(2.0, 0.0)}) {
    Fock1Result tr = pe_trace_fock1(s, loss, default_trace_grid(s, 1.0, 120));
    for (double p : tr.pe) {
      CHECK(p >= -1e-12);
      CHECK(p <= loss.ratio() + 1e-9);
    }
  }
}

TEST_CASE("input validation") {
  LossModel loss{1.0, 0.0};
  std::vector<double> empty;
  CHECK_THROWS_AS(pe_trace_fock1(PulseShape::square(1.0), loss, empty), std::invalid_argument);
  std::vector<double> bad = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(pe_trace_fock1(PulseShape::square(1.0), loss, bad), std::invalid_argument);
  CHECK_THROWS_AS(closed_form_pe(PulseShape::rising_exp(1.0, 0.0), loss, 0.5),
                  std::invalid_argument);
}

TEST_CASE("trace CSV starts with its header") {
  Fock1Result tr = pe_trace_fock1(PulseShape::square(1.0), LossModel{1.0, 0.0},
                                  std::vector<double>{0.0, 0.5, 1.0});
  std::string csv = fock1_to_csv(tr);
  CHECK(csv.rfind("t,pe\n", 0) == 0);
  CHECK(csv.back() == '\n');
}
