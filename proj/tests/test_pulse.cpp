#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "atomex/pulse.hpp"

using namespace atomex;

namespace {

// Reference cavity-decay envelope evaluated in complex arithmetic: the same
// expression covers both signs of kappa^2 - 4g^2.
double cavity_reference(double g, double kappa, double t) {
  if (t < 0.0) return 0.0;
  std::complex<double> d = std::sqrt(std::complex<double>(kappa * kappa - 4.0 * g * g));
  std::complex<double> v =
      2.0 * g * std::sqrt(2.0 * kappa) / d * std::exp(-kappa * t / 2.0) * std::sinh(d * t / 2.0);
  return v.real();
}

}  // namespace

TEST_CASE("loss model splits the linewidth") {
  LossModel lm{0.7, 0.3};
  CHECK(lm.total() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lm.ratio() == doctest::Approx(0.7).epsilon(1e-15));
  CHECK_THROWS_AS((LossModel{0.0, 0.3}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((LossModel{-1.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((LossModel{1.0, -0.1}.validate()), std::invalid_argument);
}

TEST_CASE("all envelope families carry unit norm") {
  std::vector<PulseShape> shapes = {
      PulseShape::square(0.7),
      PulseShape::square(3.0),
      PulseShape::gaussian(1.37),
      PulseShape::gaussian(0.2),
      PulseShape::decaying_exp(2.0),
      PulseShape::rising_exp(2.0, 1.5),
      PulseShape::atom_cavity(0.9076, 1.0),  // damped oscillation
      PulseShape::atom_cavity(0.3, 1.0),     // two-exponential
      PulseShape::atom_cavity(0.5, 1.0),     // degenerate boundary
  };
  for (const PulseShape& s : shapes) {
    CAPTURE(static_cast<int>(s.kind));
    CAPTURE(s.duration);
    CAPTURE(s.g);
    CHECK(normalization_deviation(s) < 1e-9);
  }
}

TEST_CASE("envelope point values match their defining forms") {
  PulseShape sq = PulseShape::square(2.0);
  CHECK(evaluate(sq, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(evaluate(sq, -0.01) == 0.0);
  CHECK(evaluate(sq, 2.01) == 0.0);

  PulseShape ga = PulseShape::gaussian(1.37);
  double peak = 1.0 / std::sqrt(1.37 * std::sqrt(std::acos(-1.0) / 2.0));
  CHECK(evaluate(ga, 0.0) == doctest::Approx(peak).epsilon(1e-14));
  for (double t : {0.3, 1.1, 2.9}) CHECK(evaluate(ga, t) == evaluate(ga, -t));

  PulseShape de = PulseShape::decaying_exp(2.0);
  CHECK(evaluate(de, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(evaluate(de, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(evaluate(de, -1e-9) == 0.0);

  PulseShape ri = PulseShape::rising_exp(2.0, 1.5);
  CHECK(evaluate(ri, 1.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(evaluate(ri, 1.5 - 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(evaluate(ri, 1.5 + 1e-9) == 0.0);
}

TEST_CASE("cavity-decay envelope agrees with the complex closed form") {
  struct Case {
    double g, kappa;
  };
  for (const Case& c : {Case{0.9076, 1.0}, Case{0.3, 1.0}, Case{2.0, 1.0}, Case{1.3, 3.1}}) {
    PulseShape s = PulseShape::atom_cavity(c.g, c.kappa);
    for (double t : {0.1, 0.5, 1.7, 2.607, 6.0}) {
      CAPTURE(c.g);
      CAPTURE(t);
      CHECK(evaluate(s, t) == doctest::Approx(cavity_reference(c.g, c.kappa, t)).epsilon(1e-12));
    }
    CHECK(evaluate(s, -0.5) == 0.0);
  }
}

TEST_CASE("cavity-decay envelope is continuous across the degenerate boundary") {
  PulseShape mid = PulseShape::atom_cavity(0.5, 1.0);
  PulseShape below = PulseShape::atom_cavity(0.5 * (1.0 - 1e-7), 1.0);
  PulseShape above = PulseShape::atom_cavity(0.5 * (1.0 + 1e-7), 1.0);
  for (double t : {0.2, 1.0, 3.0, 8.0}) {
    CAPTURE(t);
    double m = evaluate(mid, t);
    CHECK(std::fabs(evaluate(below, t) - m) < 1e-5 * (1.0 + std::fabs(m)));
    CHECK(std::fabs(evaluate(above, t) - m) < 1e-5 * (1.0 + std::fabs(m)));
  }
  // The degenerate form itself: g sqrt(2 kappa) t e^{-kappa t / 2}.
  for (double t : {0.5, 2.0}) {
    double expect = 0.5 * std::sqrt(2.0) * t * std::exp(-t / 2.0);
    CHECK(evaluate(mid, t) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("support windows nest and capture the norm") {
  std::vector<PulseShape> shapes = {
      PulseShape::square(2.0),
      PulseShape::gaussian(1.37),
      PulseShape::decaying_exp(2.0),
      PulseShape::rising_exp(2.0, 0.0),
      PulseShape::atom_cavity(0.9076, 1.0),
  };
  for (const PulseShape& s : shapes) {
    CAPTURE(static_cast<int>(s.kind));
    Window tight = support_window(s, 1e-6);
    Window wide = support_window(s, 1e-12);
    CHECK(wide.lo <= tight.lo);
    CHECK(wide.hi >= tight.hi);
    CHECK(cumulative_norm(s, tight.lo) <= 1.1e-6);
    CHECK(1.0 - cumulative_norm(s, tight.hi) <= 1.1e-6);
  }
}

TEST_CASE("cumulative norm runs from zero to one") {
  PulseShape sq = PulseShape::square(2.0);
  CHECK(cumulative_norm(sq, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cumulative_norm(sq, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cumulative_norm(sq, 2.0) == doctest::Approx(1.0).epsilon(1e-12));

  PulseShape de = PulseShape::decaying_exp(3.0);
  // f^2 integrates to 1 - e^{-2t/T}.
  for (double t : {0.5, 1.5, 4.0}) {
    CAPTURE(t);
    CHECK(cumulative_norm(de, t) == doctest::Approx(-std::expm1(-2.0 * t / 3.0)).epsilon(1e-11));
  }
  PulseShape ga = PulseShape::gaussian(1.0);
  CHECK(cumulative_norm(ga, 0.0) == doctest::Approx(0.5).epsilon(1e-11));
}

TEST_CASE("kink times mark corners and jumps") {
  std::vector<double> sq = kink_times(PulseShape::square(2.0));
  REQUIRE(sq.size() == 2);
  CHECK(sq[0] == 0.0);
  CHECK(sq[1] == 2.0);
  CHECK(kink_times(PulseShape::gaussian(1.0)).empty());
  std::vector<double> de = kink_times(PulseShape::decaying_exp(2.0));
  REQUIRE(de.size() == 1);
  CHECK(de[0] == 0.0);
  std::vector<double> ri = kink_times(PulseShape::rising_exp(1.5, 0.8));
  REQUIRE(ri.size() == 1);
  CHECK(ri[0] == 0.8);
}

TEST_CASE("tabulated envelopes renormalize and interpolate linearly") {
  PulseShape tab = PulseShape::tabulated({0.0, 0.5, 1.0, 2.0}, {0.0, 1.0, 0.5, 0.0});
  CHECK(normalization_deviation(tab) < 1e-12);
  double scale = evaluate(tab, 0.5);  // renormalized peak sample
  CHECK(evaluate(tab, 0.25) == doctest::Approx(0.5 * scale).epsilon(1e-14));
  CHECK(evaluate(tab, 0.75) == doctest::Approx(0.75 * scale).epsilon(1e-14));
  CHECK_THROWS_AS(evaluate(tab, -0.1), std::domain_error);
  CHECK_THROWS_AS(evaluate(tab, 2.1), std::domain_error);
  CHECK(evaluate_extended(tab, -0.1) == 0.0);
  CHECK(evaluate_extended(tab, 2.1) == 0.0);

  CHECK_THROWS_AS(PulseShape::tabulated({0.0, 0.5, 0.5}, {0.0, 1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PulseShape::tabulated({0.0, 1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(PulseShape::tabulated({0.0, 1.0}, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("windowed evaluation zeroes the envelope outside the window") {
  PulseShape de = PulseShape::decaying_exp(2.0);
  Window win{0.5, 1.5};
  CHECK(evaluate_windowed(de, win, 1.0) == evaluate(de, 1.0));
  CHECK(evaluate_windowed(de, win, 0.4) == 0.0);
  CHECK(evaluate_windowed(de, win, 1.6) == 0.0);
}

TEST_CASE("CSV round trip preserves the envelope") {
  PulseShape ga = PulseShape::gaussian(1.37);
  std::string csv = pulse_to_csv(ga);
  CHECK(csv.rfind("t,f\n", 0) == 0);
  PulseShape back = pulse_from_csv(csv);
  CHECK(back.kind == PulseKind::Tabulated);
  CHECK(normalization_deviation(back) < 1e-9);
  for (double t : {-1.5, -0.3, 0.0, 0.4, 1.8}) {
    CAPTURE(t);
    CHECK(std::fabs(evaluate_extended(back, t) - evaluate(ga, t)) < 1e-4);
  }
  CHECK_THROWS_AS(pulse_from_csv("a,b\n1,2\n"), std::invalid_argument);
  CHECK_THROWS_AS(pulse_from_csv("t,f\n1,2,3\n"), std::invalid_argument);
}

TEST_CASE("default trace grid covers the pulse and lands on kinks") {
  PulseShape sq = PulseShape::square(2.0);
  std::vector<double> grid = default_trace_grid(sq, 1.0, 100);
  REQUIRE(grid.size() >= 100);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  for (size_t i = 0; i + 1 < grid.size(); ++i) CHECK(grid[i + 1] > grid[i]);
  CHECK(std::count(grid.begin(), grid.end(), 0.0) == 1);
  CHECK(std::count(grid.begin(), grid.end(), 2.0) == 1);
  CHECK(grid.back() == doctest::Approx(2.0 + 8.0).epsilon(1e-12));

  std::vector<double> tight = default_trace_grid(sq, 1.0, 100, false);
  CHECK(tight.back() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("cavity filter output is a unit-norm tabulated envelope") {
  PulseShape filtered = cavity_filter_output(PulseShape::gaussian(1.13), 1.97, 3.16, 512);
  CHECK(filtered.kind == PulseKind::Tabulated);
  CHECK(normalization_deviation(filtered) < 1e-9);
  // With no atom in the cavity the filter only reshapes; norm still survives.
  PulseShape empty = cavity_filter_output(PulseShape::gaussian(1.0), 0.0, 2.0, 512);
  CHECK(normalization_deviation(empty) < 1e-9);
}
