#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "atomex/asymptotics.hpp"
#include "atomex/pulse.hpp"

using namespace atomex;

namespace {
constexpr double kPi = std::numbers::pi;

double area_factor(PulseKind kind) {
  switch (kind) {
    case PulseKind::Square: return 1.0;
    case PulseKind::Gaussian: return std::pow(2.0 * kPi, 0.25);
    default: return std::sqrt(2.0);  // one-sided exponentials
  }
}
}  // namespace

TEST_CASE("scaled frame exposes the drive scale and total area") {
  ScaledFrame fr = scaled_frame(PulseKind::Square, 2.0, 4.0, LossModel{1.0, 0.0});
  CHECK(fr.omega0 == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(fr.epsilon == doctest::Approx(1.0 / fr.omega0).epsilon(1e-14));
  CHECK(fr.omega0T == doctest::Approx(fr.omega0 * 2.0).epsilon(1e-14));
  CHECK(fr.theta_total == doctest::Approx(fr.omega0T).epsilon(1e-12));
  CHECK_THROWS_AS(scaled_frame(PulseKind::AtomCavityDecay, 1.0, 1.0, LossModel{1.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(scaled_frame(PulseKind::Square, -1.0, 1.0, LossModel{1.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("total pulse area scales with the envelope family") {
  for (PulseKind kind : {PulseKind::Square, PulseKind::Gaussian, PulseKind::DecayingExp,
                         PulseKind::RisingExp}) {
    CAPTURE(static_cast<int>(kind));
    CHECK(theta_total(kind, 3.0) == doctest::Approx(3.0 * area_factor(kind)).epsilon(1e-12));
  }
}

TEST_CASE("area clock inverts cleanly and differentiates to the envelope") {
  for (PulseKind kind : {PulseKind::Square, PulseKind::Gaussian, PulseKind::DecayingExp,
                         PulseKind::RisingExp}) {
    double om0T = 2.7;
    double total = theta_total(kind, om0T);
    for (double frac : {0.1, 0.5, 0.9}) {
      CAPTURE(static_cast<int>(kind));
      CAPTURE(frac);
      double theta = frac * total;
      double tau = invert_theta(kind, om0T, theta);
      CHECK(theta_of_tau(kind, om0T, tau) == doctest::Approx(theta).epsilon(1e-9));
      double h = 1e-5;
      double slope = (theta_of_tau(kind, om0T, tau + h) - theta_of_tau(kind, om0T, tau - h)) /
                     (2.0 * h);
      CHECK(slope == doctest::Approx(g_of_theta(kind, om0T, theta)).epsilon(1e-5));
    }
    CHECK_THROWS_AS(invert_theta(kind, om0T, -0.1), std::domain_error);
    CHECK_THROWS_AS(invert_theta(kind, om0T, total * 1.0001), std::domain_error);
  }
  CHECK(invert_theta(PulseKind::Square, 4.0, 0.0) == 0.0);
  CHECK(std::isinf(invert_theta(PulseKind::Gaussian, 4.0, 0.0)));
}

TEST_CASE("square deficit integral reduces to the sine moment") {
  // Constant scaled envelope g = 1 turns the integral into
  // epsilon * int_0^pi sin^4(theta/2) dtheta = epsilon * 3 pi / 8.
  LossModel lossless{1.0, 0.0};
  double d = deficit_integral(PulseKind::Square, 4.0, 1.0, lossless);
  double eps = 1.0 / (2.0 * std::sqrt(1.0 / 4.0));
  CHECK(d == doctest::Approx(eps * 3.0 * kPi / 8.0).epsilon(1e-9));
  // Loss enters only through epsilon, hence linearly.
  double d2 = deficit_integral(PulseKind::Square, 4.0, 1.0, LossModel{1.0, 1.0});
  CHECK(d2 == doctest::Approx(2.0 * d).epsilon(1e-12));
  // Below the threshold area the peak is unreachable.
  CHECK_THROWS_AS(deficit_integral(PulseKind::Square, kPi * kPi / 4.0 * 0.999, 1.0, lossless),
                  std::domain_error);
}

TEST_CASE("threshold integral of the rising exponential is frozen") {
  CHECK(rising_exp_threshold_integral() == doctest::Approx(0.5194321452201007).epsilon(1e-10));
}

TEST_CASE("optimized deficit coefficients match frozen references") {
  LossModel lossless{1.0, 0.0};

  AsymptoticCoefficients sq = optimize_deficit(PulseKind::Square, 1.0, lossless);
  CHECK(sq.alpha == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-13));
  CHECK(sq.beta == doctest::Approx(3.0 * kPi * kPi / 32.0).epsilon(1e-9));

  AsymptoticCoefficients ri = optimize_deficit(PulseKind::RisingExp, 1.0, lossless);
  CHECK(ri.alpha == doctest::Approx(kPi * kPi / 8.0).epsilon(1e-13));
  CHECK(ri.beta == doctest::Approx(0.6408237233164491).epsilon(1e-9));

  AsymptoticCoefficients de = optimize_deficit(PulseKind::DecayingExp, 1.0, lossless);
  CHECK(std::fabs(de.alpha - 3.347214890604083) < 1e-5);
  CHECK(de.beta == doctest::Approx(1.4789489517121264).epsilon(1e-9));

  AsymptoticCoefficients ga = optimize_deficit(PulseKind::Gaussian, 1.0, lossless);
  CHECK(std::fabs(ga.alpha - 1.4500882463524958) < 1e-6);
  CHECK(ga.beta == doctest::Approx(0.9159704208581709).epsilon(1e-9));

  CHECK_THROWS_AS(optimize_deficit(PulseKind::Square, 0.0, lossless), std::invalid_argument);
}

TEST_CASE("number-state zero order follows the hypergeometric polynomial") {
  CHECK(fock_zero_order_pe(100, kPi) == doctest::Approx(1.0062106530284861).epsilon(1e-12));
  double trig = fock_zero_order_pe_trig(100, kPi);
  CHECK(trig == doctest::Approx((1.0 + std::exp(kPi * kPi / 800.0)) / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(fock_zero_order_pe(0, 1.0), std::invalid_argument);
}

TEST_CASE("trigonometric limit closes in on the polynomial as n grows") {
  double gap10 = std::fabs(fock_zero_order_pe(10, kPi) - fock_zero_order_pe_trig(10, kPi));
  double gap50 = std::fabs(fock_zero_order_pe(50, kPi) - fock_zero_order_pe_trig(50, kPi));
  double gap250 = std::fabs(fock_zero_order_pe(250, kPi) - fock_zero_order_pe_trig(250, kPi));
  CHECK(std::fabs(gap10 - 0.0004796790329485434) <= 1e-9);
  CHECK(std::fabs(gap50 - 1.6127476817118235e-05) <= 1e-9);
  CHECK(std::fabs(gap250 - 6.224285761247117e-07) <= 1e-9);
  CHECK(gap10 > gap50);
  CHECK(gap50 > gap250);
}

TEST_CASE("first-order number-state kernel matches frozen references") {
  CHECK(fock_first_order_kernel(200, kPi, kPi / 2.0) ==
        doctest::Approx(-0.4994351805528053).epsilon(1e-10));
  CHECK(fock_first_order_kernel(200, kPi, kPi / 3.0) ==
        doctest::Approx(-0.6257925760795542).epsilon(1e-10));
  CHECK(fock_first_order_kernel(300, 2.0, 1.0) ==
        doctest::Approx(-0.1054233428417054).epsilon(1e-10));
  CHECK(fock_first_order_kernel(100, kPi, kPi / 2.0) ==
        doctest::Approx(-0.4988614190784336).epsilon(1e-10));
  CHECK(fock_first_order_kernel(50, 1.3, 1.3) ==
        doctest::Approx(0.734507085718497).epsilon(1e-10));
  CHECK(std::fabs(fock_first_order_kernel(1, kPi, 0.0)) < 1e-15);
  CHECK_THROWS_AS(fock_first_order_kernel(0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(fock_first_order_kernel(10, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("kernel switches smoothly to its trigonometric limit") {
  double theta = 2.0, thetap = 1.0;
  double trig = std::cos(theta - thetap) * (1.0 - std::cos(thetap)) -
                std::sin(theta - thetap) * std::sin(thetap) / 2.0;
  CHECK(fock_first_order_kernel(600, theta, thetap) == doctest::Approx(trig).epsilon(1e-12));
  double below = fock_first_order_kernel(500, theta, thetap);
  double above = fock_first_order_kernel(501, theta, thetap);
  CHECK(std::fabs(below - above) < 5e-3);
}

TEST_CASE("asymptotic peak estimates carry the optimized coefficients") {
  LossModel lossless{1.0, 0.0};
  double beta_sq = optimize_deficit(PulseKind::Square, 1.0, lossless).beta;
  CHECK(coherent_asymptotic_pe(PulseKind::Square, 50.0, LossModel{0.8, 0.2}) ==
        doctest::Approx(1.0 - beta_sq / (50.0 * 0.8)).epsilon(1e-9));
  CHECK(fock_asymptotic_pe(PulseKind::Gaussian, 40, lossless) ==
        doctest::Approx(0.9925219963552149).epsilon(1e-9));
  CHECK_THROWS_AS(fock_asymptotic_pe(PulseKind::Square, 0, lossless), std::invalid_argument);
}

TEST_CASE("number-state numerators sit a fixed shift below the coherent ones") {
  LossModel lossless{1.0, 0.0};
  struct Ref {
    PulseKind kind;
    double numerator;
  };
  const Ref refs[] = {
      {PulseKind::Square, 0.30842513753404244},
      {PulseKind::RisingExp, 0.023973448248364226},
      {PulseKind::DecayingExp, 0.8620986783336753},
      {PulseKind::Gaussian, 0.2991201457914041},
  };
  for (const Ref& r : refs) {
    CAPTURE(static_cast<int>(r.kind));
    double beta = optimize_deficit(r.kind, 1.0, lossless).beta;
    double shifted = beta - kPi * kPi / 16.0;
    CHECK(shifted == doctest::Approx(r.numerator).epsilon(1e-5));
    // The same shift must be what the peak estimates report.
    double n = 64.0;
    double implied = (1.0 - fock_asymptotic_pe(r.kind, static_cast<int>(n), lossless)) * n;
    CHECK(implied == doctest::Approx(shifted).epsilon(1e-9));
  }
}
