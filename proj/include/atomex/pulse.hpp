// Normalized wavepacket envelopes driving the two-level atom, and the
// atom-cavity filter that reshapes them. All envelopes are real with
// integral of f^2 over time equal to 1.
#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace atomex {

// Decay channels of the atom: gamma_p couples to the pulse modes, gamma_b to
// unmonitored background modes. Total linewidth is the sum.
struct LossModel {
  double gamma_p = 1.0;
  double gamma_b = 0.0;

  double total() const { return gamma_p + gamma_b; }
  double ratio() const { return gamma_p / total(); }
  void validate() const;
};

enum class PulseKind { Square, Gaussian, DecayingExp, RisingExp, AtomCavityDecay, Tabulated };

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

struct PulseShape {
  PulseKind kind = PulseKind::Square;
  double duration = 0.0;  // T for Square, Gaussian, DecayingExp, RisingExp
  double anchor = 0.0;    // end time t0 of the RisingExp ramp
  double g = 0.0;         // atom-cavity coupling for AtomCavityDecay
  double kappa = 0.0;     // cavity linewidth for AtomCavityDecay
  std::vector<double> ts, fs;  // Tabulated samples, linearly interpolated

  // 1/sqrt(T) on (0, T).
  static PulseShape square(double T);
  // exp(-t^2/T^2)/sqrt(T sqrt(pi/2)), centered at 0.
  static PulseShape gaussian(double T);
  // sqrt(2/T) exp(-t/T) for t >= 0.
  static PulseShape decaying_exp(double T);
  // sqrt(2/T) exp((t - t0)/T) for t <= t0.
  static PulseShape rising_exp(double T, double t0 = 0.0);
  // Emission envelope of an atom decaying inside a single-sided cavity.
  static PulseShape atom_cavity(double g, double kappa);
  // Sampled envelope, renormalized unless already within 1e-12 of unit norm.
  static PulseShape tabulated(std::vector<double> t, std::vector<double> f);
};

// kappa^2 - 4 g^2 decides between the two-exponential and the damped-oscillation
// regimes of the atom-cavity envelope; near zero both collapse to t*exp(-kappa t/2).
inline double cavity_discriminant(const PulseShape& shape) {
  return shape.kappa * shape.kappa - 4.0 * shape.g * shape.g;
}
inline bool cavity_degenerate_regime(const PulseShape& shape) {
  return std::fabs(cavity_discriminant(shape)) < 1e-10 * shape.kappa * shape.kappa;
}

// Envelope value at time t. Tabulated shapes throw std::domain_error outside
// their sample range.
double evaluate(const PulseShape& shape, double t);

// Envelope value with the pulse treated as zero outside the given window.
double evaluate_windowed(const PulseShape& shape, const Window& win, double t);

// Like evaluate, but tabulated shapes return 0 outside their sample range
// instead of throwing; integrators use this as the physical zero extension.
double evaluate_extended(const PulseShape& shape, double t);

// |integral of f^2 - 1|.
double normalization_deviation(const PulseShape& shape);

// Smallest window outside which each tail of f^2 carries less than eps.
Window support_window(const PulseShape& shape, double eps);

// Start time for integrations that conceptually begin at -infinity: far enough
// below the support window that the amplitude integral of the remaining left
// tail is below double rounding noise. Hard-edged envelopes return their exact
// support start.
double drive_start_time(const PulseShape& shape);

// Times where the envelope has a corner or jump; integration splits there.
std::vector<double> kink_times(const PulseShape& shape);

// Integral of f^2 from the left tail up to t.
double cumulative_norm(const PulseShape& shape, double t);

// Reflects `inner` off a single-sided cavity (linewidth kappa) containing an
// atom coupled at rate g, and returns the outgoing envelope as a Tabulated
// shape with unit norm. Throws numeric_error if the output norm collapses.
PulseShape cavity_filter_output(const PulseShape& inner, double g, double kappa,
                                int samples = 4096);

// CSV serialization of a shape's samples with header "t,f". Analytic shapes
// are sampled on their support window first.
std::string pulse_to_csv(const PulseShape& shape, int samples = 1024);
PulseShape pulse_from_csv(const std::string& text);

// Time grid covering the pulse window plus an optional decay tail of 8/gamma,
// with the kink times inserted exactly. Tabulated shapes keep their own
// sample times.
std::vector<double> default_trace_grid(const PulseShape& shape, double gamma_total,
                                       int points = 1200, bool include_tail = true);

}  // namespace atomex
