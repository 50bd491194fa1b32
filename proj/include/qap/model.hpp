#pragma once

#include <string_view>
#include <vector>

namespace qap {

/// Tolerance applied to every trigonometric denominator in the closed forms.
inline constexpr double kSingularityTol = 1e-12;

/// Problem parameters for U(x) = k x^2 / 2. All values dimensionless.
struct OscillatorSpec {
  double m{1.0};       ///< mass, > 0
  double k{1.0};       ///< stiffness, >= 0
  double hbar{0.0};    ///< quantum scale multiplying functional derivatives, >= 0
  double T{1.0};       ///< horizon, > 0
  double x0{0.0};      ///< boundary position x(0)
  double xT{1.0};      ///< boundary position x(T)

  bool operator==(const OscillatorSpec&) const = default;
};

/// Initial values of the four coefficient functions at t = 0.
struct InitialData {
  double S10{0.0};
  double S20{0.0};
  double sigma10{0.0};
  double sigma20{0.0};

  bool operator==(const InitialData&) const = default;
};

/// Coefficients at time t plus the three running integrals
/// qS = int S1^2, qSigma = int (sigma1^2 + sigma2), qCon = int (sigma1 S1 + 2 S2).
struct CoefficientState {
  double t{0.0};
  double S1{0.0};
  double S2{0.0};
  double sigma1{0.0};
  double sigma2{0.0};
  double qS{0.0};
  double qSigma{0.0};
  double qCon{0.0};

  bool operator==(const CoefficientState&) const = default;
};

enum class Issue {
  NonPositiveMass,
  NonPositiveHorizon,
  NegativeStiffness,
  NegativeHbar,
  NonFinite,
  Resonance,  // warning only
};

std::string_view to_string(Issue issue);

struct Validation {
  OscillatorSpec spec;
  std::vector<Issue> errors;
  std::vector<Issue> warnings;

  bool ok() const { return errors.empty(); }
  bool resonant() const;
  bool operator==(const Validation&) const = default;
};

/// Collects every violated invariant. Resonance (sin(w0 T) ~ 0) is reported as a
/// warning because only the closed forms divide by it.
Validation validate(const OscillatorSpec& spec);

/// Throws qap::Error(Validation) listing all errors; returns the spec otherwise.
const OscillatorSpec& require_valid(const OscillatorSpec& spec);

/// Throws qap::Error(Resonance) or Error(ZeroStiffness) when the classical closed
/// forms are unusable for this spec.
void require_classical(const OscillatorSpec& spec);

bool is_finite(const InitialData& init);

double omega0(const OscillatorSpec& spec);

/// S20 = sqrt(mk) tan(w0 t0).
double t0_to_S20(double t0, const OscillatorSpec& spec);

/// Principal-branch inverse of t0_to_S20: atan(S20 / sqrt(mk)) / w0.
double S20_to_t0(double S20, const OscillatorSpec& spec);

}  // namespace qap
