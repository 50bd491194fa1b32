#include "qap/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qap/error.hpp"

namespace qap {

std::string_view to_string(Issue issue) {
  switch (issue) {
    case Issue::NonPositiveMass: return "NonPositiveMass";
    case Issue::NonPositiveHorizon: return "NonPositiveHorizon";
    case Issue::NegativeStiffness: return "NegativeStiffness";
    case Issue::NegativeHbar: return "NegativeHbar";
    case Issue::NonFinite: return "NonFinite";
    case Issue::Resonance: return "Resonance";
  }
  return "Unknown";
}

bool Validation::resonant() const {
  return std::find(warnings.begin(), warnings.end(), Issue::Resonance) != warnings.end();
}

Validation validate(const OscillatorSpec& spec) {
  Validation out{spec, {}, {}};
  const bool finite = std::isfinite(spec.m) && std::isfinite(spec.k) &&
                      std::isfinite(spec.hbar) && std::isfinite(spec.T) &&
                      std::isfinite(spec.x0) && std::isfinite(spec.xT);
  if (!finite) out.errors.push_back(Issue::NonFinite);
  // NaN compares false, so NaN fields only show up as NonFinite.
  if (spec.m <= 0.0) out.errors.push_back(Issue::NonPositiveMass);
  if (spec.T <= 0.0) out.errors.push_back(Issue::NonPositiveHorizon);
  if (spec.k < 0.0) out.errors.push_back(Issue::NegativeStiffness);
  if (spec.hbar < 0.0) out.errors.push_back(Issue::NegativeHbar);

  if (out.errors.empty() && spec.k > 0.0) {
    const double w0T = std::sqrt(spec.k / spec.m) * spec.T;
    if (std::abs(std::sin(w0T)) < kSingularityTol) out.warnings.push_back(Issue::Resonance);
  }
  return out;
}

const OscillatorSpec& require_valid(const OscillatorSpec& spec) {
  const Validation v = validate(spec);
  if (!v.ok()) {
    std::string msg = "invalid oscillator spec:";
    for (Issue e : v.errors) {
      msg += ' ';
      msg += to_string(e);
    }
    throw Error(ErrorKind::Validation, msg);
  }
  return spec;
}

void require_classical(const OscillatorSpec& spec) {
  require_valid(spec);
  if (spec.k == 0.0)
    throw Error(ErrorKind::ZeroStiffness, "closed forms need k > 0; use the ODE path");
  if (validate(spec).resonant())
    throw Error(ErrorKind::Resonance, "sin(w0*T) vanishes; closed forms are undefined");
}

bool is_finite(const InitialData& init) {
  return std::isfinite(init.S10) && std::isfinite(init.S20) && std::isfinite(init.sigma10) &&
         std::isfinite(init.sigma20);
}

double omega0(const OscillatorSpec& spec) { return std::sqrt(spec.k / spec.m); }

double t0_to_S20(double t0, const OscillatorSpec& spec) {
  const double w0 = omega0(spec);
  const double c = std::cos(w0 * t0);
  if (std::abs(c) < kSingularityTol) throw SingularityError("cos(w0*t0)", c);
  return std::sqrt(spec.m * spec.k) * std::sin(w0 * t0) / c;
}

double S20_to_t0(double S20, const OscillatorSpec& spec) {
  const double w0 = omega0(spec);
  if (w0 == 0.0) throw Error(ErrorKind::ZeroFrequency, "S20_to_t0 needs w0 > 0");
  return std::atan(S20 / std::sqrt(spec.m * spec.k)) / w0;
}

}  // namespace qap
