#include "qap/dynamics.hpp"

#include <cmath>
#include <string>

namespace qap {

std::string_view to_string(Method method) {
  return method == Method::rk4 ? "rk4" : "rk4_adaptive";
}

Method parse_method(std::string_view name) {
  if (name == "rk4") return Method::rk4;
  if (name == "rk4_adaptive") return Method::rk4_adaptive;
  throw Error(ErrorKind::Config, "unknown integration method '" + std::string(name) + "'");
}

StateDerivative rhs(const CoefficientState& s, const OscillatorSpec& spec) {
  const double inv_m = 1.0 / spec.m;
  const double h2 = spec.hbar * spec.hbar;
  StateDerivative d;
  d.sigma1 = -inv_m * (s.sigma1 * s.S2 + s.sigma2 * s.S1);
  d.sigma2 = -inv_m * s.sigma2 * s.S2;
  d.S1 = -inv_m * s.S1 * s.S2 + (h2 / (2.0 * spec.m)) * s.sigma1 * s.sigma2;
  d.S2 = -inv_m * s.S2 * s.S2 - spec.k + (h2 / spec.m) * s.sigma2 * s.sigma2;
  d.qS = s.S1 * s.S1;
  d.qSigma = s.sigma1 * s.sigma1 + s.sigma2;
  d.qCon = s.sigma1 * s.S1 + 2.0 * s.S2;
  return d;
}

PackedState pack(const CoefficientState& s) {
  return {s.S1, s.S2, s.sigma1, s.sigma2, s.qS, s.qSigma, s.qCon};
}

CoefficientState unpack(double t, const PackedState& y) {
  return {t, y[0], y[1], y[2], y[3], y[4], y[5], y[6]};
}

PackedState packed_rhs(const PackedState& y, const OscillatorSpec& spec) {
  const StateDerivative d = rhs(unpack(0.0, y), spec);
  return {d.S1, d.S2, d.sigma1, d.sigma2, d.qS, d.qSigma, d.qCon};
}

CoefficientState initial_state(const InitialData& init) {
  CoefficientState s;
  s.S1 = init.S10;
  s.S2 = init.S20;
  s.sigma1 = init.sigma10;
  s.sigma2 = init.sigma20;
  return s;
}

std::vector<double> SolutionGrid::times() const {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.t);
  return out;
}

BlowUpError::BlowUpError(double t_last, SolutionGrid partial)
    : Error(ErrorKind::BlowUp, "coefficient blow-up after t = " + std::to_string(t_last)),
      t_last_(t_last),
      partial_(std::move(partial)) {}

SolutionGrid integrate(const OscillatorSpec& spec, const InitialData& init,
                       const IntegrationOptions& opts) {
  require_valid(spec);
  if (!(opts.h > 0.0) || !std::isfinite(opts.h))
    throw Error(ErrorKind::Validation, "step size must be positive and finite");
  if (!is_finite(init)) throw Error(ErrorKind::Validation, "initial data must be finite");

  SolutionGrid grid{spec, {}, opts.method, opts.h};
  if (opts.method == Method::rk4) grid.states.reserve(ode::uniform_step_count(spec.T, opts.h) + 1);

  ode::Options o;
  o.h = opts.h;
  o.adaptive = opts.method == Method::rk4_adaptive;
  o.atol = opts.atol;
  o.rtol = opts.rtol;
  o.blowup_threshold = opts.blowup_threshold;

  auto f = [&spec](double, const PackedState& y) { return packed_rhs(y, spec); };
  auto obs = [&grid](double t, const PackedState& y) { grid.states.push_back(unpack(t, y)); };
  const ode::Outcome outcome = ode::integrate<7>(f, pack(initial_state(init)), spec.T, o, obs);

  if (!outcome.completed) throw BlowUpError(outcome.t_last, std::move(grid));
  return grid;
}

double convergence_order(const OscillatorSpec& spec, const InitialData& init, double t_probe,
                         const IntegrationOptions& opts) {
  if (!(t_probe > 0.0 && t_probe <= spec.T))
    throw Error(ErrorKind::Validation, "t_probe must lie in (0, T]");
  OscillatorSpec probe = spec;
  probe.T = t_probe;

  IntegrationOptions o = opts;
  double u[3];
  for (int i = 0; i < 3; ++i) {
    u[i] = integrate(probe, init, o).back().S2;
    o.h *= 0.5;
  }
  const double d1 = std::abs(u[0] - u[1]);
  const double d2 = std::abs(u[1] - u[2]);
  if (d1 < 1e-14 || d2 < 1e-14)
    throw Error(ErrorKind::Degenerate, "successive differences below 1e-14; probe too easy");
  return std::log2(d1 / d2);
}

}  // namespace qap
