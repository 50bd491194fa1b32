#include "qap/classical.hpp"

#include <cmath>
#include <vector>

#include "qap/error.hpp"
#include "qap/quadrature.hpp"

namespace qap::classical {

namespace {

double guarded(double value, const char* name) {
  if (std::abs(value) < kSingularityTol) throw SingularityError(name, value);
  return value;
}

double sqrt_mk(const OscillatorSpec& spec) { return std::sqrt(spec.m * spec.k); }

}  // namespace

double s1_closed(double t, const ClassicalParams& p, const OscillatorSpec& spec) {
  require_classical(spec);
  const double w0 = omega0(spec);
  const double c = guarded(std::cos(w0 * (t - p.t0)), "cos(w0*(t-t0))");
  return p.S10 * std::cos(w0 * p.t0) / c;
}

double s2_closed(double t, const ClassicalParams& p, const OscillatorSpec& spec) {
  require_classical(spec);
  const double w0 = omega0(spec);
  const double c = guarded(std::cos(w0 * (t - p.t0)), "cos(w0*(t-t0))");
  return -sqrt_mk(spec) * std::sin(w0 * (t - p.t0)) / c;
}

double lambda_classical(const ClassicalParams& p, const OscillatorSpec& spec) {
  require_classical(spec);
  const double w0 = omega0(spec);
  const double a = sqrt_mk(spec);
  const double c0 = guarded(std::cos(w0 * p.t0), "cos(w0*t0)");
  const double cT = guarded(std::cos(w0 * (spec.T - p.t0)), "cos(w0*(T-t0))");
  const double tan0 = std::sin(w0 * p.t0) / c0;
  const double tanT = std::sin(w0 * (spec.T - p.t0)) / cT;

  const double linear = p.S10 * (spec.xT * c0 / cT - spec.x0);
  const double boundary = -0.5 * a * (spec.xT * spec.xT * tanT + spec.x0 * spec.x0 * tan0);
  const double kinetic = -p.S10 * p.S10 * c0 * c0 / (2.0 * a) * (tanT + tan0);
  return linear + boundary + kinetic;
}

double s10_star(double t0, const OscillatorSpec& spec) {
  require_classical(spec);
  const double w0 = omega0(spec);
  const double c0 = guarded(std::cos(w0 * t0), "cos(w0*t0)");
  guarded(std::cos(w0 * (spec.T - t0)), "cos(w0*(T-t0))");
  const double sT = guarded(std::sin(w0 * spec.T), "sin(w0*T)");
  return sqrt_mk(spec) * (spec.xT * c0 - spec.x0 * std::cos(w0 * (spec.T - t0))) / (c0 * sT);
}

double lambda_star(const OscillatorSpec& spec) {
  require_classical(spec);
  const double w0T = omega0(spec) * spec.T;
  const double sT = guarded(std::sin(w0T), "sin(w0*T)");
  const double x0 = spec.x0, xT = spec.xT;
  return sqrt_mk(spec) * ((xT * xT + x0 * x0) * std::cos(w0T) - 2.0 * xT * x0) / (2.0 * sT);
}

double xtilde(double t, double t0, const OscillatorSpec& spec) {
  require_classical(spec);
  const double w0 = omega0(spec);
  const double sT = guarded(std::sin(w0 * spec.T), "sin(w0*T)");
  const double st = guarded(std::sin(w0 * (t - t0)), "sin(w0*(t-t0))");
  const double num = spec.xT * std::cos(w0 * t0) - spec.x0 * std::cos(w0 * (spec.T - t0));
  return num / (sT * st);
}

double phase_functional(std::span<const double> times, std::span<const double> x, double t0,
                        const OscillatorSpec& spec) {
  if (times.size() != x.size())
    throw Error(ErrorKind::LengthMismatch, "trajectory and time samples differ in length");
  std::vector<double> integrand(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double d = x[i] - xtilde(times[i], t0, spec);
    integrand[i] = d * d;
  }
  return -0.5 * sqrt_mk(spec) * quadrature::simpson(times, integrand);
}

}  // namespace qap::classical
