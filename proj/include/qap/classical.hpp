#pragma once

#include <span>

#include "qap/model.hpp"

/// Closed forms for the hbar = 0 limit. Every trigonometric denominator is
/// checked against kSingularityTol and reported by name through SingularityError.
namespace qap::classical {

/// S10 and the phase offset t0 of the classical solution; t0 also fixes S20.
struct ClassicalParams {
  double S10{0.0};
  double t0{0.0};
};

/// S1(t) = S10 cos(w0 t0) / cos(w0 (t - t0)).
double s1_closed(double t, const ClassicalParams& p, const OscillatorSpec& spec);

/// S2(t) = -sqrt(mk) tan(w0 (t - t0)).
double s2_closed(double t, const ClassicalParams& p, const OscillatorSpec& spec);

/// Eigenvalue after substituting the closed-form coefficients, as a function of (S10, t0).
double lambda_classical(const ClassicalParams& p, const OscillatorSpec& spec);

/// Stationary S10 of lambda_classical at fixed t0.
double s10_star(double t0, const OscillatorSpec& spec);

/// Degenerate stationary value:
/// sqrt(mk) [(xT^2 + x0^2) cos(w0 T) - 2 xT x0] / (2 sin(w0 T)).
double lambda_star(const OscillatorSpec& spec);

/// Diagnostic reference trajectory
/// (xT cos(w0 t0) - x0 cos(w0 (T - t0))) / (sin(w0 T) sin(w0 (t - t0))).
/// Evaluated exactly as written; it does not reproduce the time-dependent S2 above.
double xtilde(double t, double t0, const OscillatorSpec& spec);

/// Diagnostic phase functional -sqrt(mk)/2 * int (x - xtilde)^2 dt by composite
/// Simpson over the given samples.
double phase_functional(std::span<const double> times, std::span<const double> x, double t0,
                        const OscillatorSpec& spec);

}  // namespace qap::classical
