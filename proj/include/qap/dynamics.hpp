#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "qap/error.hpp"
#include "qap/model.hpp"
#include "qap/ode.hpp"

namespace qap {

enum class Method { rk4, rk4_adaptive };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

struct IntegrationOptions {
  double h{1e-3};
  Method method{Method::rk4};
  double atol{1e-12};
  double rtol{1e-10};
  double blowup_threshold{1e12};
};

/// Time derivative of a CoefficientState (t excluded).
struct StateDerivative {
  double S1{0.0};
  double S2{0.0};
  double sigma1{0.0};
  double sigma2{0.0};
  double qS{0.0};
  double qSigma{0.0};
  double qCon{0.0};
};

/// Coefficient flow for the quadratic, time-local ansatz:
///   sigma1' = -(sigma1 S2 + sigma2 S1)/m
///   sigma2' = -sigma2 S2/m
///   S1'     = -S1 S2/m + hbar^2 sigma1 sigma2/(2m)
///   S2'     = -S2^2/m - k + hbar^2 sigma2^2/m
/// plus the integrands of the three accumulators.
StateDerivative rhs(const CoefficientState& state, const OscillatorSpec& spec);

/// Packed ODE state in the order S1, S2, sigma1, sigma2, qS, qSigma, qCon.
using PackedState = ode::Vec<7>;

PackedState pack(const CoefficientState& s);
CoefficientState unpack(double t, const PackedState& y);
PackedState packed_rhs(const PackedState& y, const OscillatorSpec& spec);

CoefficientState initial_state(const InitialData& init);

struct SolutionGrid {
  OscillatorSpec spec;
  std::vector<CoefficientState> states;
  Method method{Method::rk4};
  double step{0.0};

  std::vector<double> times() const;
  const CoefficientState& front() const { return states.front(); }
  const CoefficientState& back() const { return states.back(); }
  std::size_t size() const { return states.size(); }
};

/// Thrown when a component leaves [-threshold, threshold] or turns non-finite,
/// which happens when the S2 Riccati flow reaches a caustic.
class BlowUpError : public Error {
 public:
  BlowUpError(double t_last, SolutionGrid partial);

  double t_last() const noexcept { return t_last_; }
  const SolutionGrid& partial() const noexcept { return partial_; }

 private:
  double t_last_;
  SolutionGrid partial_;
};

/// Integrates the coefficient system on [0, spec.T]. Throws BlowUpError.
SolutionGrid integrate(const OscillatorSpec& spec, const InitialData& init,
                       const IntegrationOptions& opts = {});

/// Observed order of S2(t_probe) from runs at h, h/2, h/4:
/// log2(|u_h - u_{h/2}| / |u_{h/2} - u_{h/4}|). Throws Degenerate when either
/// difference is below 1e-14, and propagates BlowUpError.
double convergence_order(const OscillatorSpec& spec, const InitialData& init, double t_probe,
                         const IntegrationOptions& opts = {});

}  // namespace qap
