#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "qap/action.hpp"

namespace qap {

/// Which of (S10, S20, sigma10, sigma20) the search may move.
using ActiveMask = std::array<bool, 4>;

inline constexpr ActiveMask kAllActive{true, true, true, true};
inline constexpr ActiveMask kClassicalActive{true, true, false, false};

/// Value returned by the objective when integration blows up, signed so that the
/// search always retreats from it.
inline constexpr double kBlowUpPenalty = 1e15;

enum class Sense { maximize, minimize };

std::string_view to_string(Sense sense);
Sense parse_sense(std::string_view name);

std::array<double, 4> to_array(const InitialData& init);
InitialData from_array(const std::array<double, 4>& v);

/// lambda with the quadratic constraint penalty applied in the unfavourable
/// direction for `sense`: lambda + w r^2 when minimizing, lambda - w r^2 when
/// maximizing. A blow-up maps to +kBlowUpPenalty (minimize) or -kBlowUpPenalty.
double objective(const InitialData& init, const OscillatorSpec& spec, double penalty_weight,
                 const IntegrationOptions& integration = {}, Sense sense = Sense::minimize);

struct HessianSignature {
  int positive{0};
  int negative{0};
  int zero{0};
};

struct StationarityOptions {
  ActiveMask active{kAllActive};
  double h_fd{1e-5};
  double penalty_weight{0.0};
  Sense sense{Sense::maximize};
  IntegrationOptions integration{};
  bool hessian{true};
};

struct StationarityReport {
  std::array<double, 4> gradient{};   ///< zero for inactive coordinates
  double gradient_norm{0.0};          ///< max-norm over active coordinates
  std::vector<double> hessian_eigenvalues;
  HessianSignature signature;
};

/// Central differences with step h_fd * max(1, |coord|) per active coordinate.
/// The Hessian uses 10x that step. Near-zero eigenvalues are those below
/// 1e-6 * max|eig|. Throws Error(FDFailure) when any probe blows up.
StationarityReport stationarity_check(const InitialData& init, const OscillatorSpec& spec,
                                      const StationarityOptions& opts = {});

struct OptimizeOptions {
  ActiveMask active{kAllActive};
  double grad_tol{1e-6};
  int max_iter{2000};
  double penalty_weight{0.0};
  int restarts{5};
  std::uint64_t seed{42};
  double h_fd{1e-5};
  Sense sense{Sense::maximize};
  IntegrationOptions integration{};
};

struct ExtremumResult {
  InitialData init;
  EigenvalueReport report;
  double objective{0.0};
  double gradient_norm{0.0};
  std::array<double, 4> gradient{};
  HessianSignature hessian_signature;
  std::vector<double> hessian_eigenvalues;
  bool hessian_available{false};
  int iterations{0};
  int restarts_used{0};
  int blowups{0};
  bool converged{false};
  ActiveMask active_mask{kAllActive};
  std::uint64_t seed{42};
  Sense sense{Sense::maximize};
};

/// Nelder-Mead over the active coordinates, restarted from perturbed copies of
/// the best point. Converged means the finite-difference gradient max-norm is at
/// most grad_tol; simplex collapse alone is not enough because the classical
/// problem has a flat valley. If the guess itself blows up, the active
/// coordinates are halved toward zero until the integration succeeds.
ExtremumResult optimize(const OscillatorSpec& spec, const InitialData& guess,
                        const OptimizeOptions& opts = {});

}  // namespace qap
