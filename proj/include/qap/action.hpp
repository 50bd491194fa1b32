#pragma once

#include <optional>
#include <span>

#include "qap/dynamics.hpp"

namespace qap {

/// lambda split into its three contributions, plus the initial-data constraint.
struct EigenvalueReport {
  double lambda{0.0};
  double boundary_term{0.0};   ///< [S1 x + S2 x^2/2] at T minus at 0
  double kinetic_term{0.0};    ///< -qS(T) / (2m)
  double quantum_term{0.0};    ///< hbar^2 qSigma(T) / (2m)
  double constraint_residual{0.0};
};

/// lambda = boundary_term + kinetic_term + quantum_term, summed in that order.
/// Throws Error(IncompleteGrid) when the grid stops short of T.
EigenvalueReport eigenvalue(const SolutionGrid& grid);

/// [sigma1 x + sigma2 x^2/2] at T minus at 0, minus qCon(T)/m.
double constraint_residual(const SolutionGrid& grid);

struct Accumulators {
  double qS{0.0};
  double qSigma{0.0};
  double qCon{0.0};
};

/// Recomputes the three accumulator integrals from the grid samples by composite
/// Simpson. Independent of the in-state quadrature; used as a cross-check.
Accumulators simpson_accumulators(const SolutionGrid& grid);

/// Truncated series functionals evaluated on a sampled trajectory.
struct FunctionalValue {
  double S_of_x{0.0};
  double sigma_of_x{0.0};
  double psi_magnitude_log{0.0};
  std::optional<double> psi_phase;  ///< empty when hbar = 0
};

/// S[x] = int (S1 x + S2 x^2/2) dt and sigma[x] = int (sigma1 x + sigma2 x^2/2) dt.
/// `trajectory` is sampled at grid.times(); throws Error(LengthMismatch) otherwise.
FunctionalValue functional_values(std::span<const double> trajectory, const SolutionGrid& grid);

/// Compares the series phase S[x] on the grid's kernels with the classical
/// phase_functional at offset t0. Diagnostic only.
struct PhaseDiagnostic {
  double series_phase{0.0};
  double reference_phase{0.0};
  double residual{0.0};
};

PhaseDiagnostic phase_diagnostic(std::span<const double> trajectory, const SolutionGrid& grid,
                                 double t0);

}  // namespace qap
