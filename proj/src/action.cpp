#include "qap/action.hpp"

#include <vector>

#include "qap/classical.hpp"
#include "qap/quadrature.hpp"

namespace qap {

namespace {

void require_complete(const SolutionGrid& grid) {
  if (grid.states.empty() || grid.back().t != grid.spec.T || grid.front().t != 0.0)
    throw Error(ErrorKind::IncompleteGrid, "solution grid does not span [0, T]");
}

double weighted(double linear, double quadratic, double x) {
  return linear * x + quadratic * x * x / 2.0;
}

}  // namespace

double constraint_residual(const SolutionGrid& grid) {
  require_complete(grid);
  const auto& spec = grid.spec;
  const auto& a = grid.front();
  const auto& b = grid.back();
  return weighted(b.sigma1, b.sigma2, spec.xT) - weighted(a.sigma1, a.sigma2, spec.x0) -
         b.qCon / spec.m;
}

EigenvalueReport eigenvalue(const SolutionGrid& grid) {
  require_complete(grid);
  const auto& spec = grid.spec;
  const auto& a = grid.front();
  const auto& b = grid.back();

  EigenvalueReport r;
  r.boundary_term = weighted(b.S1, b.S2, spec.xT) - weighted(a.S1, a.S2, spec.x0);
  r.kinetic_term = -b.qS / (2.0 * spec.m);
  r.quantum_term = spec.hbar * spec.hbar * b.qSigma / (2.0 * spec.m);
  r.lambda = r.boundary_term + r.kinetic_term + r.quantum_term;
  r.constraint_residual = constraint_residual(grid);
  return r;
}

Accumulators simpson_accumulators(const SolutionGrid& grid) {
  const std::vector<double> t = grid.times();
  std::vector<double> fS, fSigma, fCon;
  fS.reserve(t.size());
  fSigma.reserve(t.size());
  fCon.reserve(t.size());
  for (const auto& s : grid.states) {
    fS.push_back(s.S1 * s.S1);
    fSigma.push_back(s.sigma1 * s.sigma1 + s.sigma2);
    fCon.push_back(s.sigma1 * s.S1 + 2.0 * s.S2);
  }
  return {quadrature::simpson(t, fS), quadrature::simpson(t, fSigma),
          quadrature::simpson(t, fCon)};
}

FunctionalValue functional_values(std::span<const double> trajectory, const SolutionGrid& grid) {
  if (trajectory.size() != grid.size())
    throw Error(ErrorKind::LengthMismatch, "trajectory must be sampled on the grid times");
  const std::vector<double> t = grid.times();
  std::vector<double> fS(t.size()), fSigma(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& s = grid.states[i];
    fS[i] = weighted(s.S1, s.S2, trajectory[i]);
    fSigma[i] = weighted(s.sigma1, s.sigma2, trajectory[i]);
  }
  FunctionalValue v;
  v.S_of_x = quadrature::simpson(t, fS);
  v.sigma_of_x = quadrature::simpson(t, fSigma);
  v.psi_magnitude_log = v.sigma_of_x;
  if (grid.spec.hbar > 0.0) v.psi_phase = v.S_of_x / grid.spec.hbar;
  return v;
}

PhaseDiagnostic phase_diagnostic(std::span<const double> trajectory, const SolutionGrid& grid,
                                 double t0) {
  PhaseDiagnostic d;
  d.series_phase = functional_values(trajectory, grid).S_of_x;
  const std::vector<double> t = grid.times();
  d.reference_phase = classical::phase_functional(t, trajectory, t0, grid.spec);
  d.residual = d.series_phase - d.reference_phase;
  return d;
}

}  // namespace qap
