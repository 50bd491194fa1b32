#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "qap/config.hpp"
#include "qap/report_io.hpp"

namespace qap {

/// Process exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,      ///< validation or configuration error
  kExitNumerical = 3,   ///< blow-up, non-convergence, other numerical failure
  kExitCheckFailed = 4, ///< a verification command ran but its check failed
};

/// Config init with S20 replaced through t0_to_S20 when [init] t0 is given.
InitialData resolved_init(const ExperimentConfig& cfg);

struct IntegrateResult {
  SolutionGrid grid;  ///< partial when blew_up
  bool blew_up{false};
  double t_last{0.0};
  std::filesystem::path csv;
};

/// Writes grid.csv. On blow-up the partial grid is written with a
/// "# BLOWUP t_last=..." footer.
IntegrateResult cmd_integrate(const ExperimentConfig& cfg, std::ostream& out);

/// Writes eigenvalue.json for the configured initial data.
EigenvalueReport cmd_eigenvalue(const ExperimentConfig& cfg, std::ostream& out);

struct ClassicalCheckResult {
  double t0{0.0};
  InitialData guess;
  EigenvalueReport at_guess;
  ExtremumResult extremum;
  double lambda_star{0.0};
  double delta{0.0};
  bool pass{false};
};

inline constexpr double kClassicalCheckTol = 1e-6;

/// t0 -> S20 map, integration, eigenvalue, extremization over (S10, S20) with
/// hbar forced to 0, compared against lambda_star. Writes classical_check.json.
ClassicalCheckResult cmd_classical_check(const ExperimentConfig& cfg, std::ostream& out);

/// One row per t0 with S10 at its stationary value: closed-form and ODE
/// eigenvalues, constraint residual with sigma = 0, |dlambda/dS10|. Writes scan_t0.csv.
SweepTable cmd_scan_t0(const ExperimentConfig& cfg, std::ostream& out);

struct PowerFit {
  double exponent{0.0};
  double prefactor{0.0};
  std::size_t points{0};
};

/// Least-squares line through (log x, log |y|), skipping x <= 0 or y == 0.
/// Empty when fewer than two points remain.
std::optional<PowerFit> fit_power_law(std::span<const double> x, std::span<const double> y);

struct HbarSweepResult {
  SweepTable table;
  double lambda0{0.0};
  std::optional<PowerFit> fit;
};

/// lambda(hbar) at fixed initial data and the fitted exponent of
/// |lambda(hbar) - lambda(0)|. Writes sweep_hbar.csv and sweep_hbar.json.
HbarSweepResult cmd_sweep_hbar(const ExperimentConfig& cfg, std::ostream& out);

/// Runs optimize from the configured initial data. Writes extremum.json.
ExtremumResult cmd_extremize(const ExperimentConfig& cfg, std::ostream& out);

struct ConvergenceResult {
  std::optional<double> classical_order;
  std::optional<double> quantum_order;
  std::string classical_note;
  std::string quantum_note;
  bool pass{false};
};

inline constexpr double kOrderLow = 3.7;
inline constexpr double kOrderHigh = 4.3;

/// Observed order for a classical run and one quantum run. Writes convergence.json.
ConvergenceResult cmd_convergence(const ExperimentConfig& cfg, std::ostream& out);

/// Dispatches a subcommand by name and maps exceptions onto exit codes.
int run_command(std::string_view name, const ExperimentConfig& cfg, std::ostream& out,
                std::ostream& err);

}  // namespace qap
