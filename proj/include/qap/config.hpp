#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "qap/extremize.hpp"

namespace qap {

struct SweepConfig {
  std::vector<double> t0{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> hbar{0.02, 0.04, 0.08, 0.16};
  double t_probe{0.5};
  // Quantum configuration for the convergence study.
  double conv_hbar{0.5};
  double conv_sigma10{0.3};
  double conv_sigma20{0.7};
};

/// Everything a CLI command needs. Read from an INI-style file with sections
/// [spec] [init] [grid] [optimize] [sweep] [output], or the same layout as JSON.
struct ExperimentConfig {
  OscillatorSpec spec;
  InitialData init;
  std::optional<double> t0;  ///< [init] t0, sets S20 through t0_to_S20 for classical runs
  IntegrationOptions integration;
  double convergence_h{0.02};
  OptimizeOptions optimize;
  SweepConfig sweep;
  std::filesystem::path out_dir{"."};
};

enum class ConfigFormat { ini, json };

/// Parses config text. Unknown sections or keys are rejected with Error(Config);
/// grids must be non-empty and strictly increasing.
ExperimentConfig parse_config(std::string_view text, ConfigFormat format);

/// Reads a file; `.json` selects JSON, anything else INI.
ExperimentConfig load_config(const std::filesystem::path& path);

/// start, start + step, ... up to stop (inclusive within 1e-9 relative).
std::vector<double> make_range(double start, double stop, double step);

}  // namespace qap
