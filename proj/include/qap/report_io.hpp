#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qap/extremize.hpp"

namespace qap {

inline constexpr const char* kToolVersion = "0.1.0";

/// 17 significant digits, "%.17g" style; NaN as "nan".
std::string format_double(double v);

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Metadata lines every table carries: tool version and the full spec snapshot.
Metadata spec_metadata(const OscillatorSpec& spec);

/// CSV with `# key: value` header lines, then the column header, then one row
/// per grid point: t,S1,S2,sigma1,sigma2,qS,qSigma,qCon. LF line endings.
void write_grid_csv(std::ostream& out, const SolutionGrid& grid, const Metadata& extra = {});

/// Rows of a parameter sweep, in grid order, failures included.
struct SweepTable {
  struct Row {
    std::vector<double> values;  ///< one per column
    std::string status;          ///< "ok" or a failure reason
  };
  std::vector<std::string> columns;
  std::vector<Row> rows;
  Metadata metadata;
};

void write_sweep_csv(std::ostream& out, const SweepTable& table);

nlohmann::ordered_json to_json(const OscillatorSpec& spec);
nlohmann::ordered_json to_json(const InitialData& init);
nlohmann::ordered_json to_json(const EigenvalueReport& report);
nlohmann::ordered_json to_json(const ExtremumResult& result);

}  // namespace qap
