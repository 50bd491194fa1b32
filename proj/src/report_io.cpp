#include "qap/report_io.hpp"

#include <cmath>
#include <ostream>

#include <spdlog/fmt/fmt.h>

namespace qap {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.17g}", v);
}

Metadata spec_metadata(const OscillatorSpec& spec) {
  return {
      {"tool", std::string("qap ") + kToolVersion},
      {"spec", fmt::format("m={} k={} hbar={} T={} x0={} xT={}", format_double(spec.m),
                           format_double(spec.k), format_double(spec.hbar),
                           format_double(spec.T), format_double(spec.x0),
                           format_double(spec.xT))},
  };
}

namespace {

void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [k, v] : meta) out << "# " << k << ": " << v << '\n';
}

}  // namespace

void write_grid_csv(std::ostream& out, const SolutionGrid& grid, const Metadata& extra) {
  Metadata meta = spec_metadata(grid.spec);
  meta.emplace_back("method", std::string(to_string(grid.method)));
  meta.emplace_back("step", format_double(grid.step));
  meta.insert(meta.end(), extra.begin(), extra.end());
  write_metadata(out, meta);
  out << "t,S1,S2,sigma1,sigma2,qS,qSigma,qCon\n";
  for (const auto& s : grid.states) {
    out << format_double(s.t) << ',' << format_double(s.S1) << ',' << format_double(s.S2) << ','
        << format_double(s.sigma1) << ',' << format_double(s.sigma2) << ','
        << format_double(s.qS) << ',' << format_double(s.qSigma) << ','
        << format_double(s.qCon) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  write_metadata(out, table.metadata);
  for (const auto& c : table.columns) out << c << ',';
  out << "status\n";
  for (const auto& row : table.rows) {
    for (double v : row.values) out << format_double(v) << ',';
    out << row.status << '\n';
  }
}

nlohmann::ordered_json to_json(const OscillatorSpec& spec) {
  return {{"m", spec.m}, {"k", spec.k}, {"hbar", spec.hbar},
          {"T", spec.T}, {"x0", spec.x0}, {"xT", spec.xT}};
}

nlohmann::ordered_json to_json(const InitialData& init) {
  return {{"S10", init.S10}, {"S20", init.S20}, {"sigma10", init.sigma10},
          {"sigma20", init.sigma20}};
}

nlohmann::ordered_json to_json(const EigenvalueReport& r) {
  return {{"lambda", r.lambda},
          {"boundary_term", r.boundary_term},
          {"kinetic_term", r.kinetic_term},
          {"quantum_term", r.quantum_term},
          {"constraint_residual", r.constraint_residual}};
}

nlohmann::ordered_json to_json(const ExtremumResult& r) {
  static const char* names[4] = {"S10", "S20", "sigma10", "sigma20"};
  nlohmann::ordered_json active = nlohmann::ordered_json::array();
  nlohmann::ordered_json gradient = nlohmann::ordered_json::object();
  for (int i = 0; i < 4; ++i) {
    if (!r.active_mask[i]) continue;
    active.push_back(names[i]);
    gradient[names[i]] = r.gradient[i];
  }
  return {{"init", to_json(r.init)},
          {"report", to_json(r.report)},
          {"objective", r.objective},
          {"sense", std::string(to_string(r.sense))},
          {"converged", r.converged},
          {"gradient_norm", r.gradient_norm},
          {"gradient", gradient},
          {"hessian_available", r.hessian_available},
          {"hessian_eigenvalues", r.hessian_eigenvalues},
          {"hessian_signature",
           {{"positive", r.hessian_signature.positive},
            {"negative", r.hessian_signature.negative},
            {"zero", r.hessian_signature.zero}}},
          {"iterations", r.iterations},
          {"restarts_used", r.restarts_used},
          {"blowups", r.blowups},
          {"active", active},
          {"seed", r.seed}};
}

}  // namespace qap
