#include "qap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include <spdlog/spdlog.h>

#include "qap/classical.hpp"

namespace qap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::filesystem::path output_file(const ExperimentConfig& cfg, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw Error(ErrorKind::Config, "cannot create output directory " + cfg.out_dir.string());
  return cfg.out_dir / name;
}

std::ofstream open_output(const std::filesystem::path& path) {
  // Binary mode keeps LF line endings on every platform.
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::Config, "cannot write " + path.string());
  return f;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  auto f = open_output(path);
  f << j.dump(2) << '\n';
}

OscillatorSpec classical_spec(const ExperimentConfig& cfg) {
  OscillatorSpec spec = cfg.spec;
  if (spec.hbar != 0.0) {
    spdlog::warn("classical experiment: ignoring hbar = {} (using 0)", spec.hbar);
    spec.hbar = 0.0;
  }
  return spec;
}

Metadata table_metadata(const OscillatorSpec& spec, const ExperimentConfig& cfg,
                        std::string_view command) {
  Metadata meta = spec_metadata(spec);
  meta.emplace_back("command", std::string(command));
  meta.emplace_back("grid", "h=" + format_double(cfg.integration.h) +
                                " method=" + std::string(to_string(cfg.integration.method)));
  meta.emplace_back("seed", std::to_string(cfg.optimize.seed));
  return meta;
}

std::string failure(const Error& e) { return "failed:" + std::string(to_string(e.kind())); }

}  // namespace

InitialData resolved_init(const ExperimentConfig& cfg) {
  InitialData init = cfg.init;
  if (cfg.t0) init.S20 = t0_to_S20(*cfg.t0, cfg.spec);
  return init;
}

IntegrateResult cmd_integrate(const ExperimentConfig& cfg, std::ostream& out) {
  require_valid(cfg.spec);
  const InitialData init = resolved_init(cfg);
  IntegrateResult res;
  res.csv = output_file(cfg, "grid.csv");
  try {
    res.grid = integrate(cfg.spec, init, cfg.integration);
    res.t_last = res.grid.back().t;
  } catch (const BlowUpError& e) {
    res.grid = e.partial();
    res.blew_up = true;
    res.t_last = e.t_last();
  }

  auto f = open_output(res.csv);
  write_grid_csv(f, res.grid, {{"init", to_json(init).dump()}});
  if (res.blew_up) f << "# BLOWUP t_last=" << format_double(res.t_last) << '\n';

  const auto& s = res.grid.back();
  out << "rows: " << res.grid.size() << '\n'
      << "final t=" << format_double(s.t) << " S1=" << format_double(s.S1)
      << " S2=" << format_double(s.S2) << " sigma1=" << format_double(s.sigma1)
      << " sigma2=" << format_double(s.sigma2) << '\n'
      << "accumulators qS=" << format_double(s.qS) << " qSigma=" << format_double(s.qSigma)
      << " qCon=" << format_double(s.qCon) << '\n';
  if (res.blew_up) out << "BLOWUP after t=" << format_double(res.t_last) << '\n';
  out << "wrote " << res.csv.string() << '\n';
  return res;
}

EigenvalueReport cmd_eigenvalue(const ExperimentConfig& cfg, std::ostream& out) {
  const InitialData init = resolved_init(cfg);
  const EigenvalueReport r = eigenvalue(integrate(cfg.spec, init, cfg.integration));
  nlohmann::ordered_json j{{"spec", to_json(cfg.spec)}, {"init", to_json(init)},
                           {"report", to_json(r)}};
  const auto path = output_file(cfg, "eigenvalue.json");
  write_json(path, j);
  out << "lambda=" << format_double(r.lambda) << " boundary=" << format_double(r.boundary_term)
      << " kinetic=" << format_double(r.kinetic_term)
      << " quantum=" << format_double(r.quantum_term)
      << " constraint_residual=" << format_double(r.constraint_residual) << '\n';
  return r;
}

ClassicalCheckResult cmd_classical_check(const ExperimentConfig& cfg, std::ostream& out) {
  const OscillatorSpec spec = classical_spec(cfg);
  require_classical(spec);

  ClassicalCheckResult res;
  res.t0 = cfg.t0.value_or(0.5 * spec.T);
  res.guess = {cfg.init.S10, t0_to_S20(res.t0, spec), 0.0, 0.0};
  res.at_guess = eigenvalue(integrate(spec, res.guess, cfg.integration));

  OptimizeOptions opts = cfg.optimize;
  opts.active = kClassicalActive;
  opts.integration = cfg.integration;
  res.extremum = optimize(spec, res.guess, opts);

  res.lambda_star = classical::lambda_star(spec);
  res.delta = res.extremum.report.lambda - res.lambda_star;
  res.pass = std::abs(res.delta) <= kClassicalCheckTol;

  nlohmann::ordered_json j{{"spec", to_json(spec)},
                           {"t0", res.t0},
                           {"guess", to_json(res.guess)},
                           {"lambda_at_guess", res.at_guess.lambda},
                           {"extremum", to_json(res.extremum)},
                           {"lambda_star", res.lambda_star},
                           {"delta", res.delta},
                           {"tolerance", kClassicalCheckTol},
                           {"pass", res.pass}};
  write_json(output_file(cfg, "classical_check.json"), j);

  out << (res.pass ? "PASS" : "FAIL") << " lambda=" << format_double(res.extremum.report.lambda)
      << " lambda_star=" << format_double(res.lambda_star)
      << " delta=" << format_double(res.delta)
      << " gradient_norm=" << format_double(res.extremum.gradient_norm)
      << " converged=" << (res.extremum.converged ? 1 : 0) << '\n';
  return res;
}

SweepTable cmd_scan_t0(const ExperimentConfig& cfg, std::ostream& out) {
  const OscillatorSpec spec = classical_spec(cfg);
  require_classical(spec);
  const double lstar = classical::lambda_star(spec);

  SweepTable table;
  table.columns = {"t0", "S20", "S10", "lambda_closed", "lambda", "constraint_residual",
                   "converged", "gradient_norm"};
  table.metadata = table_metadata(spec, cfg, "scan-t0");
  table.metadata.emplace_back("lambda_star", format_double(lstar));

  StationarityOptions sopts;
  sopts.active = {true, false, false, false};
  sopts.h_fd = cfg.optimize.h_fd;
  sopts.integration = cfg.integration;
  sopts.hessian = false;

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double t0 : cfg.sweep.t0) {
    SweepTable::Row row{{t0, kNaN, kNaN, kNaN, kNaN, kNaN, 0.0, kNaN}, "ok"};
    try {
      const double S20 = t0_to_S20(t0, spec);
      const double S10 = classical::s10_star(t0, spec);
      row.values[1] = S20;
      row.values[2] = S10;
      row.values[3] = classical::lambda_classical({S10, t0}, spec);
      const InitialData init{S10, S20, 0.0, 0.0};
      const EigenvalueReport r = eigenvalue(integrate(spec, init, cfg.integration));
      row.values[4] = r.lambda;
      row.values[5] = r.constraint_residual;
      row.values[7] = stationarity_check(init, spec, sopts).gradient_norm;
      row.values[6] = 1.0;
      lo = std::min(lo, r.lambda);
      hi = std::max(hi, r.lambda);
    } catch (const Error& e) {
      row.status = failure(e);
      spdlog::info("scan-t0: t0={} {}", t0, e.what());
    }
    table.rows.push_back(std::move(row));
  }
  const double spread = hi >= lo ? hi - lo : kNaN;
  table.metadata.emplace_back("lambda_spread", format_double(spread));

  const auto path = output_file(cfg, "scan_t0.csv");
  auto f = open_output(path);
  write_sweep_csv(f, table);
  out << "rows: " << table.rows.size() << " lambda_star=" << format_double(lstar)
      << " lambda_spread=" << format_double(spread) << '\n'
      << "wrote " << path.string() << '\n';
  return table;
}

std::optional<PowerFit> fit_power_law(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0) || !(std::abs(y[i]) > 0.0) || !std::isfinite(y[i])) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(std::abs(y[i])));
  }
  if (lx.size() < 2) return std::nullopt;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  const double slope = sxy / sxx;
  return PowerFit{slope, std::exp(my - slope * mx), lx.size()};
}

HbarSweepResult cmd_sweep_hbar(const ExperimentConfig& cfg, std::ostream& out) {
  require_valid(cfg.spec);
  const InitialData init = resolved_init(cfg);
  if (init.sigma10 == 0.0 && init.sigma20 == 0.0)
    spdlog::warn("sweep-hbar: sigma10 = sigma20 = 0, quantum terms vanish identically");

  OscillatorSpec base = cfg.spec;
  base.hbar = 0.0;
  HbarSweepResult res;
  res.lambda0 = eigenvalue(integrate(base, init, cfg.integration)).lambda;

  StationarityOptions sopts;
  sopts.active = kAllActive;
  sopts.h_fd = cfg.optimize.h_fd;
  sopts.integration = cfg.integration;
  sopts.hessian = false;

  SweepTable& table = res.table;
  table.columns = {"hbar", "lambda", "delta_lambda", "constraint_residual", "converged",
                   "gradient_norm"};
  table.metadata = table_metadata(base, cfg, "sweep-hbar");
  table.metadata.emplace_back("init", to_json(init).dump());
  table.metadata.emplace_back("lambda0", format_double(res.lambda0));

  std::vector<double> xs, ys;
  for (double hbar : cfg.sweep.hbar) {
    SweepTable::Row row{{hbar, kNaN, kNaN, kNaN, 0.0, kNaN}, "ok"};
    OscillatorSpec spec = cfg.spec;
    spec.hbar = hbar;
    try {
      const EigenvalueReport r = eigenvalue(integrate(spec, init, cfg.integration));
      row.values[1] = r.lambda;
      row.values[2] = r.lambda - res.lambda0;
      row.values[3] = r.constraint_residual;
      row.values[5] = stationarity_check(init, spec, sopts).gradient_norm;
      row.values[4] = 1.0;
      xs.push_back(hbar);
      ys.push_back(row.values[2]);
    } catch (const Error& e) {
      row.status = failure(e);
      spdlog::info("sweep-hbar: hbar={} {}", hbar, e.what());
    }
    table.rows.push_back(std::move(row));
  }
  res.fit = fit_power_law(xs, ys);
  table.metadata.emplace_back("exponent",
                              res.fit ? format_double(res.fit->exponent) : std::string("nan"));

  const auto csv = output_file(cfg, "sweep_hbar.csv");
  {
    auto f = open_output(csv);
    write_sweep_csv(f, table);
  }
  nlohmann::ordered_json j{{"spec", to_json(base)},
                           {"init", to_json(init)},
                           {"lambda0", res.lambda0},
                           {"hbar", cfg.sweep.hbar}};
  if (res.fit) {
    j["exponent"] = res.fit->exponent;
    j["prefactor"] = res.fit->prefactor;
    j["fit_points"] = res.fit->points;
  } else {
    j["exponent"] = nullptr;
  }
  const auto js = output_file(cfg, "sweep_hbar.json");
  write_json(js, j);

  out << "rows: " << table.rows.size() << " lambda0=" << format_double(res.lambda0)
      << " exponent=" << (res.fit ? format_double(res.fit->exponent) : std::string("n/a"))
      << '\n'
      << "wrote " << csv.string() << " and " << js.string() << '\n';
  return res;
}

ExtremumResult cmd_extremize(const ExperimentConfig& cfg, std::ostream& out) {
  const InitialData init = resolved_init(cfg);
  OptimizeOptions opts = cfg.optimize;
  opts.integration = cfg.integration;
  const ExtremumResult r = optimize(cfg.spec, init, opts);
  nlohmann::ordered_json j{{"spec", to_json(cfg.spec)},
                           {"guess", to_json(init)},
                           {"penalty_weight", opts.penalty_weight},
                           {"result", to_json(r)}};
  const auto path = output_file(cfg, "extremum.json");
  write_json(path, j);
  out << (r.converged ? "converged" : "not converged")
      << " lambda=" << format_double(r.report.lambda)
      << " gradient_norm=" << format_double(r.gradient_norm)
      << " constraint_residual=" << format_double(r.report.constraint_residual)
      << " iterations=" << r.iterations << '\n'
      << "wrote " << path.string() << '\n';
  return r;
}

ConvergenceResult cmd_convergence(const ExperimentConfig& cfg, std::ostream& out) {
  require_valid(cfg.spec);
  const InitialData init = resolved_init(cfg);
  IntegrationOptions iopts = cfg.integration;
  iopts.h = cfg.convergence_h;

  OscillatorSpec classical = cfg.spec;
  classical.hbar = 0.0;
  OscillatorSpec quantum = cfg.spec;
  quantum.hbar = cfg.sweep.conv_hbar;
  InitialData qinit = init;
  qinit.sigma10 = cfg.sweep.conv_sigma10;
  qinit.sigma20 = cfg.sweep.conv_sigma20;

  ConvergenceResult res;
  auto probe = [&](const OscillatorSpec& spec, const InitialData& in, std::optional<double>& order,
                   std::string& note) {
    try {
      order = convergence_order(spec, in, cfg.sweep.t_probe, iopts);
      note = (*order >= kOrderLow && *order <= kOrderHigh) ? "ok" : "out of range";
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Degenerate) throw;
      note = "Degenerate";
    }
  };
  probe(classical, init, res.classical_order, res.classical_note);
  probe(quantum, qinit, res.quantum_order, res.quantum_note);
  res.pass = res.classical_note == "ok" && res.quantum_note == "ok";

  auto order_json = [](const std::optional<double>& o) {
    return o ? nlohmann::ordered_json(*o) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json j{{"spec", to_json(cfg.spec)},
                           {"t_probe", cfg.sweep.t_probe},
                           {"h", iopts.h},
                           {"method", std::string(to_string(iopts.method))},
                           {"classical", {{"init", to_json(init)},
                                          {"order", order_json(res.classical_order)},
                                          {"status", res.classical_note}}},
                           {"quantum", {{"hbar", quantum.hbar},
                                        {"init", to_json(qinit)},
                                        {"order", order_json(res.quantum_order)},
                                        {"status", res.quantum_note}}},
                           {"window", {kOrderLow, kOrderHigh}},
                           {"pass", res.pass}};
  write_json(output_file(cfg, "convergence.json"), j);

  auto show = [](const std::optional<double>& o, const std::string& note) {
    return (o ? format_double(*o) : std::string("n/a")) + " (" + note + ")";
  };
  out << (res.pass ? "PASS" : "FAIL") << " classical order=" << show(res.classical_order, res.classical_note)
      << " quantum order=" << show(res.quantum_order, res.quantum_note) << '\n';
  return res;
}

int run_command(std::string_view name, const ExperimentConfig& cfg, std::ostream& out,
                std::ostream& err) {
  try {
    if (name == "integrate") return cmd_integrate(cfg, out).blew_up ? kExitNumerical : kExitOk;
    if (name == "eigenvalue") {
      cmd_eigenvalue(cfg, out);
      return kExitOk;
    }
    if (name == "classical-check")
      return cmd_classical_check(cfg, out).pass ? kExitOk : kExitCheckFailed;
    if (name == "scan-t0") {
      cmd_scan_t0(cfg, out);
      return kExitOk;
    }
    if (name == "sweep-hbar") {
      cmd_sweep_hbar(cfg, out);
      return kExitOk;
    }
    if (name == "extremize") return cmd_extremize(cfg, out).converged ? kExitOk : kExitNumerical;
    if (name == "convergence") return cmd_convergence(cfg, out).pass ? kExitOk : kExitCheckFailed;
    err << "unknown command '" << name << "'\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::Validation:
      case ErrorKind::Config:
      case ErrorKind::Resonance:
      case ErrorKind::ZeroStiffness:
      case ErrorKind::ZeroFrequency:
        return kExitConfig;
      default:
        return kExitNumerical;
    }
  }
}

}  // namespace qap
