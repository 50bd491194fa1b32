// qap: command-line front end for the coefficient-flow experiments.

#include <cstdlib>
#include <iostream>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "qap/experiments.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_logger_mt("qap");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("QAP_LOG")) {
    const std::string level = env;
    if (level == "error")
      spdlog::set_level(spdlog::level::err);
    else if (level == "debug")
      spdlog::set_level(spdlog::level::debug);
    else if (level != "info")
      spdlog::warn("QAP_LOG='{}' not recognised; using info", level);
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Coefficient-flow action eigenvalue experiments for the harmonic oscillator"};
  app.set_help_flag("--help", "print this help and exit");
  app.set_version_flag("--version", std::string("qap ") + qap::kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, method;
  std::uint64_t seed = 0;
  double h = 0.0;
  app.add_option("--config", config_path, "INI or JSON experiment config")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "optimizer seed");
  auto* h_opt = app.add_option("--h", h, "step size (also the base step of `convergence`)")
                    ->check(CLI::PositiveNumber);
  auto* method_opt = app.add_option("--method", method, "integration method")
                         ->check(CLI::IsMember({"rk4", "rk4_adaptive"}));

  const char* commands[][2] = {
      {"integrate", "integrate the coefficient system and write grid.csv"},
      {"eigenvalue", "evaluate the eigenvalue and constraint residual"},
      {"classical-check", "full classical pipeline against the closed-form action"},
      {"scan-t0", "degeneracy scan over the phase offset t0"},
      {"sweep-hbar", "eigenvalue versus hbar with a fitted exponent"},
      {"extremize", "extremize the eigenvalue over initial data"},
      {"convergence", "observed RK4 order by step halving"},
  };
  for (const auto& c : commands) app.add_subcommand(c[0], c[1]);

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  qap::ExperimentConfig cfg;
  try {
    cfg = qap::load_config(config_path);
    if (*out_opt) cfg.out_dir = out_dir;
    if (*seed_opt) cfg.optimize.seed = seed;
    if (*h_opt) {
      cfg.integration.h = h;
      cfg.convergence_h = h;
    }
    if (*method_opt) cfg.integration.method = qap::parse_method(method);
    cfg.optimize.integration = cfg.integration;
  } catch (const qap::Error& e) {
    std::cerr << "error [" << qap::to_string(e.kind()) << "]: " << e.what() << '\n';
    return qap::kExitConfig;
  }

  return qap::run_command(command, cfg, std::cout, std::cerr);
}
