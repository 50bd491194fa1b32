#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "oracles.hpp"
#include "qap/action.hpp"
#include "qap/classical.hpp"
#include "qap/dynamics.hpp"
#include "qap/experiments.hpp"
#include "qap/extremize.hpp"
#include "qap/model.hpp"
#include "qap/ode.hpp"

using namespace qap;

namespace {

struct Outcome {
  bool pass{false};
  std::string detail;
};

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const OscillatorSpec kUnit{1, 1, 0, 1, 0, 1};
const std::vector<double> kScan{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

Outcome classical_action() {
  const InitialData guess{0.0, t0_to_S20(0.5, kUnit), 0.0, 0.0};
  OptimizeOptions opts;
  opts.active = kClassicalActive;
  const ExtremumResult r = optimize(kUnit, guess, opts);
  const double exact = oracle::oscillator_action(1, 1, 1, 0, 1);
  const double err = std::abs(r.report.lambda - exact);
  return {r.converged && err <= 1e-6,
          "lambda error " + fmt_g(err) + ", gradient " + fmt_g(r.gradient_norm)};
}

Outcome degeneracy_scan() {
  const double exact = oracle::oscillator_action(1, 1, 1, 0, 1);
  double lo = 1e300, hi = -1e300, closed_err = 0.0, ode_err = 0.0;
  for (double t0 : kScan) {
    const double s10 = classical::s10_star(t0, kUnit);
    const double closed = classical::lambda_classical({s10, t0}, kUnit);
    const double ode = eigenvalue(integrate(kUnit, {s10, t0_to_S20(t0, kUnit), 0, 0})).lambda;
    lo = std::min(lo, ode);
    hi = std::max(hi, ode);
    closed_err = std::max(closed_err, std::abs(closed - exact));
    ode_err = std::max(ode_err, std::abs(ode - exact));
  }
  return {hi - lo <= 1e-6 && closed_err <= 1e-8 && ode_err <= 1e-6,
          "spread " + fmt_g(hi - lo) + ", closed-form error " + fmt_g(closed_err) +
              ", ODE error " + fmt_g(ode_err)};
}

double closed_form_error(double t0, double h) {
  const double S10 = 1.0;
  IntegrationOptions opts;
  opts.h = h;
  const SolutionGrid g = integrate(kUnit, {S10, t0_to_S20(t0, kUnit), 0, 0}, opts);
  double worst = 0.0;
  for (const CoefficientState& s : g.states) {
    worst = std::max(worst, std::abs(s.S1 - classical::s1_closed(s.t, {S10, t0}, kUnit)));
    worst = std::max(worst, std::abs(s.S2 - classical::s2_closed(s.t, {S10, t0}, kUnit)));
  }
  return worst;
}

Outcome closed_form_oracle() {
  // At h = 1e-3 the RK4 error is near roundoff, so the order check halves a
  // coarser step where truncation error dominates.
  double worst = 0.0, ratio_lo = 1e300, ratio_hi = 0.0;
  for (double t0 : {0.0, 0.3, 0.5}) {
    worst = std::max(worst, closed_form_error(t0, 1e-3));
    const double ratio = closed_form_error(t0, 0.02) / closed_form_error(t0, 0.01);
    ratio_lo = std::min(ratio_lo, ratio);
    ratio_hi = std::max(ratio_hi, ratio);
  }
  return {worst <= 1e-8 && ratio_lo >= 16 * 0.7 && ratio_hi <= 16 * 1.3,
          "max error " + fmt_g(worst) + ", halving ratio in [" + fmt_g(ratio_lo) + ", " +
              fmt_g(ratio_hi) + "] at h 0.02 -> 0.01"};
}

Outcome free_particle() {
  const OscillatorSpec spec{1, 1e-12, 0, 1, 0, 1};
  const InitialData guess{0.0, t0_to_S20(0.5, spec), 0.0, 0.0};
  OptimizeOptions opts;
  opts.active = kClassicalActive;
  const ExtremumResult r = optimize(spec, guess, opts);
  const double err = std::abs(r.report.lambda - oracle::free_particle_action(1, 1, 0, 1));
  return {r.converged && err <= 1e-5, "lambda error " + fmt_g(err)};
}

Outcome stationarity() {
  const double step = 1e-4;
  double worst = 0.0;
  for (double t0 : kScan) {
    const double s10 = classical::s10_star(t0, kUnit);
    const double S20 = t0_to_S20(t0, kUnit);
    auto lam = [&](double S10) { return eigenvalue(integrate(kUnit, {S10, S20, 0, 0})).lambda; };
    worst = std::max(worst, std::abs((lam(s10 + step) - lam(s10 - step)) / (2 * step)));
  }
  return {worst <= 1e-8, "max |dlambda/dS10| " + fmt_g(worst)};
}

Outcome constraint_diagnostics() {
  const SolutionGrid mid = integrate(kUnit, {0.4, t0_to_S20(0.5, kUnit), 0, 0});
  const SolutionGrid zero = integrate(kUnit, {0.4, t0_to_S20(0.0, kUnit), 0, 0});
  const double r_mid = constraint_residual(mid);
  const double r_zero = constraint_residual(zero);
  const double expected = -2.0 * std::log(std::cos(1.0));
  double acc = 0.0;
  for (const SolutionGrid* g : {&mid, &zero}) {
    const Accumulators s = simpson_accumulators(*g);
    acc = std::max({acc, std::abs(s.qS - g->back().qS), std::abs(s.qSigma - g->back().qSigma),
                    std::abs(s.qCon - g->back().qCon)});
  }
  return {std::abs(r_mid) <= 1e-9 && std::abs(r_zero - expected) <= 1e-7 && acc <= 1e-9,
          "residual at T/2 " + fmt_g(r_mid) + ", error at 0 " + fmt_g(r_zero - expected) +
              ", accumulator gap " + fmt_g(acc)};
}

Outcome quantum_scaling() {
  const InitialData init{1, 0, 0.3, 1};
  const std::vector<double> hbars{0.02, 0.04, 0.08, 0.16};
  const double lambda0 = eigenvalue(integrate(kUnit, init)).lambda;
  std::vector<double> delta;
  for (double hb : hbars) {
    OscillatorSpec spec = kUnit;
    spec.hbar = hb;
    delta.push_back(eigenvalue(integrate(spec, init)).lambda - lambda0);
  }
  const auto fit = fit_power_law(hbars, delta);
  const double jump = std::abs(delta.front());
  return {fit && std::abs(fit->exponent - 2.0) <= 0.05 && jump <= 1e-2,
          "exponent " + (fit ? fmt_g(fit->exponent) : std::string("none")) +
              ", |lambda(0.02) - lambda(0)| " + fmt_g(jump)};
}

/// sigma2(t) from an independent run carrying int S2 alongside the system.
std::vector<double> sigma2_identity(const OscillatorSpec& spec, const InitialData& init) {
  ode::Vec<8> y0{init.S10, init.S20, init.sigma10, init.sigma20, 0, 0, 0, 0};
  auto f = [&](double, const ode::Vec<8>& y) {
    PackedState p;
    std::copy(y.begin(), y.begin() + 7, p.begin());
    const PackedState d = packed_rhs(p, spec);
    ode::Vec<8> out;
    std::copy(d.begin(), d.end(), out.begin());
    out[7] = y[1];
    return out;
  };
  std::vector<double> out;
  ode::integrate<8>(f, y0, spec.T, ode::Options{},
                    [&](double, const ode::Vec<8>& y) {
                      out.push_back(init.sigma20 * std::exp(-y[7] / spec.m));
                    });
  return out;
}

Outcome structural_invariants() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double identity = 0.0, flip = 0.0;
  bool persistent = true, decomposed = true;
  for (int trial = 0; trial < 50; ++trial) {
    const OscillatorSpec spec{1 + u(rng), 0.5 + u(rng), u(rng), 1, u(rng) - 0.5, 1 + u(rng)};
    const InitialData init{2 * u(rng) - 1, 0.6 * u(rng) - 0.2, 2 * u(rng) - 1, 2 * u(rng) - 1};
    const SolutionGrid g = integrate(spec, init);

    const std::vector<double> expected = sigma2_identity(spec, init);
    if (expected.size() != g.size()) return {false, "grid mismatch in trial " + std::to_string(trial)};
    for (std::size_t i = 0; i < g.size(); ++i)
      identity = std::max(identity, std::abs(g.states[i].sigma2 - expected[i]));

    const SolutionGrid flipped =
        integrate(spec, {init.S10, init.S20, -init.sigma10, -init.sigma20});
    for (std::size_t i = 0; i < g.size(); ++i)
      flip = std::max({flip, std::abs(g.states[i].S1 - flipped.states[i].S1),
                       std::abs(g.states[i].S2 - flipped.states[i].S2)});

    const SolutionGrid bare = integrate(spec, {init.S10, init.S20, 0, 0});
    for (const CoefficientState& s : bare.states)
      persistent = persistent && s.sigma1 == 0.0 && s.sigma2 == 0.0 && s.qSigma == 0.0;

    const EigenvalueReport r = eigenvalue(g);
    decomposed = decomposed && r.lambda == r.boundary_term + r.kinetic_term + r.quantum_term;
  }
  return {identity <= 1e-8 && flip <= 1e-12 && persistent && decomposed,
          "sigma2 identity " + fmt_g(identity) + ", flip " + fmt_g(flip) + ", sigma=0 " +
              (persistent ? "exact" : "broken") + ", decomposition " +
              (decomposed ? "exact" : "broken")};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "qap_acceptance_determinism";
  fs::remove_all(root);
  const char* ini =
      "[spec]\nhbar = 0.1\n[init]\nS10 = 1\nsigma10 = 0.3\nsigma20 = 1\n[optimize]\nseed = 11\n";
  const std::vector<std::string> files{"grid.csv", "scan_t0.csv", "sweep_hbar.csv"};
  std::vector<std::string> first;
  for (int run = 0; run < 2; ++run) {
    ExperimentConfig cfg = parse_config(ini, ConfigFormat::ini);
    cfg.out_dir = root / std::to_string(run);
    fs::create_directories(cfg.out_dir);
    std::ostringstream out, err;
    for (const char* cmd : {"integrate", "scan-t0", "sweep-hbar"})
      if (run_command(cmd, cfg, out, err) != kExitOk) return {false, std::string(cmd) + " failed"};
    for (std::size_t i = 0; i < files.size(); ++i) {
      const std::string bytes = slurp(cfg.out_dir / files[i]);
      if (run == 0) first.push_back(bytes);
      else if (bytes != first[i] || bytes.empty()) return {false, files[i] + " differs"};
    }
  }
  fs::remove_all(root);
  return {true, "grid, scan and sweep CSVs byte-identical across runs"};
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::err);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"classical action reproduction", classical_action},
      {"degeneracy scan", degeneracy_scan},
      {"closed-form ODE oracle", closed_form_oracle},
      {"free-particle limit", free_particle},
      {"stationarity", stationarity},
      {"constraint diagnostics", constraint_diagnostics},
      {"quantum-correction scaling", quantum_scaling},
      {"structural invariants", structural_invariants},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
  }
  std::printf("%d of %zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
