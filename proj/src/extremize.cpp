#include "qap/extremize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include <spdlog/spdlog.h>

namespace qap {

std::string_view to_string(Sense sense) { return sense == Sense::maximize ? "maximize" : "minimize"; }

Sense parse_sense(std::string_view name) {
  if (name == "maximize" || name == "max") return Sense::maximize;
  if (name == "minimize" || name == "min") return Sense::minimize;
  throw Error(ErrorKind::Config, "unknown optimization sense '" + std::string(name) + "'");
}

std::array<double, 4> to_array(const InitialData& init) {
  return {init.S10, init.S20, init.sigma10, init.sigma20};
}

InitialData from_array(const std::array<double, 4>& v) { return {v[0], v[1], v[2], v[3]}; }

namespace {

struct Evaluation {
  double value{0.0};
  bool blew_up{false};
};

Evaluation evaluate(const InitialData& init, const OscillatorSpec& spec, double w,
                    const IntegrationOptions& integration, Sense sense) {
  const double sign = sense == Sense::maximize ? -1.0 : 1.0;
  try {
    const EigenvalueReport r = eigenvalue(integrate(spec, init, integration));
    const double pen = w * r.constraint_residual * r.constraint_residual;
    return {r.lambda + sign * pen, false};
  } catch (const BlowUpError&) {
    return {sign * kBlowUpPenalty, true};
  }
}

// Minimization view of the objective over the active coordinates only.
class Problem {
 public:
  Problem(const OscillatorSpec& spec, const InitialData& base, const ActiveMask& active,
          double w, Sense sense, const IntegrationOptions& integration)
      : spec_(spec), base_(to_array(base)), w_(w), sense_(sense), integration_(integration) {
    for (int i = 0; i < 4; ++i)
      if (active[i]) index_.push_back(i);
  }

  std::size_t dim() const { return index_.size(); }

  Eigen::VectorXd reduce(const InitialData& init) const {
    const auto full = to_array(init);
    Eigen::VectorXd z(dim());
    for (std::size_t j = 0; j < dim(); ++j) z[j] = full[index_[j]];
    return z;
  }

  InitialData expand(const Eigen::VectorXd& z) const {
    auto full = base_;
    for (std::size_t j = 0; j < dim(); ++j) full[index_[j]] = z[j];
    return from_array(full);
  }

  /// Cost to minimize: the objective, negated when maximizing.
  double cost(const Eigen::VectorXd& z) {
    const Evaluation e = evaluate(expand(z), spec_, w_, integration_, sense_);
    if (e.blew_up) ++blowups_;
    return sense_ == Sense::maximize ? -e.value : e.value;
  }

  int blowups() const { return blowups_; }

 private:
  OscillatorSpec spec_;
  std::array<double, 4> base_;
  double w_;
  Sense sense_;
  IntegrationOptions integration_;
  std::vector<int> index_;
  int blowups_{0};
};

struct SimplexRun {
  Eigen::VectorXd best;
  double best_cost{0.0};
  int iterations{0};
};

// `stationary(x)` is polled on the best vertex every n + 1 iterations (when it has
// changed); a true result ends the run.
template <class StopTest>
SimplexRun nelder_mead(Problem& problem, const Eigen::VectorXd& start, double start_cost,
                       const Eigen::VectorXd& steps, int max_iter, StopTest&& stationary) {
  const auto n = static_cast<Eigen::Index>(problem.dim());
  std::vector<Eigen::VectorXd> x(n + 1, start);
  std::vector<double> f(n + 1, start_cost);
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i + 1][i] += steps[i];
    f[i + 1] = problem.cost(x[i + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  double polled = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < max_iter; ++it) {
    std::iota(order.begin(), order.end(), 0);
    // Ties broken by vertex index so the ordering is fully deterministic.
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return f[a] < f[b]; });
    const std::size_t lo = order.front(), hi = order.back(), second = order[n - 1];

    if (it % (n + 1) == 0 && f[lo] < polled) {
      polled = f[lo];
      if (stationary(x[lo])) break;
    }

    const double spread = f[hi] - f[lo];
    double diameter = 0.0;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i)
      diameter = std::max(diameter, (x[i] - x[lo]).cwiseAbs().maxCoeff());
    const double xscale = std::max(1.0, x[lo].cwiseAbs().maxCoeff());
    if (spread <= 1e-16 * std::max(1.0, std::abs(f[lo])) || diameter <= 1e-13 * xscale) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i)
      if (i != hi) centroid += x[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = centroid + (centroid - x[hi]);
    const double fr = problem.cost(xr);
    if (fr < f[lo]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - x[hi]);
      const double fe = problem.cost(xe);
      if (fe < fr) {
        x[hi] = xe;
        f[hi] = fe;
      } else {
        x[hi] = xr;
        f[hi] = fr;
      }
      continue;
    }
    if (fr < f[second]) {
      x[hi] = xr;
      f[hi] = fr;
      continue;
    }
    const bool outside = fr < f[hi];
    const Eigen::VectorXd xc =
        outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                : Eigen::VectorXd(centroid + 0.5 * (x[hi] - centroid));
    const double fc = problem.cost(xc);
    if (fc < (outside ? fr : f[hi])) {
      x[hi] = xc;
      f[hi] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i) {
      if (i == lo) continue;
      x[i] = x[lo] + 0.5 * (x[i] - x[lo]);
      f[i] = problem.cost(x[i]);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
  return {x[best], f[best], it};
}

double fd_step(double coord, double h) { return h * std::max(1.0, std::abs(coord)); }

}  // namespace

double objective(const InitialData& init, const OscillatorSpec& spec, double penalty_weight,
                 const IntegrationOptions& integration, Sense sense) {
  return evaluate(init, spec, penalty_weight, integration, sense).value;
}

StationarityReport stationarity_check(const InitialData& init, const OscillatorSpec& spec,
                                      const StationarityOptions& opts) {
  auto f = [&](const std::array<double, 4>& v) {
    const Evaluation e = evaluate(from_array(v), spec, opts.penalty_weight, opts.integration,
                                  opts.sense);
    if (e.blew_up) throw Error(ErrorKind::FDFailure, "finite-difference probe blew up");
    return e.value;
  };

  const std::array<double, 4> x = to_array(init);
  std::vector<int> idx;
  for (int i = 0; i < 4; ++i)
    if (opts.active[i]) idx.push_back(i);

  StationarityReport rep;
  for (int i : idx) {
    const double h = fd_step(x[i], opts.h_fd);
    auto xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    rep.gradient[i] = (f(xp) - f(xm)) / (2.0 * h);
    rep.gradient_norm = std::max(rep.gradient_norm, std::abs(rep.gradient[i]));
  }

  const auto n = static_cast<Eigen::Index>(idx.size());
  if (n == 0 || !opts.hessian) return rep;
  Eigen::MatrixXd H(n, n);
  const double f0 = f(x);
  for (Eigen::Index a = 0; a < n; ++a) {
    const int i = idx[a];
    const double hi = 10.0 * fd_step(x[i], opts.h_fd);
    auto xp = x, xm = x;
    xp[i] += hi;
    xm[i] -= hi;
    H(a, a) = (f(xp) - 2.0 * f0 + f(xm)) / (hi * hi);
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const int j = idx[b];
      const double hj = 10.0 * fd_step(x[j], opts.h_fd);
      auto pp = x, pm = x, mp = x, mm = x;
      pp[i] += hi; pp[j] += hj;
      pm[i] += hi; pm[j] -= hj;
      mp[i] -= hi; mp[j] += hj;
      mm[i] -= hi; mm[j] -= hj;
      H(a, b) = H(b, a) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * hi * hj);
    }
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd eig = solver.eigenvalues();
  const double scale = eig.cwiseAbs().maxCoeff();
  for (Eigen::Index a = 0; a < n; ++a) {
    rep.hessian_eigenvalues.push_back(eig[a]);
    if (std::abs(eig[a]) <= 1e-6 * scale)
      ++rep.signature.zero;
    else if (eig[a] > 0.0)
      ++rep.signature.positive;
    else
      ++rep.signature.negative;
  }
  return rep;
}

ExtremumResult optimize(const OscillatorSpec& spec, const InitialData& guess,
                        const OptimizeOptions& opts) {
  require_valid(spec);
  if (!is_finite(guess)) throw Error(ErrorKind::Validation, "initial guess must be finite");

  ExtremumResult res;
  res.active_mask = opts.active;
  res.seed = opts.seed;
  res.sense = opts.sense;
  res.init = guess;

  Problem problem(spec, guess, opts.active, opts.penalty_weight, opts.sense, opts.integration);
  StationarityOptions sopts{opts.active, opts.h_fd, opts.penalty_weight, opts.sense,
                            opts.integration, true};
  StationarityOptions gradient_only = sopts;
  gradient_only.hessian = false;

  auto finish = [&](const InitialData& at) {
    res.init = at;
    try {
      res.report = eigenvalue(integrate(spec, at, opts.integration));
      res.objective = objective(at, spec, opts.penalty_weight, opts.integration, opts.sense);
    } catch (const BlowUpError&) {
      res.converged = false;
      res.gradient_norm = std::numeric_limits<double>::quiet_NaN();
      res.blowups = problem.blowups() + 1;
      return;
    }
    try {
      const StationarityReport s = stationarity_check(at, spec, sopts);
      res.gradient = s.gradient;
      res.gradient_norm = s.gradient_norm;
      res.hessian_signature = s.signature;
      res.hessian_eigenvalues = s.hessian_eigenvalues;
      res.hessian_available = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::FDFailure) throw;
      res.converged = false;
      res.gradient_norm = std::numeric_limits<double>::quiet_NaN();
    }
    res.blowups = problem.blowups();
  };

  if (problem.dim() == 0) {
    res.converged = true;
    finish(guess);
    return res;
  }

  Eigen::VectorXd best = problem.reduce(guess);
  double best_cost = problem.cost(best);
  for (int retreat = 0; retreat < 60 && best_cost >= kBlowUpPenalty; ++retreat) {
    best *= 0.5;
    best_cost = problem.cost(best);
  }
  if (best_cost >= kBlowUpPenalty) {
    spdlog::warn("optimize: no finite objective found along the retreat from the guess");
    finish(problem.expand(best));
    return res;
  }

  Eigen::VectorXd scale(best.size());
  for (Eigen::Index i = 0; i < best.size(); ++i) scale[i] = std::max(1.0, std::abs(best[i])) * 0.1;

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> jitter(0.5, 1.5);
  std::bernoulli_distribution flip(0.5);

  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    Eigen::VectorXd steps = scale;
    if (r > 0)
      for (Eigen::Index i = 0; i < steps.size(); ++i)
        steps[i] *= std::pow(0.5, r) * jitter(rng) * (flip(rng) ? -1.0 : 1.0);

    auto stationary = [&](const Eigen::VectorXd& z) {
      try {
        return stationarity_check(problem.expand(z), spec, gradient_only).gradient_norm <=
               opts.grad_tol;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::FDFailure) throw;
        return false;
      }
    };
    const SimplexRun run =
        nelder_mead(problem, best, best_cost, steps, opts.max_iter, stationary);
    res.iterations += run.iterations;
    res.restarts_used = r + 1;
    if (run.best_cost <= best_cost) {
      best = run.best;
      best_cost = run.best_cost;
    }

    try {
      const StationarityReport s = stationarity_check(problem.expand(best), spec, gradient_only);
      spdlog::debug("optimize: restart {} cost {:.17g} |grad| {:.3e}", r, best_cost,
                    s.gradient_norm);
      if (s.gradient_norm <= opts.grad_tol) {
        res.converged = true;
        break;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::FDFailure) throw;
    }
  }

  const bool converged = res.converged;
  finish(problem.expand(best));
  res.converged = converged && res.hessian_available && res.gradient_norm <= opts.grad_tol;
  if (!res.converged)
    spdlog::debug("optimize: not converged after {} restarts (|grad| = {:.3e})",
                  res.restarts_used, res.gradient_norm);
  return res;
}

}  // namespace qap
