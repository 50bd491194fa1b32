#pragma once

// Explicit RK4 over fixed-size state arrays. The right-hand side is any callable
// `std::array<double, N>(double t, const std::array<double, N>& y)`; the observer
// is called as `obs(t, y)` at t = 0 and after every accepted step.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace qap::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
inline Vec<N> axpy(const Vec<N>& y, double a, const Vec<N>& x) {
  Vec<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + a * x[i];
  return out;
}

template <std::size_t N, class Rhs>
Vec<N> rk4_step(Rhs&& f, double t, const Vec<N>& y, double h) {
  const Vec<N> k1 = f(t, y);
  const Vec<N> k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const Vec<N> k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const Vec<N> k4 = f(t + h, axpy(y, h, k3));
  Vec<N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

struct Options {
  double h{1e-3};
  bool adaptive{false};
  double atol{1e-12};
  double rtol{1e-10};
  double blowup_threshold{1e12};
  std::size_t max_steps{50'000'000};
};

struct Outcome {
  bool completed{true};
  double t_last{0.0};       ///< last accepted time
  std::size_t steps{0};
  std::size_t rejected{0};
};

template <std::size_t N>
bool within_bounds(const Vec<N>& y, double threshold) {
  return std::all_of(y.begin(), y.end(),
                     [&](double v) { return std::isfinite(v) && std::abs(v) <= threshold; });
}

/// Number of uniform steps covering [0, t_end]; the last one is shortened to land on t_end.
inline std::size_t uniform_step_count(double t_end, double h) {
  const double ratio = t_end / h;
  const double n = std::ceil(ratio - 1e-9 * std::max(1.0, ratio));
  return static_cast<std::size_t>(std::max(1.0, n));
}

template <std::size_t N, class Rhs, class Observer>
Outcome integrate_fixed(Rhs&& f, Vec<N> y, double t_end, const Options& opt, Observer&& obs) {
  Outcome out;
  obs(0.0, y);
  const std::size_t n = uniform_step_count(t_end, opt.h);
  double t = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double t_next = (i == n) ? t_end : static_cast<double>(i) * opt.h;
    Vec<N> y_next = rk4_step<N>(f, t, y, t_next - t);
    if (!within_bounds(y_next, opt.blowup_threshold)) {
      out.completed = false;
      out.t_last = t;
      return out;
    }
    y = y_next;
    t = t_next;
    ++out.steps;
    obs(t, y);
  }
  out.t_last = t;
  return out;
}

/// Step doubling: one step of size h against two of size h/2, with the mixed
/// per-component error |y2 - y1| / 15 / (atol + rtol * max(|y|, |y2|)).
template <std::size_t N, class Rhs, class Observer>
Outcome integrate_adaptive(Rhs&& f, Vec<N> y, double t_end, const Options& opt, Observer&& obs) {
  Outcome out;
  obs(0.0, y);
  double t = 0.0;
  double h = std::min(opt.h, t_end);
  const double h_min = 1e-14 * std::max(1.0, t_end);

  while (t < t_end) {
    if (out.steps + out.rejected >= opt.max_steps) break;
    bool last = false;
    if (t + h >= t_end * (1.0 - 1e-14)) {
      h = t_end - t;
      last = true;
    }
    const Vec<N> big = rk4_step<N>(f, t, y, h);
    const Vec<N> half = rk4_step<N>(f, t, y, 0.5 * h);
    const Vec<N> two = rk4_step<N>(f, t + 0.5 * h, half, 0.5 * h);

    if (!within_bounds(two, opt.blowup_threshold)) {
      // A non-finite trial might only mean h is too large; an out-of-range finite
      // value is a genuine excursion past the threshold.
      const bool finite = std::all_of(two.begin(), two.end(), [](double v) { return std::isfinite(v); });
      if (finite || h <= h_min) break;
      h *= 0.25;
      ++out.rejected;
      continue;
    }

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double scale = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(two[i]));
      err = std::max(err, std::abs(two[i] - big[i]) / 15.0 / scale);
    }
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      y = two;
      t = last ? t_end : t + h;
      ++out.steps;
      obs(t, y);
    } else {
      ++out.rejected;
      if (h <= h_min) break;
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h = std::max(h * factor, h_min);
  }

  out.t_last = t;
  out.completed = (t == t_end);
  return out;
}

template <std::size_t N, class Rhs, class Observer>
Outcome integrate(Rhs&& f, const Vec<N>& y0, double t_end, const Options& opt, Observer&& obs) {
  if (opt.adaptive) return integrate_adaptive<N>(f, y0, t_end, opt, obs);
  return integrate_fixed<N>(f, y0, t_end, opt, obs);
}

}  // namespace qap::ode
