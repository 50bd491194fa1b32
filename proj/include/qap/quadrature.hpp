#pragma once

#include <span>

namespace qap::quadrature {

/// Composite Simpson on a possibly non-uniform, strictly increasing grid.
/// Interval pairs use the three-point non-uniform rule; with an odd number of
/// intervals the final one is integrated from the quadratic through the last
/// three samples, so the order does not drop at the tail. Two samples fall back
/// to the trapezoid rule.
double simpson(std::span<const double> t, std::span<const double> f);

}  // namespace qap::quadrature
