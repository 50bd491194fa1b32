#include "qap/quadrature.hpp"

#include "qap/error.hpp"

namespace qap::quadrature {

double simpson(std::span<const double> t, std::span<const double> f) {
  if (t.size() != f.size())
    throw Error(ErrorKind::LengthMismatch, "simpson: sample and abscissa counts differ");
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * (t[1] - t[0]) * (f[0] + f[1]);

  const std::size_t intervals = n - 1;
  const std::size_t paired = intervals - intervals % 2;
  double sum = 0.0;
  for (std::size_t i = 0; i < paired; i += 2) {
    const double h0 = t[i + 1] - t[i];
    const double h1 = t[i + 2] - t[i + 1];
    const double w = (h0 + h1) / 6.0;
    sum += w * ((2.0 - h1 / h0) * f[i] + (h0 + h1) * (h0 + h1) / (h0 * h1) * f[i + 1] +
                (2.0 - h0 / h1) * f[i + 2]);
  }
  if (paired < intervals) {
    const double a = t[n - 2] - t[n - 3];
    const double b = t[n - 1] - t[n - 2];
    sum += -b * b * b / (6.0 * a * (a + b)) * f[n - 3] + b * (3.0 * a + b) / (6.0 * a) * f[n - 2] +
           b * (3.0 * a + 2.0 * b) / (6.0 * (a + b)) * f[n - 1];
  }
  return sum;
}

}  // namespace qap::quadrature
