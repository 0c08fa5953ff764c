#include "subharmonic/bessel.hpp"

#include <algorithm>
#include <cmath>

#include "subharmonic/errors.hpp"

namespace subharmonic {

namespace {

constexpr double kRescaleAbove = 1e250;

// Values for x >= 0.
std::vector<double> miller(int n_max, double x) {
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  // Start well above both the requested order and the turning point.
  const double top = std::max<double>(n_max, x);
  int start = static_cast<int>(top + 30.0 + std::sqrt(160.0 * top));
  start += start % 2;  // even start keeps the normalization sum aligned

  double next = 0.0;  // J_{k+1}
  double cur = 1e-300;  // J_k, arbitrary seed
  double norm = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = 2.0 * k / x * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    if (k - 1 <= n_max) out[k - 1] = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
    if (std::abs(cur) > kRescaleAbove) {
      cur /= kRescaleAbove;
      next /= kRescaleAbove;
      norm /= kRescaleAbove;
      for (int j = k - 1; j <= n_max; ++j) out[j] /= kRescaleAbove;
    }
  }
  norm += cur;  // J_0 term
  for (double& v : out) v /= norm;
  return out;
}

}  // namespace

std::vector<double> bessel_j_sequence(int n_max, double x) {
  if (n_max < 0) fail(ErrorCode::InvalidArgument, "bessel order must be >= 0");
  if (!std::isfinite(x)) fail(ErrorCode::InvalidArgument, "bessel argument must be finite");
  std::vector<double> out = miller(n_max, std::abs(x));
  if (x < 0.0)
    for (int k = 1; k <= n_max; k += 2) out[k] = -out[k];
  return out;
}

double bessel_j(int order, double x) {
  const int a = std::abs(order);
  const double v = bessel_j_sequence(a, x)[a];
  return (order < 0 && (a % 2 == 1)) ? -v : v;
}

BesselTable::BesselTable(int n_max, double x)
    : n_max_(n_max), x_(x), values_(bessel_j_sequence(n_max, x)) {}

double BesselTable::at(int order) const {
  const int a = std::abs(order);
  if (a > n_max_) return 0.0;
  const double v = values_[a];
  return (order < 0 && (a % 2 == 1)) ? -v : v;
}

}  // namespace subharmonic
