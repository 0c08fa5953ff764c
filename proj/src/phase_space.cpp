#include <algorithm>
#include <cmath>

#include "subharmonic/errors.hpp"
#include "subharmonic/quantum.hpp"

namespace subharmonic {

double PhaseSpaceGrid::x_at(int i) const {
  return spec.nx == 1 ? spec.x_min : spec.x_min + (spec.x_max - spec.x_min) * i / (spec.nx - 1);
}

double PhaseSpaceGrid::p_at(int j) const {
  return spec.np == 1 ? spec.p_min : spec.p_min + (spec.p_max - spec.p_min) * j / (spec.np - 1);
}

double PhaseSpaceGrid::integral() const {
  if (spec.nx < 2 || spec.np < 2) return 0.0;
  const double dx = (spec.x_max - spec.x_min) / (spec.nx - 1);
  const double dp = (spec.p_max - spec.p_min) / (spec.np - 1);
  return values.sum() * dx * dp / 2.0;
}

namespace {

void check_grid(const GridSpec& g) {
  if (g.nx < 1 || g.np < 1) fail(ErrorCode::InvalidArgument, "grid resolution must be positive");
  if (!(g.x_max >= g.x_min) || !(g.p_max >= g.p_min))
    fail(ErrorCode::InvalidArgument, "grid ranges must be ordered");
}

void check_density(const CMatrix& rho) {
  if (rho.rows() < 1 || rho.rows() != rho.cols())
    fail(ErrorCode::InvalidArgument, "density matrix must be square and non-empty");
}

std::vector<cplx> grid_points(const PhaseSpaceGrid& g) {
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(g.spec.nx) * g.spec.np);
  for (int j = 0; j < g.spec.np; ++j)
    for (int i = 0; i < g.spec.nx; ++i) pts.emplace_back(g.x_at(i), g.p_at(j));
  for (cplx& a : pts) a /= std::sqrt(2.0);
  return pts;
}

// Columns are the Fock amplitudes of |alpha> without renormalization.
CMatrix coherent_columns(const std::vector<cplx>& alphas, std::size_t begin, std::size_t end, int dim) {
  CMatrix c(dim, static_cast<Eigen::Index>(end - begin));
  for (std::size_t q = begin; q < end; ++q) {
    const cplx a = alphas[q];
    const auto col = static_cast<Eigen::Index>(q - begin);
    c(0, col) = std::exp(-0.5 * std::norm(a));
    for (int k = 1; k < dim; ++k) c(k, col) = c(k - 1, col) * a / std::sqrt(static_cast<double>(k));
  }
  return c;
}

// Clenshaw sum for sum_k c_k L_k^{order}(x) with orthonormal scaling.
Eigen::ArrayXcd laguerre_series(int order, const Eigen::ArrayXd& x, const CVector& c) {
  const Eigen::Index n = c.size();
  const Eigen::Index pts = x.size();
  Eigen::ArrayXcd y0, y1;
  if (n == 1) {
    y0 = Eigen::ArrayXcd::Constant(pts, c(0));
    y1 = Eigen::ArrayXcd::Zero(pts);
  } else if (n == 2) {
    y0 = Eigen::ArrayXcd::Constant(pts, c(0));
    y1 = Eigen::ArrayXcd::Constant(pts, c(1));
  } else {
    double k = static_cast<double>(n);
    y0 = Eigen::ArrayXcd::Constant(pts, c(n - 2));
    y1 = Eigen::ArrayXcd::Constant(pts, c(n - 1));
    for (Eigen::Index i = 3; i <= n; ++i) {
      k -= 1.0;
      const double a = std::sqrt((k - 1.0) * (order + k - 1.0) / ((order + k) * k));
      const double b = 1.0 / std::sqrt((order + k) * k);
      const Eigen::ArrayXcd next0 = c(n - i) - y1 * a;
      y1 = y0 - y1 * ((order + 2.0 * k - 1.0) - x) * b;
      y0 = next0;
    }
  }
  return y0 - y1 * ((order + 1.0) - x) / std::sqrt(order + 1.0);
}

// Displaced-parity Wigner function for a batch of points; W(0) = 2/pi for vacuum.
Eigen::ArrayXd wigner_points(const CMatrix& rho, const std::vector<cplx>& alphas) {
  const int dim = static_cast<int>(rho.rows());
  const Eigen::Index pts = static_cast<Eigen::Index>(alphas.size());
  Eigen::ArrayXcd a2(pts);
  for (Eigen::Index q = 0; q < pts; ++q) a2(q) = 2.0 * alphas[q];
  const Eigen::ArrayXd b = a2.abs2();
  CMatrix weighted = 2.0 * rho;
  weighted.diagonal() = rho.diagonal();
  Eigen::ArrayXcd w = Eigen::ArrayXcd::Zero(pts);
  for (int order = dim - 1; order >= 0; --order) {
    const CVector diag = weighted.diagonal(order);
    w = laguerre_series(order, b, diag) + w * a2 / std::sqrt(order + 1.0);
  }
  return 2.0 * w.real() * (-0.5 * b).exp() / kPi;
}

PhaseSpaceGrid shape(const std::vector<double>& flat, const GridSpec& spec) {
  PhaseSpaceGrid g;
  g.spec = spec;
  g.values.resize(spec.nx, spec.np);
  for (int j = 0; j < spec.np; ++j)
    for (int i = 0; i < spec.nx; ++i) g.values(i, j) = flat[static_cast<std::size_t>(j) * spec.nx + i];
  return g;
}

}  // namespace

PhaseSpaceGrid husimi_q(const CMatrix& rho, const GridSpec& spec) {
  check_grid(spec);
  check_density(rho);
  PhaseSpaceGrid g;
  g.spec = spec;
  const std::vector<cplx> alphas = grid_points(g);
  const int dim = static_cast<int>(rho.rows());
  std::vector<double> flat(alphas.size());
  constexpr std::size_t kBlock = 2048;
  for (std::size_t begin = 0; begin < alphas.size(); begin += kBlock) {
    const std::size_t end = std::min(alphas.size(), begin + kBlock);
    const CMatrix c = coherent_columns(alphas, begin, end, dim);
    const CMatrix rc = rho * c;
    for (std::size_t q = begin; q < end; ++q) {
      const auto col = static_cast<Eigen::Index>(q - begin);
      flat[q] = c.col(col).dot(rc.col(col)).real() / kPi;
    }
  }
  return shape(flat, spec);
}

PhaseSpaceGrid husimi_q(const CVector& state, const GridSpec& spec) {
  check_grid(spec);
  PhaseSpaceGrid g;
  g.spec = spec;
  const std::vector<cplx> alphas = grid_points(g);
  const int dim = static_cast<int>(state.size());
  std::vector<double> flat(alphas.size());
  constexpr std::size_t kBlock = 2048;
  for (std::size_t begin = 0; begin < alphas.size(); begin += kBlock) {
    const std::size_t end = std::min(alphas.size(), begin + kBlock);
    const CMatrix c = coherent_columns(alphas, begin, end, dim);
    const CVector overlaps = c.adjoint() * state;
    for (std::size_t q = begin; q < end; ++q)
      flat[q] = std::norm(overlaps(static_cast<Eigen::Index>(q - begin))) / kPi;
  }
  return shape(flat, spec);
}

PhaseSpaceGrid wigner(const CMatrix& rho, const GridSpec& spec) {
  check_grid(spec);
  check_density(rho);
  PhaseSpaceGrid g;
  g.spec = spec;
  const std::vector<cplx> alphas = grid_points(g);
  const Eigen::ArrayXd w = wigner_points(rho, alphas);
  return shape(std::vector<double>(w.data(), w.data() + w.size()), spec);
}

PhaseSpaceGrid wigner(const CVector& state, const GridSpec& spec) {
  return wigner(CMatrix(state * state.adjoint()), spec);
}

double wigner_at(const CMatrix& rho, cplx alpha) {
  check_density(rho);
  return wigner_points(rho, {alpha})(0);
}

}  // namespace subharmonic
