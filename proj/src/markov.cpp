#include "subharmonic/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>
#include <boost/numeric/odeint.hpp>

#include "subharmonic/errors.hpp"

namespace subharmonic {

double thermal_occupation(double w, double t_bath) {
  if (!(t_bath > 0.0) || !(w > 0.0)) return 0.0;
  return 1.0 / std::expm1(w / t_bath);
}

TransitionElements transition_elements(const FloquetDecomposition& decomp, int m_max) {
  if (m_max < 1) fail(ErrorCode::InvalidArgument, "m_max must be >= 1");
  if (decomp.n_samples < 4 * m_max) {
    std::ostringstream msg;
    msg << "N_t = " << decomp.n_samples << " samples cannot resolve harmonics up to m_max = " << m_max
        << " (need N_t >= " << 4 * m_max << ")";
    fail(ErrorCode::InsufficientSampling, msg.str());
  }
  const int kept = decomp.retained();
  const int dim = decomp.dim;
  TransitionElements out;
  out.m_max = m_max;
  out.modes = kept;
  out.harmonics.assign(2 * m_max + 1, CMatrix::Zero(kept, kept));
  const int n = decomp.n_samples;
  for (int j = 0; j < n; ++j) {
    const CMatrix& phi = decomp.modes[j];
    // i(a - a^dag) phi, using the ladder structure directly.
    CMatrix op_phi = CMatrix::Zero(dim, kept);
    for (int k = 0; k < dim; ++k) {
      if (k + 1 < dim) op_phi.row(k) += std::sqrt(static_cast<double>(k + 1)) * phi.row(k + 1);
      if (k > 0) op_phi.row(k) -= std::sqrt(static_cast<double>(k)) * phi.row(k - 1);
    }
    const CMatrix x = cplx(0.0, 1.0) * (phi.adjoint() * op_phi);
    for (int m = -m_max; m <= m_max; ++m) {
      const cplx w = std::polar(1.0 / n, -2.0 * kPi * m * j / n);
      out.harmonics[m + m_max] += w * x;
    }
  }
  return out;
}

RMatrix golden_rule_rates(const TransitionElements& elems, const FloquetDecomposition& decomp,
                          const BathSpec& bath) {
  if (!(bath.j_const > 0.0)) fail(ErrorCode::InvalidArgument, "bath spectral density must be > 0");
  if (!(bath.t_bath >= 0.0)) fail(ErrorCode::InvalidArgument, "bath temperature must be >= 0");
  if (elems.modes != decomp.retained())
    fail(ErrorCode::InvalidArgument, "transition elements do not match the decomposition");
  const int kept = elems.modes;
  const int mm = elems.m_max;
  const RVector& eps = decomp.quasienergies;

  auto delta = [&](int r, int l, int m) { return eps(l) - eps(r) + m * decomp.nu_d; };
  auto gamma = [&](int r, int l, int m) {
    const double d = delta(r, l, m);
    if (!(d > 0.0) || std::abs(-m) > mm) return 0.0;
    return 2.0 * kPi * bath.j_const * std::norm(elems.at(r, l, -m));
  };

  RMatrix L = RMatrix::Zero(kept, kept);
  for (int r = 0; r < kept; ++r) {
    for (int l = 0; l < kept; ++l) {
      double sum = 0.0;
      for (int m = -mm; m <= mm; ++m) {
        const double d = delta(r, l, m);
        if (d == 0.0) continue;
        const double g = gamma(r, l, m);
        const double nth = thermal_occupation(std::abs(d), bath.t_bath);
        sum += g + (nth > 0.0 ? nth * (g + gamma(l, r, -m)) : 0.0);
      }
      L(r, l) = sum;
    }
  }
  return L;
}

RMatrix rate_matrix(const RMatrix& L) {
  if (L.rows() != L.cols()) fail(ErrorCode::InvalidArgument, "rate matrix must be square");
  if ((L.array() < 0.0).any()) fail(ErrorCode::InvalidArgument, "rates must be non-negative");
  RMatrix R = L;
  for (Eigen::Index l = 0; l < L.cols(); ++l) {
    R(l, l) = 0.0;
    R(l, l) = -R.col(l).sum();
  }
  return R;
}

RMatrix coherence_decay_rates(const RMatrix& L) {
  const RVector out_rates = L.colwise().sum().transpose();
  RMatrix g(L.rows(), L.cols());
  for (Eigen::Index r = 0; r < L.rows(); ++r)
    for (Eigen::Index l = 0; l < L.cols(); ++l) g(r, l) = -0.5 * (out_rates(r) + out_rates(l));
  return g;
}

const char* to_string(KernelStatus s) {
  return s == KernelStatus::Unique ? "Unique" : "Inconclusive";
}

double shannon_entropy(const RVector& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > 0.0) s -= p(i) * std::log(p(i));
  return s;
}

SteadyState steady_state(const RMatrix& R, const SteadyStateSettings& settings) {
  const Eigen::Index n = R.rows();
  if (n < 1 || R.cols() != n) fail(ErrorCode::InvalidArgument, "rate matrix must be square and non-empty");
  SteadyState out;
  if (n == 1) {
    out.probabilities = RVector::Ones(1);
    return out;
  }
  Eigen::JacobiSVD<RMatrix> svd(R, Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  const double scale = sv(0);
  if (!(scale > 0.0)) {
    // No transitions at all: every distribution is stationary.
    out.status = KernelStatus::Inconclusive;
    out.probabilities = RVector::Constant(n, 1.0 / n);
    out.entropy = shannon_entropy(out.probabilities);
    out.n_occ = std::exp(out.entropy);
    return out;
  }
  if (sv(n - 1) > settings.kernel_tol * scale) {
    std::ostringstream msg;
    msg << "smallest singular value " << sv(n - 1) << " exceeds " << settings.kernel_tol << " ||R||";
    fail(ErrorCode::NoKernel, msg.str());
  }
  out.kernel_gap = sv(n - 2);
  out.status = sv(n - 2) < settings.degeneracy_tol * scale ? KernelStatus::Inconclusive
                                                           : KernelStatus::Unique;
  RVector p = svd.matrixV().col(n - 1);
  if (p.sum() < 0.0) p = -p;
  p = p.cwiseMax(0.0);
  const double total = p.sum();
  if (!(total > 0.0)) fail(ErrorCode::NoKernel, "kernel vector has no positive part");
  out.probabilities = p / total;
  out.entropy = shannon_entropy(out.probabilities);
  out.n_occ = std::exp(out.entropy);
  return out;
}

RVector evolve_populations(const RMatrix& R, const RVector& p0, double t) {
  namespace ode = boost::numeric::odeint;
  using State = std::vector<double>;
  if (R.rows() != p0.size()) fail(ErrorCode::InvalidArgument, "population size mismatch");
  State y(p0.data(), p0.data() + p0.size());
  auto rhs = [&R](const State& x, State& dx, double) {
    Eigen::Map<const RVector> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<RVector> dv(dx.data(), static_cast<Eigen::Index>(dx.size()));
    dv.noalias() = R * xv;
  };
  ode::integrate_adaptive(ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<State>()), rhs, y,
                          0.0, t, 1e-3);
  return Eigen::Map<RVector>(y.data(), static_cast<Eigen::Index>(y.size()));
}

CMatrix asymptotic_state(const SteadyState& steady, const FloquetDecomposition& decomp, double tau) {
  const int kept = decomp.retained();
  if (steady.probabilities.size() != kept)
    fail(ErrorCode::InvalidArgument, "steady state does not match the decomposition");
  const double phase = tau / decomp.period() - std::floor(tau / decomp.period());
  const int j = static_cast<int>(std::lround(phase * decomp.n_samples)) % decomp.n_samples;
  const CMatrix& phi = decomp.modes[j];
  CMatrix rho = phi * steady.probabilities.cast<cplx>().asDiagonal() * phi.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho;
}

std::vector<int> dominant_modes(const SteadyState& steady, int count) {
  std::vector<int> idx(steady.probabilities.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return steady.probabilities(a) > steady.probabilities(b); });
  idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(std::max(count, 0))));
  return idx;
}

std::vector<int> cat_manifold_modes(const SteadyState& steady, const FloquetDecomposition& decomp,
                                    const ResonanceLabel& label) {
  const int legs = label.legs();
  const std::vector<int> top = dominant_modes(steady, 3 * legs);
  std::vector<int> best;
  double best_weight = -1.0;
  for (int c : top) {
    const double ref = decomp.mean_photons(c);
    std::vector<int> group;
    for (int r : top)
      if (std::abs(decomp.mean_photons(r) - ref) <= 0.1 * std::max(1.0, ref)) group.push_back(r);
    if (static_cast<int>(group.size()) < legs) continue;
    group.resize(legs);
    double weight = 0.0;
    for (int r : group) weight += steady.probabilities(r);
    if (weight > best_weight) {
      best_weight = weight;
      best = group;
    }
  }
  return best;
}

}  // namespace subharmonic
