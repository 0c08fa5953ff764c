#include "subharmonic/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <gsl/gsl_multimin.h>

#include "subharmonic/errors.hpp"

namespace subharmonic {

LadderMatrices ladder_matrices(int dim) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "dimension must be positive");
  LadderMatrices l;
  l.a = RMatrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) l.a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const RMatrix ad = l.a.transpose();
  l.x = (l.a + ad) / std::sqrt(2.0);
  l.p = cplx(0.0, 1.0) * (ad - l.a).cast<cplx>() / std::sqrt(2.0);
  return l;
}

FockOperators build_operators(int dim, double lambda) {
  if (dim < kMinimumDimension) {
    std::ostringstream msg;
    msg << "dimension " << dim << " is below the minimum " << kMinimumDimension;
    fail(ErrorCode::DimensionTooSmall, msg.str());
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    fail(ErrorCode::InvalidArgument, "lambda must be finite and >= 0");

  const LadderMatrices l = ladder_matrices(dim);
  FockOperators ops;
  ops.dim = dim;
  ops.lambda = lambda;
  ops.a_op = l.a.cast<cplx>();
  ops.x_op = l.x.cast<cplx>();
  ops.p_op = l.p;
  ops.number_op = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) ops.number_op(k, k) = k;

  Eigen::SelfAdjointEigenSolver<RMatrix> eig(l.x);
  ops.x_basis = eig.eigenvectors();
  ops.x_nodes = eig.eigenvalues();
  const double scale = std::sqrt(2.0) * lambda;
  CVector phases(dim);
  for (int j = 0; j < dim; ++j) phases(j) = std::polar(1.0, scale * ops.x_nodes(j));
  const CMatrix w = ops.x_basis.cast<cplx>();
  ops.displacement_op = w * phases.asDiagonal() * w.transpose();
  return ops;
}

namespace {

double potential_scale(const NormalizedModel& model, const FockOperators& ops) {
  if (!(ops.lambda > 0.0)) fail(ErrorCode::InvalidArgument, "lambda must be > 0");
  if (std::abs(ops.lambda - model.lambda) > 1e-12 * std::max(1.0, model.lambda))
    fail(ErrorCode::InvalidArgument, "operators were built for a different lambda");
  return model.beta / (2.0 * ops.lambda * ops.lambda);
}

// cos(sqrt(2) lambda x_j + drive phase) on the x eigenbasis nodes.
RVector cosine_nodes(double phase, const FockOperators& ops) {
  const double scale = std::sqrt(2.0) * ops.lambda;
  RVector c(ops.dim);
  for (int j = 0; j < ops.dim; ++j) c(j) = std::cos(scale * ops.x_nodes(j) + phase);
  return c;
}

}  // namespace

CMatrix hamiltonian_at(double tau, const NormalizedModel& model, const FockOperators& ops) {
  const double c = potential_scale(model, ops);
  const double phase = model.xi_d * std::sin(model.nu_d * tau);
  const RMatrix& w = ops.x_basis;
  RMatrix h = -c * (w * cosine_nodes(phase, ops).asDiagonal() * w.transpose());
  for (int k = 0; k < ops.dim; ++k) h(k, k) += k + 0.5;
  h = 0.5 * (h + h.transpose()).eval();
  return h.cast<cplx>();
}

namespace {

// Propagator stored as separate real and imaginary parts so every basis
// change is a pair of real GEMMs.
struct SplitState {
  RMatrix re, im;
  CMatrix complex() const {
    CMatrix u(re.rows(), re.cols());
    u.real() = re;
    u.imag() = im;
    return u;
  }
};

class SplitStepper {
 public:
  SplitStepper(const NormalizedModel& model, const FockOperators& ops)
      : model_(model), ops_(ops), coupling_(potential_scale(model, ops)),
        wt_(ops.x_basis.transpose()) {}

  void set_identity(SplitState& u) const {
    u.re = RMatrix::Identity(ops_.dim, ops_.dim);
    u.im = RMatrix::Zero(ops_.dim, ops_.dim);
  }

  // Fourth-order step [t, t + h] built from five symmetric second-order stages.
  void step(SplitState& u, double t, double h) {
    static const double p = 1.0 / (4.0 - std::cbrt(4.0));
    const double weights[5] = {p, p, 1.0 - 4.0 * p, p, p};
    double s = t;
    for (double w : weights) {
      const double hs = w * h;
      pending_free_ += 0.5 * hs;
      flush(u);
      kick(u, s + 0.5 * hs, hs);
      pending_free_ += 0.5 * hs;
      s += hs;
    }
  }

  void flush(SplitState& u) {
    if (pending_free_ == 0.0) return;
    RVector c(ops_.dim), sn(ops_.dim);
    for (int k = 0; k < ops_.dim; ++k) {
      c(k) = std::cos((k + 0.5) * pending_free_);
      sn(k) = -std::sin((k + 0.5) * pending_free_);
    }
    rotate(u.re, u.im, c, sn);
    pending_free_ = 0.0;
  }

 private:
  // Row k of (re + i im) times (c_k + i s_k).
  static void rotate(RMatrix& re, RMatrix& im, const RVector& c, const RVector& sn) {
    const RMatrix r = re;
    re = (r.array().colwise() * c.array() - im.array().colwise() * sn.array()).matrix();
    im = (r.array().colwise() * sn.array() + im.array().colwise() * c.array()).matrix();
  }

  void kick(SplitState& u, double t_mid, double h) {
    const double phase = model_.xi_d * std::sin(model_.nu_d * t_mid);
    const RVector cs = cosine_nodes(phase, ops_);
    yr_.noalias() = wt_ * u.re;
    yi_.noalias() = wt_ * u.im;
    RVector c(ops_.dim), sn(ops_.dim);
    for (int j = 0; j < ops_.dim; ++j) {
      c(j) = std::cos(coupling_ * h * cs(j));
      sn(j) = std::sin(coupling_ * h * cs(j));
    }
    rotate(yr_, yi_, c, sn);
    u.re.noalias() = ops_.x_basis * yr_;
    u.im.noalias() = ops_.x_basis * yi_;
  }

  const NormalizedModel& model_;
  const FockOperators& ops_;
  double coupling_;
  RMatrix wt_;
  RMatrix yr_, yi_;
  double pending_free_ = 0.0;
};

RVector parity_signs(int dim) {
  RVector s(dim);
  for (int k = 0; k < dim; ++k) s(k) = (k % 2 == 0) ? 1.0 : -1.0;
  return s;
}

// Pi X Pi for diagonal Pi = diag((-1)^k).
CMatrix conjugate_by_parity(const CMatrix& x) {
  const RVector s = parity_signs(static_cast<int>(x.rows()));
  return s.asDiagonal() * x * s.asDiagonal();
}

double unitarity_defect(const CMatrix& u) {
  const int half = std::max<int>(1, static_cast<int>(u.cols()) / 2);
  const CMatrix block = u.leftCols(half);
  const CMatrix gram = block.adjoint() * block;
  return (gram - CMatrix::Identity(half, half)).cwiseAbs().maxCoeff();
}

void check_sampling(const PropagatorSettings& s) {
  if (s.n_samples < 4 || s.n_samples % 4 != 0)
    fail(ErrorCode::InvalidArgument, "n_samples must be a positive multiple of 4");
  if (s.steps_per_period < s.n_samples || s.steps_per_period % s.n_samples != 0)
    fail(ErrorCode::InvalidArgument, "steps_per_period must be a multiple of n_samples");
  if (!(s.convergence_tol > 0.0)) fail(ErrorCode::InvalidArgument, "convergence_tol must be > 0");
}

// Samples t_j = j T / N_t for j = 0..N_t/4, integrated directly.
std::vector<CMatrix> quarter_samples(const NormalizedModel& model, const FockOperators& ops,
                                     int steps_per_period, int n_samples) {
  const double period = model.period();
  const double h = period / steps_per_period;
  const int per_sample = steps_per_period / n_samples;
  SplitStepper stepper(model, ops);
  SplitState u;
  stepper.set_identity(u);
  std::vector<CMatrix> out;
  out.reserve(n_samples / 4 + 1);
  out.push_back(u.complex());
  long step = 0;
  for (int j = 1; j <= n_samples / 4; ++j) {
    for (int k = 0; k < per_sample; ++k, ++step) stepper.step(u, step * h, h);
    stepper.flush(u);
    out.push_back(u.complex());
  }
  return out;
}

Propagator assemble(const std::vector<CMatrix>& quarter, int n_samples, double period) {
  const int q = n_samples / 4;
  const CMatrix& a = quarter[q];
  const CMatrix half = a.transpose() * a;
  Propagator prop;
  prop.period = period;
  prop.U_partials.resize(n_samples);
  for (int j = 0; j <= q; ++j) prop.U_partials[j] = quarter[j];
  for (int j = q + 1; j <= 2 * q; ++j) prop.U_partials[j] = quarter[2 * q - j].conjugate() * half;
  for (int j = 2 * q + 1; j < n_samples; ++j)
    prop.U_partials[j] = conjugate_by_parity(prop.U_partials[j - 2 * q]) * half;
  prop.U_total = conjugate_by_parity(half) * half;
  prop.unitarity_defect = unitarity_defect(prop.U_total);
  return prop;
}

}  // namespace

Propagator one_period_propagator(const NormalizedModel& model, const FockOperators& ops,
                                 const PropagatorSettings& settings) {
  validate(model);
  check_sampling(settings);
  int steps = settings.steps_per_period;
  Propagator prop = assemble(quarter_samples(model, ops, steps, settings.n_samples),
                             settings.n_samples, model.period());
  prop.steps_used = steps;
  const int half = std::max(1, ops.dim / 2);
  if (settings.adaptive) {
    for (int d = 0; d < settings.max_doublings; ++d) {
      steps *= 2;
      Propagator finer = assemble(quarter_samples(model, ops, steps, settings.n_samples),
                                  settings.n_samples, model.period());
      finer.steps_used = steps;
      finer.convergence_change =
          (finer.U_total.leftCols(half) - prop.U_total.leftCols(half)).norm();
      prop = std::move(finer);
      if (prop.convergence_change <= settings.convergence_tol) {
        prop.converged = true;
        break;
      }
    }
  } else {
    prop.converged = true;
  }
  if (prop.unitarity_defect > 1e-6) {
    std::ostringstream msg;
    msg << "unitarity defect " << prop.unitarity_defect << " on the lowest " << half << " columns";
    fail(ErrorCode::UnitarityLoss, msg.str());
  }
  return prop;
}

CMatrix one_period_propagator_direct(const NormalizedModel& model, const FockOperators& ops,
                                     int steps_per_period) {
  validate(model);
  if (steps_per_period < 1) fail(ErrorCode::InvalidArgument, "steps_per_period must be positive");
  const double h = model.period() / steps_per_period;
  SplitStepper stepper(model, ops);
  SplitState u;
  stepper.set_identity(u);
  for (int k = 0; k < steps_per_period; ++k) stepper.step(u, k * h, h);
  stepper.flush(u);
  return u.complex();
}

double fold_quasienergy(double eps, double nu_d) {
  double f = eps - nu_d * std::floor(eps / nu_d + 0.5);
  if (f >= 0.5 * nu_d) f -= nu_d;
  if (f < -0.5 * nu_d) f += nu_d;
  return f;
}

double folded_distance(double diff, double modulus) {
  const double f = diff - modulus * std::round(diff / modulus);
  return std::abs(f);
}

namespace {

constexpr double kClusterTol = 1e-9;

void fix_gauge(CVector& v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  const cplx c = v(idx);
  if (std::abs(c) > 0.0) v *= std::conj(c) / std::abs(c);
}

}  // namespace

FloquetDecomposition floquet_decompose(const CMatrix& U_total, const std::vector<CMatrix>& U_partials,
                                       double nu_d, const DecomposeSettings& settings) {
  if (!(nu_d > 0.0)) fail(ErrorCode::InvalidArgument, "nu_d must be positive");
  const int dim = static_cast<int>(U_total.rows());
  if (dim < 1 || U_total.cols() != dim) fail(ErrorCode::InvalidArgument, "U_total must be square");
  if (U_partials.empty()) fail(ErrorCode::InvalidArgument, "U_partials must hold the t = 0 sample");
  const int n_samples = static_cast<int>(U_partials.size());
  const double period = 2.0 * kPi / nu_d;

  // The half-period map M = Pi U(T/2) squares to U(T) and commutes with it;
  // its eigenvectors fix the basis inside pairs degenerate under U(T).
  bool use_half = false;
  CMatrix map;
  if (n_samples % 2 == 0) {
    const RVector s = parity_signs(dim);
    map = s.asDiagonal() * U_partials[n_samples / 2];
    const double mismatch = (map * map - U_total).norm();
    use_half = mismatch <= 1e-8 * std::sqrt(static_cast<double>(dim));
  }
  if (!use_half) map = U_total;

  Eigen::ComplexSchur<CMatrix> schur(map);
  if (schur.info() != Eigen::Success) fail(ErrorCode::NoConvergence, "Schur decomposition failed");
  const CMatrix& vecs = schur.matrixU();
  const CVector mu = schur.matrixT().diagonal();

  RVector eps(dim);
  std::vector<int> sign(dim, 0);
  CVector floquet_eigs(dim);
  for (int r = 0; r < dim; ++r) {
    const cplx lam = use_half ? mu(r) * mu(r) : mu(r);
    floquet_eigs(r) = lam;
    eps(r) = fold_quasienergy(-std::arg(lam) * nu_d / (2.0 * kPi), nu_d);
    if (use_half) {
      const cplx s = mu(r) * std::polar(1.0, eps(r) * period / 2.0);
      sign[r] = s.real() >= 0.0 ? 1 : -1;
    }
  }

  // Inside clusters of equal eigenvalues the Schur basis is arbitrary; fix it
  // by diagonalizing the time-averaged photon number on the cluster.
  CMatrix basis = vecs;
  RVector number(dim);
  for (int k = 0; k < dim; ++k) number(k) = k;
  std::vector<int> by_angle(dim);
  std::iota(by_angle.begin(), by_angle.end(), 0);
  std::sort(by_angle.begin(), by_angle.end(),
            [&](int a, int b) { return std::arg(mu(a)) < std::arg(mu(b)); });
  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < dim; ++i) {
    const int r = by_angle[i];
    if (!clusters.empty() && std::abs(mu(r) - mu(clusters.back().back())) < kClusterTol)
      clusters.back().push_back(r);
    else
      clusters.push_back({r});
  }
  if (clusters.size() > 1 && std::abs(mu(clusters.front().front()) - mu(clusters.back().back())) < kClusterTol) {
    clusters.back().insert(clusters.back().end(), clusters.front().begin(), clusters.front().end());
    clusters.erase(clusters.begin());
  }
  for (const auto& c : clusters) {
    if (c.size() < 2) continue;
    const int sz = static_cast<int>(c.size());
    CMatrix v(dim, sz);
    for (int i = 0; i < sz; ++i) v.col(i) = basis.col(c[i]);
    CMatrix avg = CMatrix::Zero(sz, sz);
    for (int j = 0; j < n_samples; ++j) {
      const CMatrix y = U_partials[j] * v;
      avg += y.adjoint() * number.asDiagonal() * y;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (avg + avg.adjoint()));
    const CMatrix rotated = v * eig.eigenvectors();
    for (int i = 0; i < sz; ++i) basis.col(c[i]) = rotated.col(i);
  }

  for (int r = 0; r < dim; ++r) {
    CVector v = basis.col(r);
    fix_gauge(v);
    basis.col(r) = v;
  }

  // Time-averaged photon number of every mode.
  RVector photons = RVector::Zero(dim);
  for (int j = 0; j < n_samples; ++j) {
    const CMatrix y = U_partials[j] * basis;
    photons += (number.transpose() * y.cwiseAbs2()).transpose();
  }
  photons /= n_samples;

  std::vector<int> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (photons(a) != photons(b)) return photons(a) < photons(b);
    return eps(a) < eps(b);
  });

  FloquetDecomposition d;
  d.nu_d = nu_d;
  d.dim = dim;
  d.n_samples = n_samples;
  d.quasienergies.resize(dim);
  d.mean_photons.resize(dim);
  d.parity_sign.resize(dim);
  for (int i = 0; i < dim; ++i) {
    d.quasienergies(i) = eps(order[i]);
    d.mean_photons(i) = photons(order[i]);
    d.parity_sign[i] = sign[order[i]];
  }

  const int keep = std::clamp(settings.sampled_modes, 1, dim);
  CMatrix kept(dim, keep);
  for (int i = 0; i < keep; ++i) kept.col(i) = basis.col(order[i]);
  d.modes.resize(n_samples);
  for (int j = 0; j < n_samples; ++j) {
    const double t = j * period / n_samples;
    d.modes[j].noalias() = U_partials[j] * kept;
    for (int i = 0; i < keep; ++i)
      d.modes[j].col(i) *= std::polar(1.0, d.quasienergies(i) * t);
  }

  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b)
      if (std::abs(floquet_eigs(a) - floquet_eigs(b)) < settings.degeneracy_tol) ++d.degenerate_pairs;
  return d;
}

CVector coherent_state(cplx alpha, int dim) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "dimension must be positive");
  CVector v(dim);
  v(0) = 1.0;
  for (int k = 1; k < dim; ++k) v(k) = v(k - 1) * alpha / std::sqrt(static_cast<double>(k));
  return v / v.norm();
}

namespace {

void check_truncation(cplx alpha, int dim) {
  const double r = std::abs(alpha);
  if (!(r * r + 6.0 * r < dim)) {
    std::ostringstream msg;
    msg << "|alpha0| = " << r << " is not truncation safe for dimension " << dim;
    fail(ErrorCode::TruncationUnsafe, msg.str());
  }
}

// Unnormalized sum_l w^{lk} |alpha w^l>, w = exp(2 i pi / L).
CVector cat_superposition(cplx alpha, int legs, int k, int dim) {
  CVector out = CVector::Zero(dim);
  for (int l = 0; l < legs; ++l) {
    const double angle = 2.0 * kPi * l / legs;
    out += std::polar(1.0, angle * k) * coherent_state(alpha * std::polar(1.0, angle), dim);
  }
  return out;
}

}  // namespace

CVector cat_state(const CatStateSpec& spec, int dim) {
  if (spec.n < 1 || spec.r < 0 || spec.r > 1)
    fail(ErrorCode::InvalidArgument, "cat state needs n >= 1 and r in {0, 1}");
  const int legs = (1 + spec.r) * spec.n;
  if (std::abs(spec.k) >= legs) fail(ErrorCode::InvalidArgument, "cat index k must satisfy |k| < (1+r)n");
  check_truncation(spec.alpha0, dim);
  const cplx rotation = std::polar(1.0, -spec.m * spec.nu_d * spec.tau / spec.n);
  CVector v = cat_superposition(spec.alpha0 * rotation, legs, spec.k, dim);
  const double nrm = v.norm();
  if (!(nrm > 1e-150) || !std::isfinite(nrm))
    fail(ErrorCode::InvalidArgument, "cat state normalization vanishes");
  return v / nrm;
}

namespace {

struct FitProblem {
  std::vector<CVector> states;
  int legs = 1;
  int dim = 0;

  // Best overlap per state and the maximizing cat index.
  void overlaps(cplx alpha, std::vector<double>& best, std::vector<int>& index) const {
    best.assign(states.size(), 0.0);
    index.assign(states.size(), 0);
    for (int k = 0; k < legs; ++k) {
      const CVector c = cat_superposition(alpha, legs, k, dim);
      const double nrm = c.norm();
      if (!(nrm > 1e-150)) continue;
      for (std::size_t s = 0; s < states.size(); ++s) {
        const double f = std::norm(c.dot(states[s])) / (nrm * nrm);
        if (f > best[s]) {
          best[s] = f;
          index[s] = k;
        }
      }
    }
  }

  double objective(cplx alpha) const {
    if (std::abs(alpha) * std::abs(alpha) + 6.0 * std::abs(alpha) >= dim) return 0.0;
    std::vector<double> best;
    std::vector<int> index;
    overlaps(alpha, best, index);
    return std::accumulate(best.begin(), best.end(), 0.0);
  }
};

double fit_cost(const gsl_vector* v, void* params) {
  const auto* p = static_cast<const FitProblem*>(params);
  return -p->objective({gsl_vector_get(v, 0), gsl_vector_get(v, 1)});
}

// Amplitude from <a^L> of the equal mixture; magnitude from <a^dag^L a^L>.
cplx initial_alpha(const std::vector<CVector>& states, int legs) {
  const int dim = static_cast<int>(states.front().size());
  cplx moment = 0.0;
  double norm_moment = 0.0;
  for (const CVector& s : states) {
    CVector v = s;
    for (int p = 0; p < legs; ++p) {
      CVector w = CVector::Zero(dim);
      for (int k = 0; k + 1 < dim; ++k) w(k) = std::sqrt(static_cast<double>(k + 1)) * v(k + 1);
      v = w;
    }
    moment += s.dot(v);
    norm_moment += v.squaredNorm();
  }
  moment /= static_cast<double>(states.size());
  norm_moment /= static_cast<double>(states.size());
  const double magnitude = std::pow(norm_moment, 0.5 / legs);
  const double phase = std::abs(moment) > 0.0 ? std::arg(moment) / legs : 0.0;
  return std::polar(magnitude, phase);
}

}  // namespace

CatFit cat_fidelity(const FloquetDecomposition& decomp, const std::vector<int>& modes,
                    const ResonanceLabel& label) {
  if (modes.empty()) fail(ErrorCode::InvalidArgument, "no candidate modes given");
  if (decomp.modes.empty()) fail(ErrorCode::InvalidArgument, "decomposition has no sampled modes");
  FitProblem prob;
  prob.legs = label.legs();
  prob.dim = decomp.dim;
  for (int r : modes) {
    if (r < 0 || r >= decomp.retained()) fail(ErrorCode::InvalidArgument, "mode index out of range");
    prob.states.push_back(decomp.mode_at(r, 0));
  }

  const cplx start = initial_alpha(prob.states, prob.legs);
  gsl_multimin_function fn{&fit_cost, 2, &prob};
  gsl_vector* x = gsl_vector_alloc(2);
  gsl_vector* step = gsl_vector_alloc(2);
  gsl_vector_set(x, 0, start.real());
  gsl_vector_set(x, 1, start.imag());
  gsl_vector_set_all(step, 0.1 * std::max(0.5, std::abs(start)));
  gsl_multimin_fminimizer* mm = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
  gsl_multimin_fminimizer_set(mm, &fn, x, step);
  for (int it = 0; it < 400; ++it) {
    if (gsl_multimin_fminimizer_iterate(mm) != 0) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(mm), 1e-9) == GSL_SUCCESS) break;
  }
  const cplx alpha(gsl_vector_get(mm->x, 0), gsl_vector_get(mm->x, 1));
  gsl_multimin_fminimizer_free(mm);
  gsl_vector_free(step);
  gsl_vector_free(x);

  CatFit fit;
  fit.alpha = alpha;
  fit.modes = modes;
  prob.overlaps(alpha, fit.fidelities, fit.cat_index);
  fit.mean_fidelity = std::accumulate(fit.fidelities.begin(), fit.fidelities.end(), 0.0) /
                      static_cast<double>(fit.fidelities.size());

  std::ostringstream msg;
  if (fit.mean_fidelity < 0.5) {
    msg << "mean cat fidelity " << fit.mean_fidelity << " is below 0.5";
    fail(ErrorCode::NoCatManifold, msg.str());
  }
  if (prob.legs > 1) {
    const double separation = std::abs(alpha) * std::abs(1.0 - std::polar(1.0, 2.0 * kPi / prob.legs));
    if (separation < 2.0) {
      msg << "cat legs are not separated (adjacent distance " << separation << ")";
      fail(ErrorCode::NoCatManifold, msg.str());
    }
  }
  return fit;
}

double quasienergy_gap(const FloquetDecomposition& decomp, const std::vector<int>& cat_modes,
                       const ResonanceLabel& label, const FockOperators& ops) {
  if (cat_modes.empty()) fail(ErrorCode::InvalidArgument, "cat manifold is empty");
  if (ops.dim != decomp.dim) fail(ErrorCode::InvalidArgument, "operators do not match the decomposition");
  const int kept = decomp.retained();
  for (int r : cat_modes)
    if (r < 0 || r >= kept) fail(ErrorCode::InvalidArgument, "cat mode index out of range");
  if (static_cast<int>(cat_modes.size()) >= kept)
    fail(ErrorCode::InvalidArgument, "no retained modes outside the cat manifold");

  // coupling(c, e) = mean_j |<psi_c(t_j)| a |eta_e(t_j)>|^2
  const int nc = static_cast<int>(cat_modes.size());
  RMatrix coupling = RMatrix::Zero(nc, kept);
  for (int j = 0; j < decomp.n_samples; ++j) {
    const CMatrix& m = decomp.modes[j];
    CMatrix lowered = CMatrix::Zero(decomp.dim, kept);
    for (int k = 0; k + 1 < decomp.dim; ++k)
      lowered.row(k) = std::sqrt(static_cast<double>(k + 1)) * m.row(k + 1);
    CMatrix cats(decomp.dim, nc);
    for (int c = 0; c < nc; ++c) cats.col(c) = m.col(cat_modes[c]);
    coupling += (cats.adjoint() * lowered).cwiseAbs2();
  }

  const double modulus = decomp.nu_d / label.n;
  double gap = kInfinity;
  for (int c = 0; c < nc; ++c) {
    int best = -1;
    for (int e = 0; e < kept; ++e) {
      if (std::find(cat_modes.begin(), cat_modes.end(), e) != cat_modes.end()) continue;
      if (best < 0 || coupling(c, e) > coupling(c, best)) best = e;
    }
    const double diff = decomp.quasienergies(best) - decomp.quasienergies(cat_modes[c]);
    gap = std::min(gap, folded_distance(diff, modulus));
  }
  return gap;
}

PartnerResult parity_partner(const std::vector<CVector>& samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 2 || n % 2 != 0) fail(ErrorCode::InvalidArgument, "parity partner needs an even number of samples");
  const int dim = static_cast<int>(samples.front().size());
  const RVector s = parity_signs(dim);
  PartnerResult out;
  out.samples.resize(n);
  cplx total = 0.0;
  double weight = 0.0;
  double overlap = 0.0;
  for (int j = 0; j < n; ++j) {
    out.samples[j] = s.asDiagonal() * samples[(j + n / 2) % n];
    const cplx o = samples[j].dot(out.samples[j]);
    total += o;
    weight += samples[j].squaredNorm();
    overlap += std::abs(o);
  }
  out.overlap = overlap / n;
  const cplx phase = std::abs(total) > 0.0 ? total / std::abs(total) : cplx(1.0);
  double mismatch = 0.0;
  for (int j = 0; j < n; ++j)
    mismatch = std::max(mismatch, (out.samples[j] - phase * samples[j]).norm());
  const double scale = std::sqrt(weight / n);
  out.symmetry = mismatch <= 1e-6 * std::max(1.0, scale) ? OrbitSymmetry::Symmetric
                                                          : OrbitSymmetry::PairedPartner;
  return out;
}

std::vector<CVector> mode_samples(const FloquetDecomposition& decomp, int r) {
  if (r < 0 || r >= decomp.retained()) fail(ErrorCode::InvalidArgument, "mode index out of range");
  std::vector<CVector> out(decomp.n_samples);
  for (int j = 0; j < decomp.n_samples; ++j) out[j] = decomp.modes[j].col(r);
  return out;
}

}  // namespace subharmonic
