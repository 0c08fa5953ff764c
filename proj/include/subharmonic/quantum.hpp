#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "subharmonic/classical.hpp"
#include "subharmonic/params.hpp"

namespace subharmonic {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Ladder algebra without any minimum dimension (used by build_operators).
struct LadderMatrices {
  RMatrix a;  ///< annihilation, a|k> = sqrt(k)|k-1>
  RMatrix x;  ///< (a + a^dag)/sqrt(2)
  CMatrix p;  ///< i(a^dag - a)/sqrt(2)
};
LadderMatrices ladder_matrices(int dim);

struct FockOperators {
  int dim = 0;
  double lambda = 0.0;
  CMatrix x_op, p_op, a_op, number_op;
  CMatrix displacement_op;  ///< exp(i sqrt(2) lambda x)
  /// Eigen-decomposition of the truncated x: x = x_basis diag(x_nodes) x_basis^T.
  RMatrix x_basis;
  RVector x_nodes;
};

inline constexpr int kMinimumDimension = 16;

FockOperators build_operators(int dim, double lambda);

/// H(tau) = (N + 1/2) - beta/(2 lambda^2) cos(sqrt(2) lambda x + xi_d sin(nu_d tau)).
/// The quadratic part is taken as N + 1/2 exactly, so beta = 0 gives k + 1/2
/// for every retained level including the last.
CMatrix hamiltonian_at(double tau, const NormalizedModel& model, const FockOperators& ops);

struct PropagatorSettings {
  int steps_per_period = 256;  ///< initial value; doubled until converged
  int n_samples = 64;          ///< N_t, must divide steps_per_period and be a multiple of 4
  double convergence_tol = 1e-8;
  int max_doublings = 4;
  bool adaptive = true;        ///< false: single run at steps_per_period
};

struct Propagator {
  double period = 0.0;
  CMatrix U_total;                ///< U(T, 0)
  std::vector<CMatrix> U_partials;  ///< U(t_j, 0), t_j = j T / N_t, j = 0..N_t-1
  int steps_used = 0;
  double unitarity_defect = 0.0;   ///< on the lowest dim/2 columns
  double convergence_change = 0.0;  ///< ||U_2h - U_h||_F of the last doubling
  bool converged = false;
};

/// Propagates over one drive period with a fourth-order symmetric splitting
/// between N + 1/2 (diagonal in the Fock basis) and the cosine term
/// (diagonal in the x eigenbasis). Only [0, T/4] is integrated: the
/// reflection H(T/2 - t) = H(t) and the half-period relation
/// H(t + T/2) = Pi H(t) Pi give the rest exactly.
Propagator one_period_propagator(const NormalizedModel& model, const FockOperators& ops,
                                 const PropagatorSettings& settings = {});

/// Direct stepping over the whole period with the same splitting; reference
/// path for testing the symmetry-reduced propagator.
CMatrix one_period_propagator_direct(const NormalizedModel& model, const FockOperators& ops,
                                     int steps_per_period);

struct DecomposeSettings {
  int sampled_modes = 60;  ///< modes (lowest mean photon number) kept with time samples
  double degeneracy_tol = 1e-10;
};

struct FloquetDecomposition {
  double nu_d = 0.0;
  int dim = 0;
  int n_samples = 0;
  /// Every mode, sorted by time-averaged mean photon number (ascending).
  RVector quasienergies;
  RVector mean_photons;
  /// +1 / -1: eigenvalue of the half-period parity map on the mode.
  std::vector<int> parity_sign;
  /// modes[j].col(r) = |phi_r(t_j)> for the first sampled_modes modes.
  std::vector<CMatrix> modes;
  bool convergence_flag = false;
  int degenerate_pairs = 0;  ///< pairs of U(T) eigenvalues closer than degeneracy_tol

  int retained() const { return modes.empty() ? 0 : static_cast<int>(modes.front().cols()); }
  double period() const { return 2.0 * kPi / nu_d; }
  CVector mode_at(int r, int sample) const { return modes[sample].col(r); }
};

/// Folds a quasienergy into [-nu_d/2, nu_d/2).
double fold_quasienergy(double eps, double nu_d);

/// Distance of `diff` to the nearest multiple of `modulus`.
double folded_distance(double diff, double modulus);

FloquetDecomposition floquet_decompose(const CMatrix& U_total, const std::vector<CMatrix>& U_partials,
                                       double nu_d, const DecomposeSettings& settings = {});

inline FloquetDecomposition floquet_decompose(const Propagator& prop, double nu_d,
                                              const DecomposeSettings& settings = {}) {
  FloquetDecomposition d = floquet_decompose(prop.U_total, prop.U_partials, nu_d, settings);
  d.convergence_flag = prop.converged;
  return d;
}

// ---------------------------------------------------------------------------
// Cat states

struct CatStateSpec {
  cplx alpha0{0.0, 0.0};
  int n = 1;
  int m = 1;
  int r = 0;
  int k = 0;
  double tau = 0.0;
  double nu_d = 1.0;
};

/// Truncated coherent state (normalized after truncation).
CVector coherent_state(cplx alpha, int dim);

/// sum_l exp(2 i pi l k / L) |alpha0 exp(2 i pi l / L) exp(-i m nu_d tau / n)>, L = (1+r)n.
CVector cat_state(const CatStateSpec& spec, int dim);

struct CatFit {
  cplx alpha{0.0, 0.0};
  std::vector<int> modes;         ///< decomposition indices that were fitted
  std::vector<double> fidelities;  ///< best |<C_k|phi>|^2 per mode
  std::vector<int> cat_index;      ///< k achieving the best overlap
  double mean_fidelity = 0.0;
};

/// Fits alpha0 so the given modes (at t = 0) best match the cat family of
/// `label`. Fails with NoCatManifold when the mean fidelity is below 0.5 or
/// the legs are not separated (adjacent-leg distance below 2).
CatFit cat_fidelity(const FloquetDecomposition& decomp, const std::vector<int>& modes,
                    const ResonanceLabel& label);

/// Confinement gap: for each cat mode psi_k, the retained mode eta outside
/// the manifold with the largest period-averaged |<psi_k|a|eta>|^2 (the
/// states that relax into psi_k); returns the smallest quasienergy distance
/// folded modulo nu_d / n.
double quasienergy_gap(const FloquetDecomposition& decomp, const std::vector<int>& cat_modes,
                       const ResonanceLabel& label, const FockOperators& ops);

// ---------------------------------------------------------------------------
// Parity partner

struct PartnerResult {
  std::vector<CVector> samples;
  OrbitSymmetry symmetry = OrbitSymmetry::Symmetric;
  double overlap = 0.0;  ///< |<phi|S phi>| averaged over samples
};

/// S phi(t) = Pi phi(t + T/2) on uniformly sampled periodic modes.
PartnerResult parity_partner(const std::vector<CVector>& samples);

/// Time samples of retained mode r.
std::vector<CVector> mode_samples(const FloquetDecomposition& decomp, int r);

// ---------------------------------------------------------------------------
// Phase space

struct GridSpec {
  double x_min = -5.0, x_max = 5.0;
  double p_min = -5.0, p_max = 5.0;
  int nx = 101, np = 101;
};

/// values(i, j) at x_i, p_j; alpha = (x + i p)/sqrt(2).
struct PhaseSpaceGrid {
  GridSpec spec;
  RMatrix values;

  double x_at(int i) const;
  double p_at(int j) const;
  /// Riemann sum over d^2 alpha = dx dp / 2.
  double integral() const;
};

PhaseSpaceGrid husimi_q(const CMatrix& rho, const GridSpec& spec);
PhaseSpaceGrid husimi_q(const CVector& state, const GridSpec& spec);
PhaseSpaceGrid wigner(const CMatrix& rho, const GridSpec& spec);
PhaseSpaceGrid wigner(const CVector& state, const GridSpec& spec);

/// (2/pi) Tr[rho D(alpha) Pi D(-alpha)] for one point via Clenshaw summation.
double wigner_at(const CMatrix& rho, cplx alpha);

}  // namespace subharmonic
