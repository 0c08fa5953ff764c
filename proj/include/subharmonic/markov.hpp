#pragma once

#include <vector>

#include "subharmonic/quantum.hpp"

namespace subharmonic {

struct BathSpec {
  double j_const = 1.0;  ///< constant spectral density J
  double t_bath = 0.0;   ///< k_B T / (hbar omega_0); 0 means a cold bath
  int m_max = 5;         ///< largest Brillouin-zone difference kept
};

/// Bose-Einstein occupation at dimensionless frequency w; 0 for a cold bath.
double thermal_occupation(double w, double t_bath);

struct TransitionElements {
  int m_max = 0;
  int modes = 0;
  /// harmonics[m + m_max](r, l) = P_{r l m}
  std::vector<CMatrix> harmonics;

  cplx at(int r, int l, int m) const { return harmonics[m + m_max](r, l); }
};

/// P_{rlm} from i<phi_r(t)|a - a^dag|phi_l(t)> = sum_m P_{rlm} exp(i m nu_d t),
/// sampled at the decomposition times and projected by a discrete Fourier sum.
/// Requires N_t >= 4 m_max (InsufficientSampling otherwise).
TransitionElements transition_elements(const FloquetDecomposition& decomp, int m_max);

/// L_{rl}: rate into mode r out of mode l. A harmonic that lowers the energy
/// by Delta = eps_l - eps_r + m nu_d > 0 is weighted by |P_{r,l,-m}|^2, the
/// component oscillating as exp(-i m nu_d t).
RMatrix golden_rule_rates(const TransitionElements& elems, const FloquetDecomposition& decomp,
                          const BathSpec& bath);

/// R_{rl} = L_{rl} for r != l and R_{ll} = -sum_{m != l} L_{ml}; columns sum to zero.
RMatrix rate_matrix(const RMatrix& L);

/// d rho_rl / dt = rate(r, l) rho_rl for r != l.
RMatrix coherence_decay_rates(const RMatrix& L);

enum class KernelStatus { Unique, Inconclusive };
const char* to_string(KernelStatus s);

struct SteadyStateSettings {
  double kernel_tol = 1e-10;      ///< smallest singular value / ||R||
  double degeneracy_tol = 1e-6;   ///< second-smallest singular value / ||R||
};

struct SteadyState {
  RVector probabilities;
  double entropy = 0.0;
  double n_occ = 1.0;
  KernelStatus status = KernelStatus::Unique;
  double kernel_gap = 0.0;  ///< second-smallest singular value of R
};

SteadyState steady_state(const RMatrix& R, const SteadyStateSettings& settings = {});

/// Entropy and effective count for a probability vector (0 ln 0 = 0).
double shannon_entropy(const RVector& p);

/// Populations after time t of dp/dt = R p (adaptive Runge-Kutta).
RVector evolve_populations(const RMatrix& R, const RVector& p0, double t);

/// rho_inf(tau) = sum_r p_r |phi_r(tau)><phi_r(tau)| at the nearest sample.
CMatrix asymptotic_state(const SteadyState& steady, const FloquetDecomposition& decomp, double tau);

/// Indices of the `count` most populated modes, most populated first.
std::vector<int> dominant_modes(const SteadyState& steady, int count);

/// The (1+r)n modes forming the most populated group of equal mean photon
/// number (within 10%), searched among the 3(1+r)n most populated modes.
/// Returns an empty list when no such group exists.
std::vector<int> cat_manifold_modes(const SteadyState& steady, const FloquetDecomposition& decomp,
                                    const ResonanceLabel& label);

}  // namespace subharmonic
