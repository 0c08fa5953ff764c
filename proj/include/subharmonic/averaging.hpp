#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "subharmonic/params.hpp"

namespace subharmonic {

/// First-order averaged model of an (n:m) resonance in the rotating frame
/// (u, v) = (R sin theta, R cos theta):
///   dR/ds     = -kappa R + beta_tilde h(theta, R)
///   dtheta/ds = delta + beta_tilde g(theta, R) / R
struct AveragedModel {
  ResonanceLabel label;
  double beta_tilde = 0.0;
  double kappa = 0.0;
  double xi_d = 0.0;
  /// Highest Bessel order kept; 0 selects ceil(R + xi_d) + 20 per evaluation.
  int bessel_cutoff = 0;
};

struct GH {
  double g = 0.0;
  double h = 0.0;
};

/// g = sum_k cos(k L theta) J_{1+kL}(R) J_{-kM}(xi_d), h = -sum_k sin(k L theta) (same),
/// with L = (1+r)n and M = (1+r)m.
GH gh_series(double theta, double R, const AveragedModel& model);
double g_func(double theta, double R, const AveragedModel& model);
double h_func(double theta, double R, const AveragedModel& model);

/// The same averages by direct trapezoid quadrature over one slow period,
/// psi in [0, 2 pi): g = <sin(m psi + theta) sin zeta>, h = -<cos(m psi + theta) sin zeta>,
/// zeta = R sin(m psi + theta) + xi_d sin(n psi).
GH gh_quadrature(double theta, double R, const AveragedModel& model, double rel_tol = 1e-12);

struct Vec2 {
  double u = 0.0;
  double v = 0.0;
};

Vec2 averaged_vector_field(double u, double v, double delta, const AveragedModel& model);

/// dtheta/ds at (theta, R); for small R this tends to delta + (beta_tilde/2) J_0(xi_d).
double rotation_rate(double theta, double R, double delta, const AveragedModel& model);

struct RadiusRoot {
  double theta = 0.0;
  double delta = 0.0;
};

/// Angles in the fundamental sector [0, 2 pi / L) where dR/ds = 0 at radius
/// r_star, with the detuning that makes dtheta/ds vanish there.
std::vector<RadiusRoot> equilibria_at_radius(double r_star, const AveragedModel& model,
                                             int grid_points = 1440);

enum class EquilibriumType { Node, Saddle };
const char* to_string(EquilibriumType t);

struct Equilibrium {
  double theta_star = 0.0;
  double r_star = 0.0;
  double delta = 0.0;
  EquilibriumType stability = EquilibriumType::Node;
  std::array<std::complex<double>, 2> eigenvalues{};
  Eigen::Matrix2d jacobian = Eigen::Matrix2d::Zero();
};

/// Stability matrix of the Cartesian field. Its four averages are computed by
/// trapezoid quadrature, doubling from 64 points until the relative change is
/// at most 1e-9. With kappa = 0 a positive determinant is reported as Node
/// (a center); otherwise the sign of the real parts decides.
Equilibrium classify_stability(double theta_star, double r_star, double delta,
                               const AveragedModel& model);

struct BranchPoint {
  double r_star = 0.0;
  double theta_star = 0.0;
  double delta = 0.0;
  EquilibriumType stability = EquilibriumType::Node;
  int branch = 0;  ///< continuity label across the radius grid
};

struct BifurcationScan {
  std::vector<double> r_grid;
  std::vector<BranchPoint> branches;
  /// Extremes of delta over stable nodes; NaN when there are none.
  double delta_min = 0.0;
  double delta_max = 0.0;
  int marginal_points = 0;  ///< roots skipped because they sit at a bifurcation
};

BifurcationScan bifurcation_scan(const AveragedModel& model, const std::vector<double>& r_grid);

/// Radii where a branch changes between Node and Saddle (saddle-node points),
/// located between consecutive grid radii and ordered by radius.
std::vector<BranchPoint> saddle_node_points(const BifurcationScan& scan);

/// All equilibria with R > 0 in the fundamental sector at fixed detuning.
std::vector<Equilibrium> equilibria_at_detuning(double delta, const AveragedModel& model,
                                                int theta_cells = 240, int radius_cells = 400);

/// L N_nodes + [origin is a node] - L N_saddles over the full plane.
int index_balance(const std::vector<Equilibrium>& sector_equilibria, const AveragedModel& model,
                  double delta);

struct RegionRow {
  double xi_d = 0.0;
  double delta_min = 0.0;
  double delta_max = 0.0;
  double nu_d_min = 0.0;
  double nu_d_max = 0.0;
};

std::vector<RegionRow> resonance_region(const AveragedModel& model, const std::vector<double>& xi_grid,
                                        const std::vector<double>& r_grid);

/// (beta_tilde / 2)(J_0(xi_d) - 1)
double ac_stark(double xi_d, double beta_tilde);

/// (n/m)(1 + (beta/2) J_0(xi_d))
double resonant_drive_frequency(const ResonanceLabel& label, double beta, double xi_d);

/// Dissipation below which the resonance can appear at small drive:
/// beta_tilde xi_d^M / (2^{M-1} M!), M = (1+r)m.
double resonance_threshold_kappa(const ResonanceLabel& label, double beta_tilde, double xi_d);

/// alpha_l = i exp(-i(2 pi l / L + theta)) R / (2 lambda), l = 0..L-1.
std::vector<std::complex<double>> alpha_from_equilibrium(double theta_star, double r_star, double lambda,
                                                         const ResonanceLabel& label);

inline double mean_photons_from_radius(double r_star, double lambda) {
  return r_star * r_star / (4.0 * lambda * lambda);
}

}  // namespace subharmonic
