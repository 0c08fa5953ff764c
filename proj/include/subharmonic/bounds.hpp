#pragma once

#include <string>
#include <vector>

#include "subharmonic/params.hpp"

namespace subharmonic {

/// Coefficient c in the period-doubling bound beta < (c / tau_bar) sqrt(1 - 1/4Q^2).
inline constexpr double kPdCoefficient = 0.53;

/// sqrt(1 - 1/4Q^2) / Q; 0 for Q = infinity. OverdampedRegime for Q <= 1/2.
double contraction_bound(double q_tilde);

/// beta_tilde / kappa. NoDissipation when kappa = 0.
double invariant_disk_radius(const SymmetricFrame& frame);

/// exp(4 pi n beta_tilde / nu) - 1 < 2 cos(pi n delta_bar / nu).
/// DeltaBarOutOfRange unless |delta_bar| <= nu / 2n.
bool no_minusone_criterion(double beta_tilde, double nu_d_tilde, int n, double delta_bar);

/// True when [(1 - beta_tilde)/nu, (1 + beta_tilde)/nu] holds no integer multiple of 1/n.
bool subharmonic_exclusion(double beta_tilde, double nu_d_tilde, int n);

/// Dimensionless root x of 2x = ln(1 + 2 cos(x/2)), about 0.537.
double delta_bar_coefficient();

/// delta_bar = x nu / (2 pi n), where beta_tilde < delta_bar matches the
/// no-minus-one criterion at its edge.
double optimal_delta_bar(int n, double nu_d_tilde);

/// (0.53 / tau_bar) sqrt(1 - 1/4 q_min^2)
double pd_exclusion_bound(double tau_bar, double q_min);

/// (0.53 / tau_bar) sqrt(1 - (0.53 / 2 tau_bar)^2)
double combined_bound(double tau_bar);

struct RegularityReport {
  bool contracting = false;
  int pd_excluded_up_to = 0;  ///< largest n <= n_bar with beta below the bound at tau = 2 pi n / nu_d; 0 if none
  double invariant_radius = 0.0;  ///< infinity when kappa = 0
  double beta_bound_contraction = 0.0;
  double beta_bound_pd = 0.0;  ///< at tau_bar = 2 pi n_bar / nu_d
  double delta_bar_used = 0.0;
  double tau_bar = 0.0;
  bool subharmonic_excluded = false;  ///< subharmonic_exclusion at order n_bar
  std::vector<std::string> zones;
};

RegularityReport classify_point(const NormalizedModel& model, int n_bar);

}  // namespace subharmonic
