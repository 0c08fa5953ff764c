#include "subharmonic/bounds.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "subharmonic/errors.hpp"

namespace subharmonic {

double contraction_bound(double q_tilde) {
  if (std::isnan(q_tilde) || q_tilde <= 0.5) fail(ErrorCode::OverdampedRegime, "q_tilde must exceed 1/2");
  if (std::isinf(q_tilde)) return 0.0;
  return std::sqrt(1.0 - 1.0 / (4.0 * q_tilde * q_tilde)) / q_tilde;
}

double invariant_disk_radius(const SymmetricFrame& frame) {
  if (!(frame.kappa > 0.0)) fail(ErrorCode::NoDissipation, "no invariant disk without dissipation (kappa = 0)");
  return frame.beta_tilde / frame.kappa;
}

bool no_minusone_criterion(double beta_tilde, double nu_d_tilde, int n, double delta_bar) {
  if (n < 1 || !(nu_d_tilde > 0.0)) fail(ErrorCode::InvalidArgument, "need n >= 1 and nu_d_tilde > 0");
  const double limit = nu_d_tilde / (2.0 * n);
  if (!(std::abs(delta_bar) <= limit)) {
    std::ostringstream msg;
    msg << "|delta_bar| = " << std::abs(delta_bar) << " exceeds nu_d_tilde / 2n = " << limit;
    fail(ErrorCode::DeltaBarOutOfRange, msg.str());
  }
  const double lhs = std::expm1(4.0 * kPi * n * beta_tilde / nu_d_tilde);
  const double rhs = 2.0 * std::cos(kPi * n * delta_bar / nu_d_tilde);
  return lhs < rhs;
}

bool subharmonic_exclusion(double beta_tilde, double nu_d_tilde, int n) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "subharmonic order must be >= 2");
  if (!(nu_d_tilde > 0.0) || !(beta_tilde >= 0.0)) fail(ErrorCode::InvalidArgument, "need nu_d_tilde > 0, beta_tilde >= 0");
  const double lo = n * (1.0 - beta_tilde) / nu_d_tilde;
  const double hi = n * (1.0 + beta_tilde) / nu_d_tilde;
  return std::ceil(lo) > hi;
}

double delta_bar_coefficient() {
  auto f = [](double x) { return 2.0 * x - std::log1p(2.0 * std::cos(0.5 * x)); };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 100;
  double lo = 0.0, hi = 2.0;
  if (!(f(lo) < 0.0 && f(hi) > 0.0)) fail(ErrorCode::NoRoot, "delta_bar equation is not bracketed");
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  if (iters >= 100) fail(ErrorCode::NoRoot, "delta_bar root finder did not converge");
  return 0.5 * (r.first + r.second);
}

double optimal_delta_bar(int n, double nu_d_tilde) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "n must be >= 2");
  if (!(nu_d_tilde > 0.0)) fail(ErrorCode::InvalidArgument, "nu_d_tilde must be > 0");
  return delta_bar_coefficient() * nu_d_tilde / (2.0 * kPi * n);
}

double pd_exclusion_bound(double tau_bar, double q_min) {
  if (!(tau_bar > 0.0)) fail(ErrorCode::InvalidArgument, "tau_bar must be > 0");
  if (std::isnan(q_min) || q_min <= 0.5) fail(ErrorCode::OverdampedRegime, "q_min must exceed 1/2");
  const double shrink = std::isinf(q_min) ? 1.0 : 1.0 - 1.0 / (4.0 * q_min * q_min);
  return kPdCoefficient / tau_bar * std::sqrt(shrink);
}

double combined_bound(double tau_bar) {
  if (!(tau_bar > 0.0)) fail(ErrorCode::InvalidArgument, "tau_bar must be > 0");
  const double c = kPdCoefficient / tau_bar;
  if (c >= 2.0) fail(ErrorCode::InvalidArgument, "tau_bar too small for the combined bound");
  return c * std::sqrt(1.0 - 0.25 * c * c);
}

RegularityReport classify_point(const NormalizedModel& model, int n_bar) {
  validate(model);
  if (n_bar < 2) fail(ErrorCode::InvalidArgument, "n_bar must be >= 2");
  RegularityReport rep;
  const double beta = model.beta;
  rep.beta_bound_contraction = contraction_bound(model.q_tilde);
  rep.contracting = beta == 0.0 || beta < rep.beta_bound_contraction;

  const SymmetricFrame frame = to_symmetric_frame(model);
  rep.invariant_radius = frame.kappa > 0.0 ? invariant_disk_radius(frame) : kInfinity;

  rep.tau_bar = 2.0 * kPi * n_bar / model.nu_d;
  rep.beta_bound_pd = pd_exclusion_bound(rep.tau_bar, model.q_tilde);
  for (int n = 2; n <= n_bar; ++n)
    if (beta < pd_exclusion_bound(2.0 * kPi * n / model.nu_d, model.q_tilde)) rep.pd_excluded_up_to = n;
  rep.delta_bar_used = optimal_delta_bar(n_bar, frame.nu_d_tilde);
  rep.subharmonic_excluded = subharmonic_exclusion(frame.beta_tilde, frame.nu_d_tilde, n_bar);

  if (rep.contracting) rep.zones.emplace_back("contracting");
  if (rep.pd_excluded_up_to == n_bar) rep.zones.emplace_back("no_period_doubling");
  if (rep.subharmonic_excluded) rep.zones.emplace_back("no_subharmonic");
  if (rep.zones.empty()) rep.zones.emplace_back("unguaranteed");
  return rep;
}

}  // namespace subharmonic
