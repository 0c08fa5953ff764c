#include <doctest.h>

#include <cmath>

#include "soundness.hpp"
#include "subharmonic/bounds.hpp"
#include "subharmonic/errors.hpp"

using namespace subharmonic;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("contraction bound") {
  CHECK(contraction_bound(1.0) == doctest::Approx(std::sqrt(3.0) / 2.0));
  CHECK(contraction_bound(kInfinity) == 0.0);
  CHECK(contraction_bound(1e8) < 1e-7);
  CHECK(contraction_bound(10.0) == doctest::Approx(0.0999).epsilon(1e-3));
  CHECK(code_of([] { contraction_bound(0.5); }) == ErrorCode::OverdampedRegime);
}

TEST_CASE("invariant disk") {
  SymmetricFrame f;
  f.beta_tilde = 0.5;
  f.kappa = 0.05;
  CHECK(invariant_disk_radius(f) == doctest::Approx(10.0));
  f.kappa = 0.0;
  CHECK(code_of([&] { invariant_disk_radius(f); }) == ErrorCode::NoDissipation);
  // Just outside the disk the radius shrinks at every drive phase.
  f.kappa = 0.05;
  f.xi_d = 1.3;
  f.nu_d_tilde = 2.1;
  const ClassicalSystem sys = ClassicalSystem::from_frame(f);
  const double r = 1.01 * invariant_disk_radius(f);
  for (int k = 0; k < 16; ++k) {
    const double a = 2.0 * kPi * k / 16;
    const double x = r * std::cos(a);
    const double p = r * std::sin(a);
    for (double s : {0.0, 0.7, 2.2}) {
      const double dx = p - sys.kappa * x;
      const double dp = -x - sys.kappa * p - sys.beta_tilde * std::sin(x + sys.xi_d * std::sin(sys.nu_d_tilde * s));
      CHECK(x * dx + p * dp < 0.0);
    }
  }
}

TEST_CASE("no-minus-one criterion") {
  CHECK(no_minusone_criterion(0.0, 3.0, 3, 0.4));
  CHECK_FALSE(no_minusone_criterion(1e-9, 3.0, 3, 0.5));
  const double lhs = std::expm1(0.02 * 4.0 * kPi * 3.0 / 3.0);
  const double rhs = 2.0 * std::cos(0.2 * kPi);
  CHECK(no_minusone_criterion(0.02, 3.0, 3, 0.2) == (lhs < rhs));
  CHECK(no_minusone_criterion(0.02, 3.0, 3, 0.2));
  CHECK(code_of([] { no_minusone_criterion(0.01, 3.0, 3, 0.51); }) == ErrorCode::DeltaBarOutOfRange);
}

TEST_CASE("subharmonic exclusion") {
  CHECK_FALSE(subharmonic_exclusion(0.01, 3.0, 3));
  CHECK_FALSE(subharmonic_exclusion(0.01, 3.0 / 2.0, 3));
  CHECK(subharmonic_exclusion(0.01, 2.8, 3));
  CHECK(subharmonic_exclusion(0.0, 3.0 / std::sqrt(2.0) * 2.0, 3));
  CHECK_FALSE(subharmonic_exclusion(0.5, 2.8, 3));
}

TEST_CASE("delta-bar matching constant") {
  const double c = delta_bar_coefficient();
  CHECK(2.0 * c == doctest::Approx(std::log1p(2.0 * std::cos(c / 2.0))).epsilon(1e-12));
  CHECK(c == doctest::Approx(0.537208).epsilon(1e-6));
  for (int n : {2, 3, 5}) {
    for (double nu : {0.7, 3.0, 4.4}) {
      const double d = optimal_delta_bar(n, nu);
      CHECK(std::abs(d * 2.0 * kPi * n / nu - 0.537) <= 0.002);
      CHECK(optimal_delta_bar(n, 2.5 * nu) == doctest::Approx(2.5 * d).epsilon(1e-12));
      // At the optimum both bounds on beta_tilde coincide.
      CHECK(no_minusone_criterion(0.999 * d, nu, n, d));
      CHECK_FALSE(no_minusone_criterion(1.001 * d, nu, n, d));
    }
  }
  CHECK(optimal_delta_bar(3, 3.0) == doctest::Approx(0.0855).epsilon(1e-3));
}

TEST_CASE("period-doubling and combined bounds") {
  CHECK(pd_exclusion_bound(2.0 * kPi, kInfinity) == doctest::Approx(0.08435).epsilon(1e-4));
  CHECK(combined_bound(2.0 * kPi) == doctest::Approx(0.08427).epsilon(2e-4));
  CHECK(pd_exclusion_bound(20.0 * kPi, kInfinity) < pd_exclusion_bound(2.0 * kPi, kInfinity));
  CHECK(pd_exclusion_bound(2.0 * kPi, 3.0) < pd_exclusion_bound(2.0 * kPi, 30.0));
  CHECK(pd_exclusion_bound(1e9, kInfinity) < 1e-9);
  // The combined bound lies inside the contraction zone at 1/Q = 0.53 / tau_bar.
  for (double tau : {2.0, 6.0, 20.0}) {
    const double q = tau / kPdCoefficient;
    CHECK(combined_bound(tau) <= contraction_bound(q) + 1e-15);
    CHECK(combined_bound(tau) == doctest::Approx(pd_exclusion_bound(tau, q)));
  }
}

TEST_CASE("point classification") {
  NormalizedModel m;
  m.beta = 0.05;
  m.q_tilde = 5.0;
  m.nu_d = 3.0;
  m.xi_d = 1.0;
  CHECK(classify_point(m, 3).contracting);
  m.beta = 0.5;
  m.q_tilde = kInfinity;
  const RegularityReport strong = classify_point(m, 3);
  CHECK_FALSE(strong.contracting);
  CHECK(strong.pd_excluded_up_to == 0);
  CHECK(strong.beta_bound_pd < 0.5);
  CHECK(std::isinf(strong.invariant_radius));
  CHECK(strong.zones == std::vector<std::string>{"unguaranteed"});
  m.beta = 0.0;
  const RegularityReport free = classify_point(m, 3);
  CHECK(free.contracting);
  CHECK(free.pd_excluded_up_to == 3);
}

TEST_CASE("bounds hold against the classical flow") {
  const soundness::Summary pd = soundness::check_no_minusone(15, 101);
  CHECK(pd.violations == 0);
  CHECK(pd.worst > 1e-3);
  const soundness::Summary c = soundness::check_contraction(15, 102);
  CHECK(c.violations == 0);
  const soundness::Summary sub = soundness::check_subharmonic_exclusion(6, 15, 103);
  CHECK(sub.violations == 0);
}
