#include <doctest.h>

#include <cmath>
#include <random>

#include "subharmonic/averaging.hpp"
#include "subharmonic/bessel.hpp"

using namespace subharmonic;

namespace {

AveragedModel model_for(int n, int m, double beta_tilde, double kappa, double xi) {
  AveragedModel a;
  a.label = make_resonance(n, m);
  a.beta_tilde = beta_tilde;
  a.kappa = kappa;
  a.xi_d = xi;
  return a;
}

std::vector<double> radius_grid(double lo, double hi, int count) {
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(lo + (hi - lo) * i / (count - 1));
  return g;
}

}  // namespace

TEST_CASE("Bessel series matches direct quadrature") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto [n, m] : {std::pair{3, 1}, std::pair{2, 1}}) {
    for (int i = 0; i < 40; ++i) {
      const AveragedModel a = model_for(n, m, 0.5, 0.0, 6.0 * u(rng));
      const double theta = 2.0 * kPi * u(rng);
      const double R = 12.0 * u(rng);
      const GH s = gh_series(theta, R, a);
      const GH q = gh_quadrature(theta, R, a);
      CHECK(std::abs(s.g - q.g) <= 1e-8);
      CHECK(std::abs(s.h - q.h) <= 1e-8);
    }
  }
}

TEST_CASE("frozen averaged-model values") {
  const AveragedModel a = model_for(3, 1, 0.5, 0.0, 1.7);
  CHECK(g_func(0.7, 2.5, a) == doctest::Approx(0.09184596644193038).epsilon(1e-12));
  CHECK(h_func(0.7, 2.5, a) == doctest::Approx(0.2642411198515853).epsilon(1e-12));
}

TEST_CASE("undriven limit and rotational symmetry") {
  const AveragedModel still = model_for(3, 1, 0.5, 0.0, 0.0);
  for (double R : {0.3, 2.0, 7.5}) {
    CHECK(g_func(1.1, R, still) == doctest::Approx(bessel_j(1, R)).epsilon(1e-12));
    CHECK(std::abs(h_func(1.1, R, still)) <= 1e-14);
  }
  for (auto [n, m] : {std::pair{3, 1}, std::pair{2, 1}, std::pair{5, 2}}) {
    const AveragedModel a = model_for(n, m, 0.5, 0.0, 2.2);
    const double step = 2.0 * kPi / a.label.legs();
    for (double theta : {0.1, 0.9, 2.4}) {
      CHECK(std::abs(g_func(theta + step, 3.1, a) - g_func(theta, 3.1, a)) <= 1e-10);
      CHECK(std::abs(h_func(theta + step, 3.1, a) - h_func(theta, 3.1, a)) <= 1e-10);
    }
  }
}

TEST_CASE("rotation rate near the origin") {
  for (double xi = 0.0; xi <= 4.0; xi += 0.25) {
    const AveragedModel a = model_for(3, 1, 0.5, 1e-5, xi);
    for (double theta : {0.0, 0.8, 1.9}) {
      const double expected = -0.03 + 0.25 * bessel_j(0, xi);
      CHECK(std::abs(rotation_rate(theta, 1e-3, -0.03, a) - expected) <= 1e-4);
    }
  }
}

TEST_CASE("conservative equilibria sit on the symmetry axes") {
  const AveragedModel a = model_for(3, 1, 0.5, 0.0, 1.7);
  const std::vector<RadiusRoot> roots = equilibria_at_radius(2.0, a);
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0].theta) <= 1e-9);
  CHECK(roots[1].theta == doctest::Approx(kPi / 3.0).epsilon(1e-9));
  for (const RadiusRoot& r : roots) CHECK(std::abs(rotation_rate(r.theta, 2.0, r.delta, a)) <= 1e-10);
}

TEST_CASE("stability matrix trace equals -2 kappa") {
  const AveragedModel a = model_for(3, 1, 0.5, 0.02, 1.7);
  for (double R : {0.8, 1.5, 3.0}) {
    for (const RadiusRoot& root : equilibria_at_radius(R, a)) {
      const Equilibrium e = classify_stability(root.theta, R, root.delta, a);
      CHECK(e.jacobian.trace() == doctest::Approx(-0.04).epsilon(1e-6));
      if (e.stability == EquilibriumType::Saddle) CHECK(e.jacobian.determinant() < 0.0);
      const Vec2 f = averaged_vector_field(R * std::sin(root.theta), R * std::cos(root.theta), root.delta, a);
      CHECK(std::hypot(f.u, f.v) <= 1e-9);
    }
  }
}

TEST_CASE("saddle-node structure of the third-order resonance") {
  const AveragedModel a = model_for(3, 1, 0.5, 1e-5, 1.7);
  const BifurcationScan scan = bifurcation_scan(a, radius_grid(0.01, 6.0, 600));
  const std::vector<BranchPoint> sn = saddle_node_points(scan);
  REQUIRE(!sn.empty());
  CHECK(sn.front().r_star == doctest::Approx(1.065).epsilon(0.02));
  CHECK(sn.front().delta == doctest::Approx(-0.1201).epsilon(0.02));
  CHECK(scan.delta_min <= -0.1);
  CHECK(scan.delta_max >= 0.0);
  for (double delta : {-0.1, -0.05}) {
    const std::vector<Equilibrium> eq = equilibria_at_detuning(delta, a);
    CHECK(index_balance(eq, a, delta) == 1);
  }
}

TEST_CASE("closed forms") {
  CHECK(ac_stark(0.0, 0.5) == 0.0);
  CHECK(ac_stark(1.7, 0.5) == doctest::Approx(0.25 * (bessel_j(0, 1.7) - 1.0)));
  CHECK(resonant_drive_frequency(make_resonance(3, 1), 0.5, 1.7) == doctest::Approx(3.2985).epsilon(1e-4));
  CHECK(mean_photons_from_radius(3.0, 0.2) == doctest::Approx(56.25));
  CHECK(resonance_threshold_kappa(make_resonance(3, 1), 0.5, 1.2) == doctest::Approx(0.6));
  CHECK(resonance_threshold_kappa(make_resonance(2, 1), 0.5, 1.2) == doctest::Approx(0.5 * 1.44 / 4.0));
  const std::vector<std::complex<double>> legs = alpha_from_equilibrium(0.3, 2.0, 0.2, make_resonance(3, 1));
  REQUIRE(legs.size() == 3);
  for (const auto& l : legs) CHECK(std::abs(l) == doctest::Approx(5.0));
  CHECK(std::abs(legs[1] / legs[0] - std::polar(1.0, -2.0 * kPi / 3.0)) <= 1e-12);
}

TEST_CASE("resonance region tracks the small-amplitude rotation") {
  const AveragedModel a = model_for(3, 1, 0.5, 1e-5, 0.0);
  const std::vector<RegionRow> rows = resonance_region(a, {1.0, 1.7, 2.5}, radius_grid(0.01, 6.0, 300));
  REQUIRE(rows.size() == 3);
  for (const RegionRow& row : rows) {
    const double centre = -0.25 * bessel_j(0, row.xi_d);
    CHECK(row.delta_min <= centre + 1e-3);
    CHECK(row.delta_max >= centre - 1e-3);
    CHECK(row.nu_d_min <= row.nu_d_max);
  }
}
