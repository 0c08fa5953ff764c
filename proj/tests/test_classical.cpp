#include <doctest.h>

#include <cmath>
#include <random>

#include "subharmonic/averaging.hpp"
#include "subharmonic/classical.hpp"
#include "subharmonic/errors.hpp"

using namespace subharmonic;

namespace {

ClassicalSystem make_system(double beta_tilde, double kappa, double xi_d, double nu) {
  return {beta_tilde, kappa, xi_d, nu};
}

}  // namespace

TEST_CASE("free flow is a clockwise rotation") {
  const ClassicalSystem sys = make_system(0.0, 0.0, 0.0, 1.0);
  const State2 full = flow({1.0, 0.0}, 0.0, 2.0 * kPi, sys);
  CHECK(full.x == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(full.p) < 1e-9);
  const State2 quarter = flow({1.0, 0.0}, 0.0, kPi / 2.0, sys);
  CHECK(std::abs(quarter.x) < 1e-9);
  CHECK(quarter.p == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("Poincare map of the linear system is an explicit spiral") {
  const State2 img = poincare({1.0, 0.0}, make_system(0.0, 0.0, 0.0, 4.0));
  CHECK(std::abs(img.x) < 1e-10);
  CHECK(img.p == doctest::Approx(-1.0).epsilon(1e-10));
  const double kappa = 0.07, nu = 2.6;
  const ClassicalSystem sys = make_system(0.0, kappa, 0.0, nu);
  const State2 z{0.4, -0.9};
  const State2 w = poincare(z, sys);
  const double T = 2.0 * kPi / nu, decay = std::exp(-kappa * T);
  CHECK(w.x == doctest::Approx(decay * (std::cos(T) * z.x + std::sin(T) * z.p)).epsilon(1e-10));
  CHECK(w.p == doctest::Approx(decay * (-std::sin(T) * z.x + std::cos(T) * z.p)).epsilon(1e-10));
}

TEST_CASE("flow converges under tolerance refinement") {
  const ClassicalSystem sys = make_system(0.5, 0.0, 0.0, 1.0);
  const State2 a = flow({0.1, 0.0}, 0.0, 2.0 * kPi, sys);
  IntegratorSettings tight;
  tight.abs_tol = tight.rel_tol = 1e-11;
  const State2 b = flow({0.1, 0.0}, 0.0, 2.0 * kPi, sys, tight);
  CHECK(norm(a - b) <= 1e-8);
}

TEST_CASE("variational flow satisfies the determinant law") {
  const ClassicalSystem sys = make_system(0.9, 0.05, 1.2, 3.0);
  const VariationalState id = variational_flow({0.3, 0.2}, 1.0, 1.0, sys);
  CHECK((id.tangent - Eigen::Matrix2d::Identity()).norm() == 0.0);
  const VariationalState v = variational_flow({0.3, 0.2}, 0.0, sys.period(), sys);
  CHECK(v.tangent.determinant() == doctest::Approx(std::exp(-4.0 * kPi * 0.05 / 3.0)).epsilon(1e-8));
  CHECK(v.tangent.determinant() == doctest::Approx(0.81104).epsilon(1e-5));
  const ClassicalSystem ham = make_system(1.3, 0.0, 2.0, 2.2);
  CHECK(variational_flow({1.0, -0.5}, 0.0, ham.period(), ham).tangent.determinant() ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("half-period sign flip maps solutions to solutions") {
  const ClassicalSystem sys = make_system(0.8, 0.03, 1.5, 2.4);
  const double half = 0.5 * sys.period();
  const State2 z{0.7, -0.2};
  // (x, p)(s) solves the system iff -(x, p)(s + T/2) does.
  const State2 direct = flow(z, 0.0, 3.0, sys);
  const State2 shifted = flow({-z.x, -z.p}, half, half + 3.0, sys);
  CHECK(std::abs(direct.x + shifted.x) <= 1e-8);
  CHECK(std::abs(direct.p + shifted.p) <= 1e-8);
}

TEST_CASE("invariant disk: radius decreases at its boundary") {
  const double bt = 0.5, kappa = 0.05;
  const ClassicalSystem sys = make_system(bt, kappa, 1.7, 3.0);
  const double r0 = 1.01 * bt / kappa;
  for (int k = 0; k < 16; ++k) {
    const double a = 2.0 * kPi * k / 16;
    const State2 z{r0 * std::cos(a), r0 * std::sin(a)};
    const State2 w = flow(z, 0.0, 1e-3, sys);
    CHECK(norm(w) < r0);
  }
}

TEST_CASE("linear system: origin is the harmonic orbit") {
  const ClassicalSystem sys = make_system(0.0, 0.1, 0.0, 2.0);
  const PeriodicOrbit o = find_periodic_orbit({0.3, 0.3}, 1, sys);
  CHECK(norm(o.points.front()) <= 1e-9);
  const std::complex<double> expected = std::exp(std::complex<double>(-0.1, 1.0) * sys.period());
  const bool match = std::abs(o.multipliers[0] - expected) < 1e-7 || std::abs(o.multipliers[1] - expected) < 1e-7;
  CHECK(match);
}

TEST_CASE("(3:1) orbit seeded from the averaged equilibrium") {
  const double nu = 3.2985;
  const ClassicalSystem sys = make_system(0.5, 0.0, 1.7, nu);
  AveragedModel av;
  av.label = make_resonance(3, 1);
  av.beta_tilde = 0.5;
  av.xi_d = 1.7;
  const std::vector<Equilibrium> eq = equilibria_at_detuning(detuning(av.label, nu), av);
  const Equilibrium* node = nullptr;
  for (const Equilibrium& e : eq)
    if (e.stability == EquilibriumType::Node && (!node || e.r_star < node->r_star)) node = &e;
  REQUIRE(node != nullptr);
  // At s = 0 the rotating frame coincides with (x, p): u = x, v = p.
  const State2 guess{node->r_star * std::sin(node->theta_star), node->r_star * std::cos(node->theta_star)};
  const PeriodicOrbit orbit = find_periodic_orbit(guess, 3, sys);
  CHECK(orbit.n == 3);
  CHECK(orbit.residual <= 1e-9);
  CHECK(orbit.winding_m == 1);
  CHECK(orbit.symmetry == OrbitSymmetry::Symmetric);
  CHECK(std::abs(orbit.multipliers[0] * orbit.multipliers[1] - 1.0) <= 1e-6);
}

TEST_CASE("(2:1) orbits come in half-period partner pairs") {
  const ClassicalSystem sys = make_system(0.5, 0.0, 3.3, 1.96);
  AveragedModel av;
  av.label = make_resonance(2, 1);
  av.beta_tilde = 0.5;
  av.xi_d = 3.3;
  const std::vector<Equilibrium> eq = equilibria_at_detuning(detuning(av.label, 1.96), av);
  const Equilibrium* node = nullptr;
  for (const Equilibrium& e : eq)
    if (e.stability == EquilibriumType::Node) node = &e;
  REQUIRE(node != nullptr);
  const State2 guess{node->r_star * std::sin(node->theta_star), node->r_star * std::cos(node->theta_star)};
  const PeriodicOrbit orbit = find_periodic_orbit(guess, 2, sys);
  CHECK(orbit.residual <= 1e-9);
  CHECK(orbit.winding_m == 1);
  CHECK(orbit.symmetry == OrbitSymmetry::PairedPartner);
  const std::vector<State2> partner = partner_points(orbit, sys);
  REQUIRE(partner.size() == 2);
  // The partner is a different 2-orbit.
  CHECK(std::min(norm(partner[0] - orbit.points[0]), norm(partner[0] - orbit.points[1])) > 1e-3);
  const State2 back = poincare_n(partner[0], 2, sys);
  CHECK(norm(back - partner[0]) <= 1e-7);
}

TEST_CASE("Lyapunov exponent of the damped linear spiral is -kappa") {
  const ClassicalSystem sys = make_system(0.0, 0.04, 0.0, 2.0);
  CHECK(lyapunov_exponent({1.0, 0.0}, 200, sys) == doctest::Approx(-0.04).epsilon(1e-3 / 0.04));
}

TEST_CASE("phase portrait: fixed point seeds stay put and output is ordered") {
  const ClassicalSystem sys = make_system(0.0, 0.1, 0.0, 2.0);
  LyapunovSettings lyap;
  lyap.min_periods = 100;
  const std::vector<PortraitOrbit> p = phase_portrait({{0.0, 0.0}, {0.5, 0.0}}, 20, sys, lyap, {}, 2);
  REQUIRE(p.size() == 2);
  for (const State2& z : p[0].iterates) CHECK(norm(z) <= 1e-8);
  CHECK(p[1].seed.x == 0.5);
  CHECK(p[1].classification == OrbitClass::Regular);
}

TEST_CASE("determinant law on random parameter draws") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> kappa(0.0, 0.1), beta(0.0, 1.5), xi(0.0, 4.0), nu(1.0, 4.0), z(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const ClassicalSystem sys = make_system(beta(rng), kappa(rng), xi(rng), nu(rng));
    const VariationalState v = variational_flow({z(rng), z(rng)}, 0.0, sys.period(), sys);
    const double expected = std::exp(-4.0 * kPi * sys.kappa / sys.nu_d_tilde);
    CHECK(std::abs(v.tangent.determinant() - expected) <= 1e-6 * expected);
  }
}
