#include <doctest.h>

#include <cmath>

#include "subharmonic/quantum.hpp"

using namespace subharmonic;

namespace {

GridSpec small_grid() {
  GridSpec g;
  g.x_min = -4.0;
  g.x_max = 4.0;
  g.p_min = -4.0;
  g.p_max = 4.0;
  g.nx = 33;
  g.np = 29;
  return g;
}

cplx alpha_at(const PhaseSpaceGrid& grid, int i, int j) {
  return cplx(grid.x_at(i), grid.p_at(j)) / std::sqrt(2.0);
}

}  // namespace

TEST_CASE("vacuum quasiprobabilities") {
  const CVector vac = coherent_state(0.0, 40);
  const PhaseSpaceGrid w = wigner(vac, small_grid());
  const PhaseSpaceGrid q = husimi_q(vac, small_grid());
  CHECK(w.values(16, 14) == doctest::Approx(2.0 / kPi).epsilon(1e-12));
  CHECK(q.values(16, 14) == doctest::Approx(1.0 / kPi).epsilon(1e-12));
}

TEST_CASE("coherent state with complex amplitude") {
  const cplx beta(1.1, -0.7);
  const CVector psi = coherent_state(beta, 60);
  const PhaseSpaceGrid w = wigner(psi, small_grid());
  const PhaseSpaceGrid q = husimi_q(psi, small_grid());
  for (int i = 0; i < w.spec.nx; i += 4) {
    for (int j = 0; j < w.spec.np; j += 4) {
      const cplx a = alpha_at(w, i, j);
      CHECK(std::abs(w.values(i, j) - 2.0 / kPi * std::exp(-2.0 * std::norm(a - beta))) <= 1e-10);
      CHECK(std::abs(q.values(i, j) - std::exp(-std::norm(a - beta)) / kPi) <= 1e-10);
    }
  }
  CHECK(w.integral() == doctest::Approx(1.0).epsilon(1e-3));
  GridSpec wide = small_grid();
  wide.x_min = wide.p_min = -9.0;
  wide.x_max = wide.p_max = 9.0;
  wide.nx = wide.np = 91;
  CHECK(husimi_q(psi, wide).integral() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("single-photon Wigner function") {
  CVector one = CVector::Zero(30);
  one(1) = 1.0;
  const PhaseSpaceGrid w = wigner(one, small_grid());
  for (int i = 0; i < w.spec.nx; i += 3) {
    for (int j = 0; j < w.spec.np; j += 3) {
      const double a2 = std::norm(alpha_at(w, i, j));
      CHECK(std::abs(w.values(i, j) - 2.0 / kPi * (4.0 * a2 - 1.0) * std::exp(-2.0 * a2)) <= 1e-10);
    }
  }
  CHECK(wigner_at(one * one.adjoint(), 0.0) == doctest::Approx(-2.0 / kPi));
}

TEST_CASE("bounds and cat interference") {
  CatStateSpec s;
  s.alpha0 = 2.0;
  s.n = 3;
  s.m = 1;
  const CVector cat = cat_state(s, 60);
  const PhaseSpaceGrid w = wigner(cat, small_grid());
  const PhaseSpaceGrid q = husimi_q(cat, small_grid());
  CHECK(w.values.maxCoeff() <= 2.0 / kPi + 1e-12);
  CHECK(w.values.minCoeff() >= -2.0 / kPi - 1e-12);
  CHECK(w.values.minCoeff() < -0.05);
  CHECK(q.values.minCoeff() >= -1e-14);
  CHECK(q.values.maxCoeff() <= 1.0 / kPi + 1e-12);
  // A mixed state's Wigner function is the weighted sum.
  const CVector c1 = coherent_state(cplx(0.5, 0.5), 60);
  const CMatrix rho = 0.3 * cat * cat.adjoint() + 0.7 * c1 * c1.adjoint();
  const PhaseSpaceGrid mix = wigner(rho, small_grid());
  CHECK((mix.values - 0.3 * w.values - 0.7 * wigner(c1, small_grid()).values).cwiseAbs().maxCoeff() <= 1e-12);
}
