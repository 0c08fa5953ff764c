#pragma once

// Randomized soundness checks of the regularity bounds against the classical
// flow. Shared by the unit tests (few draws) and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <future>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "subharmonic/bounds.hpp"
#include "subharmonic/classical.hpp"
#include "subharmonic/errors.hpp"

namespace soundness {

using namespace subharmonic;

struct Summary {
  int draws = 0;
  int violations = 0;
  double worst = 0.0;  ///< check-specific extreme value
  std::string detail;
};

inline std::vector<State2> disk_points(std::mt19937_64& rng, int count, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<State2> out;
  for (int i = 0; i < count; ++i) {
    const double rr = radius * std::sqrt(u(rng));
    const double a = 2.0 * kPi * u(rng);
    out.push_back({rr * std::cos(a), rr * std::sin(a)});
  }
  return out;
}

inline double distance_to_minus_one(const Eigen::Matrix2d& m) {
  const Eigen::EigenSolver<Eigen::Matrix2d> es(m);
  double d = kInfinity;
  for (int i = 0; i < 2; ++i) d = std::min(d, std::abs(es.eigenvalues()(i) + 1.0));
  return d;
}

/// Draws satisfying the no-minus-one criterion with |delta| <= delta_bar; the
/// n-period Jacobian is evaluated on the harmonic orbit and at random points.
/// worst = smallest distance of an eigenvalue to -1.
inline Summary check_no_minusone(int draws, std::uint64_t seed, int points_per_draw = 4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int orders[] = {2, 3, 5};
  Summary s;
  s.worst = kInfinity;
  for (int i = 0; i < draws; ++i) {
    const int n = orders[i % 3];
    const int m = 1 + static_cast<int>(u(rng) * (n - 1)) % std::max(1, n - 1);
    const ResonanceLabel label = make_resonance(n, m);
    const double f = 0.9 * u(rng);
    const double a = (u(rng) < 0.5 ? -1.0 : 1.0) * u(rng) * f / (2.0 * m);
    const double delta = a / (1.0 + a);
    ClassicalSystem sys;
    sys.nu_d_tilde = drive_frequency_from_detuning(label, delta);
    const double delta_bar = f * sys.nu_d_tilde / (2.0 * n);
    const double beta_max =
        sys.nu_d_tilde / (4.0 * kPi * n) * std::log1p(2.0 * std::cos(kPi * n * delta_bar / sys.nu_d_tilde));
    sys.beta_tilde = 0.999 * u(rng) * beta_max;
    sys.kappa = 0.1 * u(rng);
    sys.xi_d = 4.0 * u(rng);
    if (!no_minusone_criterion(sys.beta_tilde, sys.nu_d_tilde, n, delta_bar)) {
      ++s.violations;
      s.detail = "draw does not satisfy the criterion";
      continue;
    }
    std::vector<State2> points = disk_points(rng, points_per_draw, 4.0);
    try {
      points.push_back(find_periodic_orbit({0.0, 0.0}, 1, sys).points.front());
    } catch (const Error&) {
    }
    for (const State2& z : points) {
      const VariationalState v = variational_flow(z, 0.0, n * sys.period(), sys);
      const double d = distance_to_minus_one(v.tangent);
      if (d < s.worst) {
        s.worst = d;
        std::ostringstream msg;
        msg << "n=" << n << " nu=" << sys.nu_d_tilde << " beta=" << sys.beta_tilde << " kappa=" << sys.kappa
            << " xi=" << sys.xi_d;
        s.detail = msg.str();
      }
      if (!(d > 1e-3)) ++s.violations;
    }
    ++s.draws;
  }
  return s;
}

/// Draws below the contraction bound; the distance between two trajectories
/// in the symmetric frame must shrink from one sample to the next over 50
/// periods (8 samples per period). worst = largest ratio of consecutive distances.
inline Summary check_contraction(int draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr int kPeriods = 50;
  constexpr int kPerPeriod = 8;
  Summary s;
  for (int i = 0; i < draws; ++i) {
    NormalizedModel model;
    model.q_tilde = 0.5 + 0.01 + 20.0 * u(rng);
    model.beta = u(rng) * contraction_bound(model.q_tilde);
    model.nu_d = 0.5 + 3.5 * u(rng);
    model.xi_d = 4.0 * u(rng);
    const ClassicalSystem sys = ClassicalSystem::from_frame(to_symmetric_frame(model));
    const std::vector<State2> starts = disk_points(rng, 2, 5.0);
    const double span = kPeriods * sys.period();
    const std::vector<State2> a = sample_trajectory(starts[0], 0.0, span, kPeriods * kPerPeriod, sys);
    const std::vector<State2> b = sample_trajectory(starts[1], 0.0, span, kPeriods * kPerPeriod, sys);
    bool ok = true;
    for (std::size_t k = 1; k < a.size(); ++k) {
      const double prev = norm(a[k - 1] - b[k - 1]);
      const double cur = norm(a[k] - b[k]);
      // Below the integrator tolerance the distance no longer carries information.
      if (prev < 1e-7) break;
      const double ratio = cur / prev;
      s.worst = std::max(s.worst, ratio);
      if (!(ratio < 1.0)) ok = false;
    }
    if (!ok) {
      ++s.violations;
      std::ostringstream msg;
      msg << "Q=" << model.q_tilde << " beta=" << model.beta << " nu=" << model.nu_d << " xi=" << model.xi_d;
      s.detail = msg.str();
    }
    ++s.draws;
  }
  return s;
}

/// Draws where the subharmonic exclusion holds; Newton searches for n-orbits
/// from random seeds must fail or return the harmonic orbit.
/// worst = number of non-harmonic orbits found.
inline Summary check_subharmonic_exclusion(int draws, int seeds, std::uint64_t seed, int workers = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  struct Draw {
    ClassicalSystem sys;
    int n = 2;
    std::vector<State2> seeds;
  };
  std::vector<Draw> all;
  while (static_cast<int>(all.size()) < draws) {
    Draw d;
    d.n = 2 + static_cast<int>(u(rng) * 3.0);
    d.sys.nu_d_tilde = 0.8 + 4.0 * u(rng);
    d.sys.beta_tilde = 0.3 * u(rng);
    d.sys.kappa = 0.1 * u(rng);
    d.sys.xi_d = 4.0 * u(rng);
    if (!subharmonic_exclusion(d.sys.beta_tilde, d.sys.nu_d_tilde, d.n)) continue;
    d.seeds = disk_points(rng, seeds, 6.0);
    all.push_back(d);
  }
  auto run = [&](std::size_t begin, std::size_t end) {
    Summary part;
    NewtonSettings newton;
    newton.max_iterations = 30;
    for (std::size_t i = begin; i < end; ++i) {
      const Draw& d = all[i];
      int found = 0;
      for (const State2& z : d.seeds) {
        try {
          const PeriodicOrbit orbit = find_periodic_orbit(z, d.n, d.sys, newton);
          if (orbit.n != 1) ++found;
        } catch (const Error&) {
        }
      }
      if (found > 0) {
        ++part.violations;
        std::ostringstream msg;
        msg << "n=" << d.n << " nu=" << d.sys.nu_d_tilde << " beta=" << d.sys.beta_tilde;
        part.detail = msg.str();
      }
      part.worst += found;
      ++part.draws;
    }
    return part;
  };
  const int w = std::max(1, workers);
  std::vector<std::future<Summary>> jobs;
  for (int k = 0; k < w; ++k)
    jobs.push_back(std::async(std::launch::async, run, all.size() * k / w, all.size() * (k + 1) / w));
  Summary s;
  for (auto& j : jobs) {
    const Summary p = j.get();
    s.draws += p.draws;
    s.violations += p.violations;
    s.worst += p.worst;
    if (!p.detail.empty()) s.detail = p.detail;
  }
  return s;
}

}  // namespace soundness
