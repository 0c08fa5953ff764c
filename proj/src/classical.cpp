#include "subharmonic/classical.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ode.hpp"
#include "parallel.hpp"

namespace subharmonic {

using detail::OdeVec;

const char* to_string(OrbitSymmetry s) {
  return s == OrbitSymmetry::Symmetric ? "Symmetric" : "PairedPartner";
}

const char* to_string(OrbitClass c) {
  switch (c) {
    case OrbitClass::Regular: return "Regular";
    case OrbitClass::Chaotic: return "Chaotic";
    case OrbitClass::Escaped: return "Escaped";
  }
  return "Unknown";
}

namespace {

struct Field {
  const ClassicalSystem& sys;
  void operator()(const OdeVec<2>& y, OdeVec<2>& dy, double s) const {
    const double phase = y[0] + sys.xi_d * std::sin(sys.nu_d_tilde * s);
    dy[0] = y[1] - sys.kappa * y[0];
    dy[1] = -y[0] - sys.kappa * y[1] - sys.beta_tilde * std::sin(phase);
  }
};

// Base point plus the row-major 2x2 tangent.
struct VariationalField {
  const ClassicalSystem& sys;
  void operator()(const OdeVec<6>& y, OdeVec<6>& dy, double s) const {
    const double phase = y[0] + sys.xi_d * std::sin(sys.nu_d_tilde * s);
    const double k = sys.kappa;
    dy[0] = y[1] - k * y[0];
    dy[1] = -y[0] - k * y[1] - sys.beta_tilde * std::sin(phase);
    const double c = -1.0 - sys.beta_tilde * std::cos(phase);
    dy[2] = -k * y[2] + y[4];
    dy[3] = -k * y[3] + y[5];
    dy[4] = c * y[2] - k * y[4];
    dy[5] = c * y[3] - k * y[5];
  }
};

OdeVec<6> pack(State2 z) { return {z.x, z.p, 1.0, 0.0, 0.0, 1.0}; }

VariationalState unpack(const OdeVec<6>& y) {
  VariationalState v;
  v.state = {y[0], y[1]};
  v.tangent << y[2], y[3], y[4], y[5];
  return v;
}

std::array<std::complex<double>, 2> eigenvalues2(const Eigen::Matrix2d& m) {
  const double tr = m.trace();
  const double det = m.determinant();
  const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr / 4.0 - det));
  return {tr / 2.0 + disc, tr / 2.0 - disc};
}

double closure(State2 a, State2 b) { return norm(a - b); }

}  // namespace

State2 flow(State2 start, double s0, double s1, const ClassicalSystem& sys,
            const IntegratorSettings& settings) {
  OdeVec<2> y{start.x, start.p};
  double dt = settings.initial_step;
  detail::integrate(Field{sys}, y, s0, s1, settings, dt);
  return {y[0], y[1]};
}

State2 poincare(State2 start, const ClassicalSystem& sys, const IntegratorSettings& settings) {
  return flow(start, 0.0, sys.period(), sys, settings);
}

State2 poincare_n(State2 start, int n, const ClassicalSystem& sys,
                  const IntegratorSettings& settings) {
  return flow(start, 0.0, n * sys.period(), sys, settings);
}

VariationalState variational_flow(State2 start, double s0, double s1, const ClassicalSystem& sys,
                                  const IntegratorSettings& settings) {
  OdeVec<6> y = pack(start);
  double dt = settings.initial_step;
  detail::integrate(VariationalField{sys}, y, s0, s1, settings, dt);
  return unpack(y);
}

std::vector<State2> sample_trajectory(State2 start, double s0, double s1, int count,
                                      const ClassicalSystem& sys,
                                      const IntegratorSettings& settings) {
  if (count < 1) fail(ErrorCode::InvalidArgument, "sample count must be >= 1");
  std::vector<State2> out;
  out.reserve(static_cast<std::size_t>(count) + 1);
  OdeVec<2> y{start.x, start.p};
  out.push_back(start);
  double dt = settings.initial_step;
  const double h = (s1 - s0) / count;
  for (int k = 0; k < count; ++k) {
    detail::integrate(Field{sys}, y, s0 + k * h, s0 + (k + 1) * h, settings, dt);
    out.push_back({y[0], y[1]});
  }
  return out;
}

PeriodicOrbit find_periodic_orbit(State2 guess, int n, const ClassicalSystem& sys,
                                  const NewtonSettings& newton,
                                  const IntegratorSettings& settings,
                                  const PeriodicOrbit* harmonic) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "orbit period must be >= 1");
  const double span = n * sys.period();
  const double runaway = 100.0 * escape_radius(sys);

  State2 z = guess;
  VariationalState vs = variational_flow(z, 0.0, span, sys, settings);
  double res = closure(vs.state, z);
  int iter = 0;
  while (res > newton.tolerance) {
    if (++iter > newton.max_iterations) {
      std::ostringstream msg;
      msg << "Newton search for a " << n << "-orbit did not converge (residual " << res << ")";
      fail(ErrorCode::NoConvergence, msg.str());
    }
    const Eigen::Matrix2d jac = vs.tangent - Eigen::Matrix2d::Identity();
    if (std::abs(jac.determinant()) < newton.singular_threshold)
      fail(ErrorCode::SingularJacobian, "grad P^n - I is numerically singular");
    const Eigen::Vector2d f(vs.state.x - z.x, vs.state.p - z.p);
    const Eigen::Vector2d dz = -jac.partialPivLu().solve(f);

    double t = 1.0;
    State2 trial{z.x + dz(0), z.p + dz(1)};
    double trial_res = closure(poincare_n(trial, n, sys, settings), trial);
    for (int h = 0; h < newton.max_halvings && !(trial_res < res); ++h) {
      t *= 0.5;
      trial = {z.x + t * dz(0), z.p + t * dz(1)};
      trial_res = closure(poincare_n(trial, n, sys, settings), trial);
    }
    z = trial;
    if (!(norm(z) < runaway)) fail(ErrorCode::NoConvergence, "Newton iterate left the bounded region");
    vs = variational_flow(z, 0.0, span, sys, settings);
    res = closure(vs.state, z);
  }

  // Collect section points and reduce to the minimal period.
  std::vector<State2> pts{z};
  for (int k = 1; k < n; ++k) pts.push_back(poincare(pts.back(), sys, settings));
  int minimal = n;
  const double same = std::max(1e3 * newton.tolerance, 1e-7);
  for (int d = 1; d < n; ++d) {
    if (n % d == 0 && closure(pts[d], z) <= same) {
      minimal = d;
      break;
    }
  }

  PeriodicOrbit orbit;
  orbit.n = minimal;
  orbit.points.assign(pts.begin(), pts.begin() + minimal);
  orbit.residual = res;
  if (minimal != n) {
    vs = variational_flow(z, 0.0, minimal * sys.period(), sys, settings);
    orbit.residual = closure(vs.state, z);
  }
  orbit.monodromy = vs.tangent;
  orbit.multipliers = eigenvalues2(vs.tangent);
  orbit.symmetry = symmetry_check(orbit, sys, settings);

  if (orbit.n == 1) {
    orbit.winding_m = 0;
    return orbit;
  }
  orbit.winding_m = -1;
  try {
    if (harmonic != nullptr) {
      orbit.winding_m = winding_number(orbit, *harmonic, sys, settings);
    } else {
      State2 centroid{};
      for (const auto& p : orbit.points) {
        centroid.x += p.x / orbit.n;
        centroid.p += p.p / orbit.n;
      }
      const PeriodicOrbit ref = find_periodic_orbit(centroid, 1, sys, newton, settings);
      orbit.winding_m = winding_number(orbit, ref, sys, settings);
    }
  } catch (const Error&) {
    // Winding stays unknown when no harmonic reference can be resolved.
  }
  return orbit;
}

int winding_number(const PeriodicOrbit& orbit, const PeriodicOrbit& harmonic,
                   const ClassicalSystem& sys, const IntegratorSettings& settings) {
  if (harmonic.n != 1) fail(ErrorCode::InvalidArgument, "winding reference must be a 1-orbit");
  if (orbit.n < 2) fail(ErrorCode::InvalidArgument, "winding number needs an orbit with n >= 2");
  constexpr int kSamplesPerPeriod = 256;
  const int count = kSamplesPerPeriod * orbit.n;
  const double span = orbit.n * sys.period();
  const auto a = sample_trajectory(orbit.points.front(), 0.0, span, count, sys, settings);
  const auto b = sample_trajectory(harmonic.points.front(), 0.0, span, count, sys, settings);

  double total = 0.0;
  double closest = std::numeric_limits<double>::infinity();
  double prev = 0.0;
  for (int k = 0; k <= count; ++k) {
    const State2 d = a[k] - b[k];
    closest = std::min(closest, norm(d));
    const double angle = std::atan2(d.p, d.x);
    if (k > 0) total += std::remainder(angle - prev, 2.0 * kPi);
    prev = angle;
  }
  // Free rotation is clockwise in (x, p); count clockwise laps as positive.
  const double laps = -total / (2.0 * kPi);
  const double m = std::round(laps);
  if (closest < 1e-9 || std::abs(laps - m) > 0.05) {
    std::ostringstream msg;
    msg << "winding number not resolved: " << laps << " laps, closest approach " << closest;
    fail(ErrorCode::AmbiguousWinding, msg.str());
  }
  return static_cast<int>(m);
}

OrbitSymmetry symmetry_check(const PeriodicOrbit& orbit, const ClassicalSystem& sys,
                             const IntegratorSettings& settings) {
  if (orbit.n % 2 == 0) return OrbitSymmetry::PairedPartner;
  const State2 z0 = orbit.points.front();
  const State2 w = flow(z0, 0.0, 0.5 * orbit.n * sys.period(), sys, settings);
  const double mismatch = std::hypot(w.x + z0.x, w.p + z0.p);
  return mismatch <= 1e-6 * std::max(1.0, norm(z0)) ? OrbitSymmetry::Symmetric
                                                     : OrbitSymmetry::PairedPartner;
}

std::vector<State2> partner_points(const PeriodicOrbit& orbit, const ClassicalSystem& sys,
                                   const IntegratorSettings& settings) {
  const double T = sys.period();
  std::vector<State2> out;
  State2 z = flow(orbit.points.front(), 0.0, 0.5 * T, sys, settings);
  for (int k = 0; k < orbit.n; ++k) {
    out.push_back({-z.x, -z.p});
    z = flow(z, (k + 0.5) * T, (k + 1.5) * T, sys, settings);
  }
  return out;
}

double escape_radius(const ClassicalSystem& sys, const LyapunovSettings& lyap) {
  if (sys.kappa > 0.0) return std::max(10.0 * sys.beta_tilde / sys.kappa, lyap.escape_radius);
  return lyap.escape_radius;
}

namespace {

// Evolves seed and a unit tangent for `periods` periods, renormalizing each
// period. Returns accumulated log growth; iterates are optionally recorded.
struct TangentRun {
  double log_growth = 0.0;
  int periods_done = 0;
  bool escaped = false;
};

TangentRun run_tangent(State2 seed, int periods, const ClassicalSystem& sys, double r_escape,
                       const IntegratorSettings& settings, std::vector<State2>* iterates,
                       int record_limit) {
  TangentRun run;
  Eigen::Vector2d v(1.0, 0.0);
  OdeVec<6> y = pack(seed);
  double dt = settings.initial_step;
  const double T = sys.period();
  for (int k = 0; k < periods; ++k) {
    y = pack({y[0], y[1]});
    try {
      detail::integrate(VariationalField{sys}, y, 0.0, T, settings, dt);
    } catch (const Error&) {
      run.escaped = true;
      return run;
    }
    const VariationalState vs = unpack(y);
    const Eigen::Vector2d w = vs.tangent * v;
    const double growth = w.norm();
    run.log_growth += std::log(growth);
    v = w / growth;
    run.periods_done = k + 1;
    if (iterates != nullptr && k < record_limit) iterates->push_back(vs.state);
    if (norm(vs.state) > r_escape) {
      run.escaped = true;
      return run;
    }
  }
  return run;
}

}  // namespace

double lyapunov_exponent(State2 seed, int horizon_periods, const ClassicalSystem& sys,
                         const LyapunovSettings& lyap, const IntegratorSettings& settings) {
  if (horizon_periods < 100) fail(ErrorCode::InvalidArgument, "Lyapunov horizon must be >= 100 periods");
  const TangentRun run =
      run_tangent(seed, horizon_periods, sys, escape_radius(sys, lyap), settings, nullptr, 0);
  if (run.escaped) {
    std::ostringstream msg;
    msg << "trajectory escaped after " << run.periods_done << " periods";
    fail(ErrorCode::Escaped, msg.str());
  }
  return run.log_growth / (horizon_periods * sys.period());
}

std::vector<PortraitOrbit> phase_portrait(const std::vector<State2>& seeds, int iterations,
                                          const ClassicalSystem& sys,
                                          const LyapunovSettings& lyap,
                                          const IntegratorSettings& settings, int workers) {
  if (iterations < 1) fail(ErrorCode::InvalidArgument, "iterations must be >= 1");
  std::vector<PortraitOrbit> out(seeds.size());
  const double r_escape = escape_radius(sys, lyap);
  const int periods = std::max(iterations, lyap.min_periods);
  detail::parallel_for(seeds.size(), workers, [&](std::size_t i) {
    PortraitOrbit& orbit = out[i];
    orbit.seed = seeds[i];
    orbit.iterates.reserve(static_cast<std::size_t>(iterations));
    const TangentRun run =
        run_tangent(seeds[i], periods, sys, r_escape, settings, &orbit.iterates, iterations);
    if (run.escaped) {
      orbit.classification = OrbitClass::Escaped;
      orbit.lyapunov_estimate = run.periods_done > 0
                                    ? run.log_growth / (run.periods_done * sys.period())
                                    : 0.0;
      return;
    }
    orbit.lyapunov_estimate = run.log_growth / (periods * sys.period());
    orbit.classification = orbit.lyapunov_estimate > lyap.chaos_threshold ? OrbitClass::Chaotic
                                                                          : OrbitClass::Regular;
  });
  return out;
}

}  // namespace subharmonic
