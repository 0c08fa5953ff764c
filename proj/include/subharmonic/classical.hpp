#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "subharmonic/params.hpp"

namespace subharmonic {

/// Phase-space point (x~, p~) in the symmetric-dissipation frame.
struct State2 {
  double x = 0.0;
  double p = 0.0;
};

inline State2 operator-(State2 a, State2 b) { return {a.x - b.x, a.p - b.p}; }
inline double norm(State2 z) { return std::hypot(z.x, z.p); }

/// Everything the equations of motion need:
///   dx/ds = p - kappa x
///   dp/ds = -x - kappa p - beta_tilde sin(x + xi_d sin(nu_d_tilde s))
struct ClassicalSystem {
  double beta_tilde = 0.0;
  double kappa = 0.0;
  double xi_d = 0.0;
  double nu_d_tilde = 1.0;

  static ClassicalSystem from_frame(const SymmetricFrame& f) {
    return {f.beta_tilde, f.kappa, f.xi_d, f.nu_d_tilde};
  }
  double period() const { return 2.0 * kPi / nu_d_tilde; }
};

struct IntegratorSettings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-2;
};

struct VariationalState {
  State2 state;
  Eigen::Matrix2d tangent = Eigen::Matrix2d::Identity();
};

enum class OrbitSymmetry { Symmetric, PairedPartner };
const char* to_string(OrbitSymmetry s);

struct PeriodicOrbit {
  int n = 1;                      ///< minimal period in drive periods
  std::vector<State2> points;     ///< section crossings z, P(z), ..., P^{n-1}(z)
  int winding_m = 0;              ///< laps around the harmonic orbit; -1 if unknown
  std::array<std::complex<double>, 2> multipliers{};
  OrbitSymmetry symmetry = OrbitSymmetry::Symmetric;
  double residual = 0.0;
  Eigen::Matrix2d monodromy = Eigen::Matrix2d::Identity();  ///< grad P^n at points[0]
};

struct NewtonSettings {
  double tolerance = 1e-9;
  int max_iterations = 50;
  int max_halvings = 8;
  /// Orbits whose Newton matrix has |det(grad P^n - I)| below this are rejected.
  double singular_threshold = 1e-12;
};

enum class OrbitClass { Regular, Chaotic, Escaped };
const char* to_string(OrbitClass c);

struct PortraitOrbit {
  State2 seed;
  std::vector<State2> iterates;
  double lyapunov_estimate = 0.0;
  OrbitClass classification = OrbitClass::Regular;
};

struct LyapunovSettings {
  /// Escape radius used when kappa = 0 (and as a floor otherwise).
  double escape_radius = 50.0;
  double chaos_threshold = 0.01;
  int min_periods = 1000;
};

State2 flow(State2 start, double s0, double s1, const ClassicalSystem& sys,
            const IntegratorSettings& settings = {});

/// One drive period starting on the section s = 0 (mod 2 pi / nu_d_tilde).
State2 poincare(State2 start, const ClassicalSystem& sys, const IntegratorSettings& settings = {});

/// n applications of the Poincare map.
State2 poincare_n(State2 start, int n, const ClassicalSystem& sys,
                  const IntegratorSettings& settings = {});

VariationalState variational_flow(State2 start, double s0, double s1, const ClassicalSystem& sys,
                                  const IntegratorSettings& settings = {});

/// Samples the trajectory at `count + 1` equally spaced times on [s0, s1].
std::vector<State2> sample_trajectory(State2 start, double s0, double s1, int count,
                                      const ClassicalSystem& sys,
                                      const IntegratorSettings& settings = {});

/// Newton shooting on P^n(z) - z. If `harmonic` is given it is used as the
/// reference for the winding number; otherwise one is searched near the orbit.
PeriodicOrbit find_periodic_orbit(State2 guess, int n, const ClassicalSystem& sys,
                                  const NewtonSettings& newton = {},
                                  const IntegratorSettings& settings = {},
                                  const PeriodicOrbit* harmonic = nullptr);

int winding_number(const PeriodicOrbit& orbit, const PeriodicOrbit& harmonic,
                   const ClassicalSystem& sys, const IntegratorSettings& settings = {});

OrbitSymmetry symmetry_check(const PeriodicOrbit& orbit, const ClassicalSystem& sys,
                             const IntegratorSettings& settings = {});

/// Section points of the image orbit under (x, p, s) -> (-x, -p, s + T/2).
std::vector<State2> partner_points(const PeriodicOrbit& orbit, const ClassicalSystem& sys,
                                   const IntegratorSettings& settings = {});

double escape_radius(const ClassicalSystem& sys, const LyapunovSettings& lyap = {});

double lyapunov_exponent(State2 seed, int horizon_periods, const ClassicalSystem& sys,
                         const LyapunovSettings& lyap = {},
                         const IntegratorSettings& settings = {});

std::vector<PortraitOrbit> phase_portrait(const std::vector<State2>& seeds, int iterations,
                                          const ClassicalSystem& sys,
                                          const LyapunovSettings& lyap = {},
                                          const IntegratorSettings& settings = {},
                                          int workers = 1);

}  // namespace subharmonic
