#pragma once

// Thin adaptive-integration layer over Boost.Odeint (Fehlberg 7(8) pair).

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "subharmonic/classical.hpp"
#include "subharmonic/errors.hpp"

namespace subharmonic::detail {

template <std::size_t N>
using OdeVec = std::array<double, N>;

/// Advances y from s0 to s1 in place. dt carries the step-size hint across
/// successive calls so segmented integration does not restart cold.
template <std::size_t N, class Rhs>
void integrate(Rhs&& rhs, OdeVec<N>& y, double s0, double s1,
               const IntegratorSettings& settings, double& dt) {
  namespace odeint = boost::numeric::odeint;
  if (s1 < s0) fail(ErrorCode::InvalidArgument, "integration interval must be forward in time");
  auto stepper = odeint::make_controlled(settings.abs_tol, settings.rel_tol,
                                         odeint::runge_kutta_fehlberg78<OdeVec<N>>());
  if (!(dt > 0.0)) dt = settings.initial_step;
  const double min_step = 1e-13 * std::max(1.0, std::abs(s1));
  double t = s0;
  int rejected = 0;
  while (t < s1) {
    const bool clipped = (s1 - t) < dt;
    double h = clipped ? (s1 - t) : dt;
    const auto result = stepper.try_step(rhs, y, t, h);
    if (result == odeint::success) {
      rejected = 0;
      if (!clipped) dt = h;
      if (clipped) t = s1;
    } else {
      dt = h;
      if (++rejected > 200 || h < min_step) {
        std::ostringstream msg;
        msg << "adaptive integrator stalled at s = " << t << " (step " << h << ")";
        fail(ErrorCode::StepSizeUnderflow, msg.str());
      }
    }
  }
  for (double v : y)
    if (!std::isfinite(v)) fail(ErrorCode::StepSizeUnderflow, "integration produced a non-finite state");
}

}  // namespace subharmonic::detail
