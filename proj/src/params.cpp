#include "subharmonic/params.hpp"

#include <numeric>
#include <sstream>

#include "subharmonic/errors.hpp"

namespace subharmonic {

NormalizedModel normalize(const PhysicalCircuit& c, double q_tilde) {
  if (!(c.E_C > 0.0) || !(c.E_L > 0.0) || !(c.E_J > 0.0))
    fail(ErrorCode::NonPositiveEnergy, "E_C, E_L and E_J must be positive");
  if (!(c.C_g >= 0.0)) fail(ErrorCode::InvalidArgument, "C_g must be non-negative");
  if (!(c.omega_d > 0.0)) fail(ErrorCode::InvalidArgument, "omega_d must be positive");

  NormalizedModel model;
  model.beta = c.E_J / c.E_L;
  model.lambda = std::pow(2.0 * c.E_C / c.E_L, 0.25);
  model.nu_d = kHbar * c.omega_d / std::sqrt(8.0 * c.E_C * c.E_L);
  if (std::abs(model.nu_d - 1.0) < 1e-9) {
    std::ostringstream msg;
    msg << "drive frequency nu_d = " << model.nu_d << " is at the pole nu_d = 1";
    fail(ErrorCode::PoleAtResonance, msg.str());
  }
  const double gate_charge = c.V_d_bar * c.C_g / kElementaryCharge;
  model.xi_d = gate_charge * std::sqrt(2.0 * c.E_C / c.E_L) * model.nu_d /
               (1.0 - model.nu_d * model.nu_d);
  model.q_tilde = q_tilde;
  validate(model);
  return model;
}

void validate(const NormalizedModel& m) {
  if (!(m.beta >= 0.0) || !std::isfinite(m.beta))
    fail(ErrorCode::InvalidArgument, "beta must be finite and >= 0");
  if (!(m.lambda > 0.0) || !std::isfinite(m.lambda))
    fail(ErrorCode::InvalidArgument, "lambda must be finite and > 0");
  if (!(m.nu_d > 0.0) || !std::isfinite(m.nu_d))
    fail(ErrorCode::InvalidArgument, "nu_d must be finite and > 0");
  if (!std::isfinite(m.xi_d)) fail(ErrorCode::InvalidArgument, "xi_d must be finite");
  if (std::isnan(m.q_tilde) || m.q_tilde <= 0.5)
    fail(ErrorCode::OverdampedRegime, "q_tilde must exceed 1/2");
}

SymmetricFrame to_symmetric_frame(const NormalizedModel& model) {
  if (std::isnan(model.q_tilde) || model.q_tilde <= 0.5)
    fail(ErrorCode::OverdampedRegime, "q_tilde must exceed 1/2");
  SymmetricFrame f;
  f.xi_d = model.xi_d;
  if (model.hamiltonian()) {
    f.beta_tilde = model.beta;
    f.nu_d_tilde = model.nu_d;
    f.kappa = 0.0;
    f.s_scale = 1.0;
    return f;
  }
  const double q = model.q_tilde;
  const double shrink = 1.0 - 1.0 / (4.0 * q * q);
  f.s_scale = std::sqrt(shrink);
  f.beta_tilde = model.beta / shrink;
  f.nu_d_tilde = model.nu_d / f.s_scale;
  f.kappa = 1.0 / (2.0 * q * f.s_scale);
  return f;
}

NormalizedModel from_symmetric_frame(const SymmetricFrame& f) {
  NormalizedModel model;
  model.xi_d = f.xi_d;
  if (f.kappa == 0.0) {
    model.beta = f.beta_tilde;
    model.nu_d = f.nu_d_tilde;
    model.q_tilde = kInfinity;
    return model;
  }
  // kappa^2 = 1/(4Q^2 - 1)  =>  Q = sqrt(1 + kappa^2) / (2 kappa)
  const double k2 = f.kappa * f.kappa;
  model.q_tilde = std::sqrt(1.0 + k2) / (2.0 * f.kappa);
  const double shrink = 1.0 / (1.0 + k2);
  model.beta = f.beta_tilde * shrink;
  model.nu_d = f.nu_d_tilde * std::sqrt(shrink);
  return model;
}

ResonanceLabel make_resonance(int n, int m) {
  if (n < 1 || m < 1) fail(ErrorCode::InvalidArgument, "n and m must be >= 1");
  if (std::gcd(n, m) != 1) {
    std::ostringstream msg;
    msg << "(" << n << "," << m << ") are not coprime";
    fail(ErrorCode::NotCoprime, msg.str());
  }
  return ResonanceLabel{n, m, (n + m) % 2};
}

double detuning(const ResonanceLabel& label, double nu_d_tilde) {
  return 1.0 - static_cast<double>(label.m) / label.n * nu_d_tilde;
}

double drive_frequency_from_detuning(const ResonanceLabel& label, double delta) {
  return static_cast<double>(label.n) / label.m * (1.0 - delta);
}

}  // namespace subharmonic
