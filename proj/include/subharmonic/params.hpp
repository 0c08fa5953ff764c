#pragma once

#include <cmath>
#include <limits>

namespace subharmonic {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

// CODATA 2018 exact values; only used when normalizing a physical circuit.
inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kElementaryCharge = 1.602176634e-19;

/// Circuit-level description (SI units).
struct PhysicalCircuit {
  double E_C = 0.0;      ///< charging energy [J]
  double E_L = 0.0;      ///< inductive energy [J]
  double E_J = 0.0;      ///< Josephson energy [J]
  double C_g = 0.0;      ///< gate capacitance [F]
  double V_d_bar = 0.0;  ///< drive voltage amplitude [V]
  double omega_d = 0.0;  ///< drive angular frequency [rad/s]
};

/// Dimensionless model driving every computation. q_tilde may be +infinity,
/// which is the Hamiltonian limit (kappa exactly zero).
struct NormalizedModel {
  double beta = 0.0;
  double lambda = 1.0;
  double nu_d = 1.0;
  double xi_d = 0.0;
  double q_tilde = kInfinity;

  bool hamiltonian() const { return std::isinf(q_tilde); }
  double period() const { return 2.0 * kPi / nu_d; }
};

/// Variables with equal damping on both quadratures.
struct SymmetricFrame {
  double beta_tilde = 0.0;
  double nu_d_tilde = 1.0;
  double kappa = 0.0;
  double xi_d = 0.0;
  double s_scale = 1.0;  ///< s = s_scale * tau

  double period() const { return 2.0 * kPi / nu_d_tilde; }
};

/// (n:m) resonance with parity r = (n + m) mod 2.
struct ResonanceLabel {
  int n = 1;
  int m = 1;
  int r = 0;

  /// Number of coherent legs / rotational order (1+r)n.
  int legs() const { return (1 + r) * n; }
};

NormalizedModel normalize(const PhysicalCircuit& circuit, double q_tilde);

/// Throws InvalidArgument / OverdampedRegime when the tuple is outside its domain.
void validate(const NormalizedModel& model);

SymmetricFrame to_symmetric_frame(const NormalizedModel& model);

/// Inverse map of to_symmetric_frame for (beta, nu_d, q_tilde); lambda is
/// not part of the frame and is left at its default.
NormalizedModel from_symmetric_frame(const SymmetricFrame& frame);

ResonanceLabel make_resonance(int n, int m);

double detuning(const ResonanceLabel& label, double nu_d_tilde);
inline double detuning(const ResonanceLabel& label, const SymmetricFrame& frame) {
  return detuning(label, frame.nu_d_tilde);
}

/// nu_d_tilde = (n/m)(1 - delta)
double drive_frequency_from_detuning(const ResonanceLabel& label, double delta);

}  // namespace subharmonic
