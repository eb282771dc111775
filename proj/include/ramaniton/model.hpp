#pragma once

#include <iosfwd>
#include <optional>

namespace ramaniton {

/// Dimensionless inputs of the rotating-frame Raman Hamiltonian.
///
/// Frequencies are measured in units of the phonon frequency Omega, times in
/// units of 1/Omega and lengths in units of c'/Omega, where c' = c/n0.
struct ModelParams {
  double omega_ratio = 12.4;  ///< pump frequency over phonon frequency
  double eta = 1e-3;          ///< pump-induced photon-phonon coupling
  double q = 1.0;             ///< Raman shift c'Q/Omega, 0 <= q <= omega_ratio

  /// Throws Error(InvalidParameters) when outside the physical domain.
  void validate() const;
};

/// Couplings of the Stokes (eta_minus) and anti-Stokes (eta_plus) channels.
struct Couplings {
  double eta_minus = 0.0;
  double eta_plus = 0.0;
};

Couplings derive_couplings(const ModelParams& params);

/// SI inputs used only at the command-line boundary.
struct PhysicalConstants {
  double omega = 0.0;      ///< phonon angular frequency, rad/s
  double n0 = 0.0;         ///< linear refractive index
  double n2 = 0.0;         ///< nonlinear index, m^2/W
  double intensity = 0.0;  ///< pump intensity, W/m^2

  void validate() const;
  /// Speed of light in the medium, m/s.
  double light_speed() const;
};

inline constexpr double kVacuumLightSpeed = 299792458.0;

/// Kerr-effect estimate of the coupling from the nonlinear index.
double estimate_eta(const PhysicalConstants& constants);

/// Converts a dimensionless propagation time Omega*t into a waveguide length in metres.
double dimensionless_length_to_physical(double tau, const PhysicalConstants& constants);

/// Silicon waveguide at 1550 nm pumping, first-order Raman phonon at 15.6 THz.
ModelParams silicon_preset(double q = 1.0);
PhysicalConstants silicon_constants();

/// Parameter set used for the truncated Fock-space cross-check.
ModelParams verification_preset();

/// Values read from a key=value parameter file. Absent keys stay empty.
struct ParameterOverrides {
  std::optional<double> omega_ratio;
  std::optional<double> eta;
  std::optional<double> q;
  std::optional<double> omega_hz;  ///< Omega/2pi in Hz
  std::optional<double> n0;
  std::optional<double> n2;
  std::optional<double> intensity;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys, duplicate
/// keys and malformed numbers raise Error(InvalidConfig).
ParameterOverrides parse_parameter_file(std::istream& in);

}  // namespace ramaniton
