#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

#include "ramaniton/model.hpp"

namespace ramaniton {

// The 6x6 quadratic problem is solved in extended precision. Observables of
// the evolved vacuum relate quantities of order N to quantities of order 1/N,
// so any departure of the propagator from the symplectic group is amplified
// by roughly N^2; long double keeps that below 1e-9 up to N ~ 10^4.
using Real = long double;
using Complex = std::complex<Real>;
using Mat6 = Eigen::Matrix<Complex, 6, 6>;
using Mat3 = Eigen::Matrix<Complex, 3, 3>;
using Vec6 = Eigen::Matrix<Complex, 6, 1>;

/// Row/column index of each bare mode in the particle block. The hole block
/// repeats the same order shifted by kModes.
enum ModeIndex : int { kStokes = 0, kPhonon = 1, kAntiStokes = 2 };
inline constexpr int kModes = 3;

/// Coefficient matrix L of H = 1/2 v^dag L v for v = (b_S, c, b_aS, b_S^dag, c^dag, b_aS^dag),
/// in units of hbar*Omega.
struct NambuMatrix {
  ModelParams params;
  Mat6 entries;
};

NambuMatrix build_nambu_matrix(const ModelParams& params);

/// diag(1,1,1,-1,-1,-1).
Mat6 parity_metric();

/// Max elementwise |L - L^dag|.
double hermiticity_residual(const NambuMatrix& L);

/// Closed-form quasiparticle frequencies in units of Omega.
struct Dispersion {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;

  std::array<double, 3> as_array() const { return {omega1, omega2, omega3}; }
};

Dispersion analytic_dispersion(const ModelParams& params);

/// Para-unitary transformation v = U alpha. Columns 0..2 are the particle
/// eigenvectors of Z L for modes 1..3; columns 3..5 are their particle-hole
/// conjugates.
struct BogoliubovBasis {
  Mat6 U;
  std::array<Real, 3> omegas{};

  /// U^{-1} = Z U^dag Z.
  Mat6 inverse() const;
};

/// Exact Bogoliubov diagonalization of a Nambu matrix.
///
/// Uses a general complex eigensolver on Z L, keeps the three positive
/// symplectic-norm eigenvectors, restores exact canonical normalization by
/// iterated symmetric Z-orthonormalization, and labels the modes by their
/// distance to the closed-form dispersion. The returned basis satisfies
/// U Z U^dag Z = I and (Z L) U = U (Z W).
///
/// Throws Error(DegenerateModes) when two closed-form frequencies are within
/// 1e-8 (q = 0, or eta = 0 at q = 1) and Error(NonCanonical) when the
/// eigensolver output cannot be brought to canonical form or disagrees with
/// the closed-form dispersion.
BogoliubovBasis diagonalize(const NambuMatrix& L);

/// Identity transformation of the uncoupled (eta = 0) problem, columns
/// ordered as the closed-form labels. Valid at the q = 1 crossing where
/// diagonalize() refuses. Throws Error(InvalidParameters) unless eta == 0.
BogoliubovBasis decoupled_basis(const ModelParams& params);

/// decoupled_basis for eta == 0, diagonalize(build_nambu_matrix(params)) otherwise.
BogoliubovBasis bogoliubov_basis(const ModelParams& params);

/// Max elementwise |U Z U^dag Z - I|.
double verify_canonical(const Mat6& U);
double verify_canonical(const BogoliubovBasis& basis);

/// Max elementwise |(Z L) U - U (Z W)|.
double eigen_relation_residual(const NambuMatrix& L, const BogoliubovBasis& basis);

/// All six eigenvalues of Z L straight from the eigensolver, ascending by real part.
std::array<Complex, 6> nambu_spectrum(const NambuMatrix& L);

inline constexpr double kDegeneracyThreshold = 1e-8;
inline constexpr double kDispersionTolerance = 1e-10;
inline constexpr double kNonCanonicalThreshold = 1e-8;

}  // namespace ramaniton
