#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ramaniton/dynamics.hpp"
#include "ramaniton/model.hpp"

// Independent check of the Nambu path: exact evolution of the Raman
// Hamiltonian in a truncated Fock space. Only the zero-charge sector
// n_S = n_c + n_aS is kept, which is where the bare vacuum evolves.
namespace ramaniton::oracle {

struct FockState {
  int n_stokes = 0;
  int n_phonon = 0;
  int n_anti_stokes = 0;
};

/// Zero-charge states with n_S <= cutoff, ordered lexicographically in (n_S, n_c).
class FockBasis {
 public:
  explicit FockBasis(int cutoff);

  int cutoff() const { return cutoff_; }
  std::size_t size() const { return states_.size(); }
  const FockState& operator[](std::size_t i) const { return states_[i]; }
  std::span<const FockState> states() const { return states_; }

  /// Index of (n_S, n_c, n_S - n_c), or nullopt outside the truncated sector.
  std::optional<std::size_t> index_of(int n_stokes, int n_phonon) const;

 private:
  int cutoff_;
  std::vector<FockState> states_;
};

FockBasis build_basis(int cutoff);

/// Hamiltonian matrix in units of hbar*Omega with the constant 1/2 dropped.
Eigen::MatrixXcd build_hamiltonian(const ModelParams& params, const FockBasis& basis);

struct OracleState {
  Eigen::VectorXcd amplitudes;
  double tau = 0.0;
};

OracleState vacuum_state(const FockBasis& basis);

/// exp(-i H tau) by full Hermitian eigendecomposition, computed once and
/// reused for every tau.
class ExactEvolver {
 public:
  explicit ExactEvolver(const Eigen::MatrixXcd& hamiltonian);

  OracleState evolve(const OracleState& psi0, double tau) const;
  const Eigen::VectorXd& energies() const { return energies_; }

 private:
  Eigen::VectorXd energies_;
  Eigen::MatrixXcd vectors_;          // column-major eigenvectors
  Eigen::MatrixXcd vectors_adjoint_;  // stored explicitly for the gemv kernel
};

OracleState evolve_exact(const Eigen::MatrixXcd& hamiltonian, double tau, const OracleState& psi0);

/// Occupations, quadrature variance and g2 from in-sector matrix elements.
/// `phi` empty selects the optimal quadrature of this state.
ObservablePoint oracle_observables(const OracleState& psi, const FockBasis& basis, std::optional<double> phi);

double oracle_quadrature_variance(const OracleState& psi, const FockBasis& basis, double phi);

/// Per-observable maximum relative deviation over a tau grid.
struct Deviation {
  double n_stokes = 0.0;
  double n_anti_stokes = 0.0;
  double n_phonon = 0.0;
  double variance = 0.0;
  double g2 = 0.0;

  double max() const;
};

struct OracleReport {
  ModelParams params;
  int cutoff = 0;
  std::size_t points = 0;
  double tau_min = 0.0;
  double tau_max = 0.0;
  double max_stokes = 0.0;     ///< largest Nambu N_S on the grid
  Deviation deviation;         ///< Fock(cutoff) vs Nambu
  Deviation reference_deviation;  ///< Fock(2 cutoff) vs Nambu
  Deviation doubling_shift;    ///< Fock(cutoff) vs Fock(2 cutoff)
  bool truncation_adequate = true;
  std::string diagnostic;

  /// Adequate truncation and every deviation below `tolerance`.
  bool passed(double tolerance = kAgreementTolerance) const;

  static constexpr double kAgreementTolerance = 1e-3;
};

inline constexpr double kDoublingTolerance = 1e-4;

/// Runs Nambu and Fock paths side by side and records the truncation checks
/// without throwing on an inadequate basis.
OracleReport run_comparison(const ModelParams& params, std::span<const double> taus, std::optional<double> phi,
                            int cutoff);

/// As run_comparison, but throws Error(TruncationInadequate) when some N_S
/// exceeds cutoff/4 or doubling the cutoff moves any observable by more than 1e-4.
OracleReport compare(const ModelParams& params, std::span<const double> taus, std::optional<double> phi, int cutoff);

/// Uniform grid on [0, tau_max] where tau_max is the first time the Nambu
/// Stokes occupation reaches `max_stokes` (tau_max = 10 if it never does
/// within the search horizon).
std::vector<double> verification_window(const ModelParams& params, double max_stokes, std::size_t points);

}  // namespace ramaniton::oracle
