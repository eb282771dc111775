#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ramaniton/model.hpp"
#include "ramaniton/nambu.hpp"

namespace ramaniton {

/// Heisenberg propagator v(tau) = M(tau) v(0) of the Nambu vector.
struct Propagator {
  Mat6 M;
  double tau = 0.0;
};

Propagator propagator(const BogoliubovBasis& basis, double tau);

/// Second moments of the evolved bare vacuum. The state is Gaussian with
/// zero mean, so these (together with the propagator they came from) fix
/// every observable.
struct GaussianMoments {
  Mat3 normal;      ///< <b_i^dag b_j>
  Mat3 anomalous;   ///< <b_i b_j>
  Mat6 propagator;  ///< M(tau) the moments were taken from
  double tau = 0.0;
};

GaussianMoments moments(const Propagator& M);

struct Occupations {
  double stokes = 0.0;
  double phonon = 0.0;
  double anti_stokes = 0.0;
};

Occupations occupations(const GaussianMoments& m);

/// Variance of X = 2^{-3/2} [e^{-i phi} (b_S + b_aS) + h.c.]. Vacuum value 1/4.
double quadrature_variance(const GaussianMoments& m, double phi);

/// -10 log10(variance / (1/4)); positive means squeezed.
double squeezing_db(const GaussianMoments& m, double phi);

/// Phase in [0, pi) that minimizes the quadrature variance. The variance is
/// A + Re(B e^{-2i phi}) with B proportional to <(b_S + b_aS)^2>, so the
/// minimum sits at (arg B - pi)/2. Returns pi/2 when B vanishes.
double optimal_phase(const GaussianMoments& m);

/// Zero-delay Stokes/anti-Stokes intensity cross-correlation (Wick form).
/// Throws Error(UndefinedCorrelation) when either occupation is <= 1e-12.
double g2(const GaussianMoments& m);

/// Closed-form variance ratio |sqrt(1+N_S) - sqrt(N_S-N_c)|^2 for the
/// vacuum-seeded state. Throws Error(InvalidOccupations) if N_c > N_S.
double analytic_variance_ratio(double n_stokes, double n_phonon);

struct ObservablePoint {
  double tau = 0.0;
  double n_stokes = 0.0;
  double n_anti_stokes = 0.0;
  double n_phonon = 0.0;
  double s_db = 0.0;
  double phi = 0.0;
  std::optional<double> g2;  ///< empty while the occupations are below threshold
};

/// Evaluates every observable at one propagation time. `phi` empty selects
/// the optimal quadrature per point.
ObservablePoint observe(const BogoliubovBasis& basis, double tau, std::optional<double> phi);

/// Observables over an ascending tau grid. Grid points are evaluated in
/// parallel; results are ordered by index and independent of thread count.
/// Conservation, the g2 identity and the variance identity are checked at
/// every point (Error(InternalConsistency) on violation).
std::vector<ObservablePoint> evolve_series(const ModelParams& params, std::span<const double> taus,
                                           std::optional<double> phi);

inline constexpr double kVacuumVariance = 0.25;
inline constexpr double kCorrelationThreshold = 1e-12;

}  // namespace ramaniton
