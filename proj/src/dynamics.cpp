#include "ramaniton/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ramaniton/error.hpp"
#include "ramaniton/parallel.hpp"

namespace ramaniton {

namespace {

// <(b_S + b_aS)^2>
Complex pair_amplitude(const GaussianMoments& m) {
  return m.anomalous(kStokes, kStokes) + m.anomalous(kAntiStokes, kAntiStokes) +
         Real(2) * m.anomalous(kStokes, kAntiStokes);
}

// 1 + <(b_S + b_aS)^dag (b_S + b_aS)>
Real quadrature_offset(const GaussianMoments& m) {
  return Real(1) + m.normal(kStokes, kStokes).real() + m.normal(kAntiStokes, kAntiStokes).real() +
         Real(2) * m.normal(kStokes, kAntiStokes).real();
}

Real variance_ext(const GaussianMoments& m, double phi) {
  // X expanded on the initial vacuum operators: coefficient of b_m(0) is
  // alpha_m = e^{-i phi} r_m + e^{i phi} conj(r_{m+3}) with r the sum of the
  // Stokes and anti-Stokes propagator rows, and <X^2> = sum |alpha_m|^2 / 8.
  // The sum of squares does not suffer the cancellation of A - |B| at large N.
  const Complex rot = std::polar(Real(1), -Real(phi));
  Real sum = 0;
  for (int k = 0; k < kModes; ++k) {
    const Complex r_particle = m.propagator(kStokes, k) + m.propagator(kAntiStokes, k);
    const Complex r_hole = m.propagator(kStokes, k + kModes) + m.propagator(kAntiStokes, k + kModes);
    sum += std::norm(rot * r_particle + std::conj(rot) * std::conj(r_hole));
  }
  return sum / Real(8);
}

}  // namespace

Propagator propagator(const BogoliubovBasis& basis, double tau) {
  Eigen::Matrix<Complex, 6, 1> phases;
  for (int j = 0; j < kModes; ++j) {
    const Real angle = basis.omegas[j] * Real(tau);
    phases(j) = Complex(std::cos(angle), -std::sin(angle));
    phases(j + kModes) = std::conj(phases(j));
  }
  Mat6 scaled = basis.U;
  for (int k = 0; k < 6; ++k) scaled.col(k) *= phases(k);
  return {scaled * basis.inverse(), tau};
}

GaussianMoments moments(const Propagator& P) {
  GaussianMoments m;
  m.tau = P.tau;
  m.propagator = P.M;
  const auto particle = P.M.topLeftCorner<3, 3>();
  const auto hole = P.M.topRightCorner<3, 3>();
  // <b_i^dag b_j> = sum_m conj(M_{i,m+3}) M_{j,m+3}; <b_i b_j> = sum_m M_{i,m} M_{j,m+3}
  m.normal = hole.conjugate() * hole.transpose();
  m.anomalous = particle * hole.transpose();
  return m;
}

Occupations occupations(const GaussianMoments& m) {
  return {static_cast<double>(m.normal(kStokes, kStokes).real()),
          static_cast<double>(m.normal(kPhonon, kPhonon).real()),
          static_cast<double>(m.normal(kAntiStokes, kAntiStokes).real())};
}

double quadrature_variance(const GaussianMoments& m, double phi) { return static_cast<double>(variance_ext(m, phi)); }

double squeezing_db(const GaussianMoments& m, double phi) {
  return static_cast<double>(-10.0L * std::log10(variance_ext(m, phi) / Real(kVacuumVariance)));
}

double optimal_phase(const GaussianMoments& m) {
  const Complex B = pair_amplitude(m);
  if (std::abs(B) <= 1e-15L * quadrature_offset(m)) return std::numbers::pi / 2.0;
  Real phi = (std::arg(B) - std::numbers::pi_v<Real>) / Real(2);
  phi = std::fmod(phi, std::numbers::pi_v<Real>);
  if (phi < 0) phi += std::numbers::pi_v<Real>;
  return static_cast<double>(phi);
}

double g2(const GaussianMoments& m) {
  const Real ns = m.normal(kStokes, kStokes).real();
  const Real nas = m.normal(kAntiStokes, kAntiStokes).real();
  if (!(ns > Real(kCorrelationThreshold)) || !(nas > Real(kCorrelationThreshold))) {
    throw Error(ErrorKind::UndefinedCorrelation, "Stokes or anti-Stokes occupation below 1e-12");
  }
  // Wick: <S^dag aS^dag aS S> = N_S N_aS + |<S aS>|^2 + |<S^dag aS>|^2
  const Real connected = std::norm(m.anomalous(kStokes, kAntiStokes)) + std::norm(m.normal(kStokes, kAntiStokes));
  return static_cast<double>(Real(1) + connected / (ns * nas));
}

double analytic_variance_ratio(double n_stokes, double n_phonon) {
  if (!std::isfinite(n_stokes) || !std::isfinite(n_phonon)) {
    throw Error(ErrorKind::InvalidOccupations, "occupations must be finite");
  }
  const double slack = 1e-9 * (1.0 + std::abs(n_stokes));
  if (n_phonon < -slack || n_phonon > n_stokes + slack) {
    std::ostringstream os;
    os << "need N_S >= N_c >= 0, got N_S=" << n_stokes << " N_c=" << n_phonon;
    throw Error(ErrorKind::InvalidOccupations, os.str());
  }
  const double ns = std::max(n_stokes, 0.0);
  const double nc = std::clamp(n_phonon, 0.0, ns);
  // (sqrt(1+N_S) - sqrt(N_S-N_c)) rationalized: (1 + N_c) / (sqrt(1+N_S) + sqrt(N_S-N_c))
  const double amplitude = (1.0 + nc) / (std::sqrt(1.0 + ns) + std::sqrt(ns - nc));
  return amplitude * amplitude;
}

namespace {

ObservablePoint observe_moments(const GaussianMoments& m, std::optional<double> phi) {
  const Occupations n = occupations(m);
  ObservablePoint p;
  p.tau = m.tau;
  p.n_stokes = n.stokes;
  p.n_anti_stokes = n.anti_stokes;
  p.n_phonon = n.phonon;
  p.phi = phi.value_or(optimal_phase(m));
  p.s_db = squeezing_db(m, p.phi);
  if (n.stokes > kCorrelationThreshold && n.anti_stokes > kCorrelationThreshold) p.g2 = g2(m);
  return p;
}

void check_identities(const GaussianMoments& m, const ObservablePoint& p) {
  auto fail = [&](const std::string& what, double value) {
    std::ostringstream os;
    os << what << " violated at tau=" << p.tau << " (deviation " << value << ")";
    throw Error(ErrorKind::InternalConsistency, os.str());
  };

  const double imbalance = std::abs(p.n_stokes - p.n_anti_stokes - p.n_phonon);
  if (imbalance > 1e-9 * (1.0 + p.n_stokes)) fail("charge conservation", imbalance);

  if (p.g2 && p.n_stokes > 1e-6) {
    const double dev = std::abs(*p.g2 / (2.0 + 1.0 / p.n_stokes) - 1.0);
    if (dev > 1e-9) fail("g2 = 2 + 1/N_S", dev);
  }

  // The variance at the optimal phase is O(1/N_S) while its ingredients are
  // O(N_S); allow for the N_S^2 amplification of rounding in extended precision.
  const double ratio = quadrature_variance(m, optimal_phase(m)) / kVacuumVariance;
  const double expected = analytic_variance_ratio(p.n_stokes, p.n_phonon);
  const double amplification = (1.0 + p.n_stokes) * (1.0 + p.n_stokes);
  const double tolerance = 1e-9 + 64.0 * static_cast<double>(std::numeric_limits<Real>::epsilon()) * amplification;
  const double dev = std::abs(ratio / expected - 1.0);
  if (dev > tolerance) fail("variance/occupation relation", dev);
}

}  // namespace

ObservablePoint observe(const BogoliubovBasis& basis, double tau, std::optional<double> phi) {
  return observe_moments(moments(propagator(basis, tau)), phi);
}

std::vector<ObservablePoint> evolve_series(const ModelParams& params, std::span<const double> taus,
                                           std::optional<double> phi) {
  params.validate();
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!std::isfinite(taus[i])) throw Error(ErrorKind::InvalidParameters, "tau grid must be finite");
    if (i > 0 && !(taus[i] > taus[i - 1])) throw Error(ErrorKind::InvalidParameters, "tau grid must be ascending");
  }
  if (phi && !std::isfinite(*phi)) throw Error(ErrorKind::InvalidParameters, "phi must be finite");

  const BogoliubovBasis basis = bogoliubov_basis(params);
  std::vector<ObservablePoint> series(taus.size());
  parallel_for(taus.size(), [&](std::size_t i) {
    const GaussianMoments m = moments(propagator(basis, taus[i]));
    ObservablePoint p = observe_moments(m, phi);
    check_identities(m, p);
    series[i] = p;
  });
  return series;
}

}  // namespace ramaniton
