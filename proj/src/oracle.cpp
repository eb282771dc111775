#include "ramaniton/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ramaniton/error.hpp"
#include "ramaniton/kernels.hpp"
#include "ramaniton/nambu.hpp"
#include "ramaniton/parallel.hpp"

namespace ramaniton::oracle {

namespace {

using cd = std::complex<double>;

std::size_t triangular_index(int n_stokes, int n_phonon) {
  return static_cast<std::size_t>(n_stokes) * static_cast<std::size_t>(n_stokes + 1) / 2 +
         static_cast<std::size_t>(n_phonon);
}

std::span<const cd> view(const Eigen::VectorXcd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<cd> view(Eigen::VectorXcd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<const cd> view(const Eigen::MatrixXcd& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }

// Per-basis weights for the number operators and the b_S b_aS partner map.
struct Tables {
  std::vector<double> n_stokes, n_phonon, n_anti_stokes, pair_count, pair_weight;
  std::vector<std::int32_t> partner;
};

Tables make_tables(const FockBasis& basis) {
  const std::size_t n = basis.size();
  Tables t;
  t.n_stokes.resize(n);
  t.n_phonon.resize(n);
  t.n_anti_stokes.resize(n);
  t.pair_count.resize(n);
  t.pair_weight.resize(n);
  t.partner.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const FockState& s = basis[k];
    t.n_stokes[k] = s.n_stokes;
    t.n_phonon[k] = s.n_phonon;
    t.n_anti_stokes[k] = s.n_anti_stokes;
    t.pair_count[k] = static_cast<double>(s.n_stokes) * s.n_anti_stokes;
    // b_S b_aS |nS, nc, naS> = sqrt(nS naS) |nS-1, nc, naS-1>
    if (s.n_stokes > 0 && s.n_anti_stokes > 0) {
      t.partner[k] = static_cast<std::int32_t>(*basis.index_of(s.n_stokes - 1, s.n_phonon));
      t.pair_weight[k] = std::sqrt(t.pair_count[k]);
    } else {
      t.partner[k] = static_cast<std::int32_t>(k);
      t.pair_weight[k] = 0.0;
    }
  }
  return t;
}

struct FockMoments {
  double n_stokes = 0.0;
  double n_phonon = 0.0;
  double n_anti_stokes = 0.0;
  double pair_number = 0.0;  // <N_S N_aS>
  cd pair;                   // <b_S b_aS>
};

FockMoments fock_moments(const OracleState& psi, const FockBasis& basis) {
  if (static_cast<std::size_t>(psi.amplitudes.size()) != basis.size()) {
    throw Error(ErrorKind::InvalidParameters, "state dimension does not match the basis");
  }
  const double norm = psi.amplitudes.squaredNorm();
  if (std::abs(norm - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidParameters, "oracle state is not normalized");
  }
  const Tables t = make_tables(basis);
  const auto a = view(psi.amplitudes);
  FockMoments m;
  m.n_stokes = kernels::weighted_norm(a, t.n_stokes);
  m.n_phonon = kernels::weighted_norm(a, t.n_phonon);
  m.n_anti_stokes = kernels::weighted_norm(a, t.n_anti_stokes);
  m.pair_number = kernels::weighted_norm(a, t.pair_count);
  m.pair = kernels::gather_dot(a, t.partner, t.pair_weight);
  return m;
}

// In the zero-charge sector <b_S^2>, <b_aS^2> and <b_S^dag b_aS> vanish, so
// with a = b_S + b_aS: <a^dag a> = N_S + N_aS and <a a> = 2 <b_S b_aS>.
double variance_from(const FockMoments& m, double phi) {
  const cd rotation = std::polar(1.0, -2.0 * phi);
  return 0.25 * (1.0 + m.n_stokes + m.n_anti_stokes + (rotation * 2.0 * m.pair).real());
}

double optimal_phase_from(const FockMoments& m) {
  const cd B = 2.0 * m.pair;
  if (std::abs(B) <= 1e-15 * (1.0 + m.n_stokes + m.n_anti_stokes)) return std::numbers::pi / 2.0;
  double phi = std::fmod((std::arg(B) - std::numbers::pi) / 2.0, std::numbers::pi);
  if (phi < 0) phi += std::numbers::pi;
  return phi;
}

double relative(double value, double reference) {
  const double diff = std::abs(value - reference);
  return std::abs(reference) > 1e-12 ? diff / std::abs(reference) : diff;
}

void accumulate(Deviation& d, const ObservablePoint& a, double var_a, const ObservablePoint& b, double var_b) {
  d.n_stokes = std::max(d.n_stokes, relative(a.n_stokes, b.n_stokes));
  d.n_anti_stokes = std::max(d.n_anti_stokes, relative(a.n_anti_stokes, b.n_anti_stokes));
  d.n_phonon = std::max(d.n_phonon, relative(a.n_phonon, b.n_phonon));
  d.variance = std::max(d.variance, relative(var_a, var_b));
  if (a.g2 && b.g2) {
    d.g2 = std::max(d.g2, relative(*a.g2, *b.g2));
  } else if (a.g2.has_value() != b.g2.has_value()) {
    d.g2 = std::max(d.g2, 1.0);
  }
}

struct Sample {
  ObservablePoint point;
  double variance = 0.0;
};

}  // namespace

FockBasis::FockBasis(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 0) throw Error(ErrorKind::InvalidParameters, "Fock cutoff must be non-negative");
  states_.reserve(triangular_index(cutoff + 1, 0));
  for (int ns = 0; ns <= cutoff; ++ns) {
    for (int nc = 0; nc <= ns; ++nc) states_.push_back({ns, nc, ns - nc});
  }
}

std::optional<std::size_t> FockBasis::index_of(int n_stokes, int n_phonon) const {
  if (n_stokes < 0 || n_stokes > cutoff_ || n_phonon < 0 || n_phonon > n_stokes) return std::nullopt;
  return triangular_index(n_stokes, n_phonon);
}

FockBasis build_basis(int cutoff) { return FockBasis(cutoff); }

Eigen::MatrixXcd build_hamiltonian(const ModelParams& params, const FockBasis& basis) {
  const Couplings g = derive_couplings(params);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
  const cd i_unit(0.0, 1.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    const FockState& s = basis[static_cast<std::size_t>(k)];
    H(k, k) = -params.q * s.n_stokes + params.q * s.n_anti_stokes + s.n_phonon;

    // i eta_- c^dag b_S^dag and its conjugate; dropped past the cutoff.
    if (auto j = basis.index_of(s.n_stokes + 1, s.n_phonon + 1)) {
      const cd element = i_unit * g.eta_minus * std::sqrt(double(s.n_stokes + 1) * double(s.n_phonon + 1));
      H(static_cast<Eigen::Index>(*j), k) += element;
      H(k, static_cast<Eigen::Index>(*j)) += std::conj(element);
    }
    // i eta_+ c b_aS^dag and its conjugate; stays inside the same n_S shell.
    if (s.n_phonon > 0) {
      const auto j = basis.index_of(s.n_stokes, s.n_phonon - 1);
      if (!j) throw Error(ErrorKind::InternalConsistency, "phonon-to-anti-Stokes term left the sector");
      const cd element = i_unit * g.eta_plus * std::sqrt(double(s.n_phonon) * double(s.n_anti_stokes + 1));
      H(static_cast<Eigen::Index>(*j), k) += element;
      H(k, static_cast<Eigen::Index>(*j)) += std::conj(element);
    }
  }
  return H;
}

OracleState vacuum_state(const FockBasis& basis) {
  OracleState psi;
  psi.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  psi.amplitudes(0) = 1.0;
  return psi;
}

ExactEvolver::ExactEvolver(const Eigen::MatrixXcd& hamiltonian) {
  if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() == 0) {
    throw Error(ErrorKind::InvalidParameters, "Hamiltonian must be a non-empty square matrix");
  }
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + hamiltonian.cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::InvalidParameters, "Hamiltonian is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::InternalConsistency, "Hermitian eigendecomposition did not converge");
  }
  energies_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
  vectors_adjoint_ = vectors_.adjoint();
}

OracleState ExactEvolver::evolve(const OracleState& psi0, double tau) const {
  const auto n = energies_.size();
  if (psi0.amplitudes.size() != n) throw Error(ErrorKind::InvalidParameters, "state dimension mismatch");
  if (!std::isfinite(tau)) throw Error(ErrorKind::InvalidParameters, "tau must be finite");
  const auto dim = static_cast<std::size_t>(n);
  const double dt = tau - psi0.tau;

  Eigen::VectorXcd coefficients(n);
  kernels::complex_gemv(view(vectors_adjoint_), dim, dim, view(psi0.amplitudes), view(coefficients));

  Eigen::VectorXcd phases(n);
  for (Eigen::Index k = 0; k < n; ++k) phases(k) = std::polar(1.0, -energies_(k) * dt);
  Eigen::VectorXcd rotated(n);
  kernels::complex_multiply(view(coefficients), view(phases), view(rotated));

  OracleState out;
  out.tau = tau;
  out.amplitudes.resize(n);
  kernels::complex_gemv(view(vectors_), dim, dim, view(rotated), view(out.amplitudes));
  return out;
}

OracleState evolve_exact(const Eigen::MatrixXcd& hamiltonian, double tau, const OracleState& psi0) {
  return ExactEvolver(hamiltonian).evolve(psi0, tau);
}

double oracle_quadrature_variance(const OracleState& psi, const FockBasis& basis, double phi) {
  return variance_from(fock_moments(psi, basis), phi);
}

ObservablePoint oracle_observables(const OracleState& psi, const FockBasis& basis, std::optional<double> phi) {
  const FockMoments m = fock_moments(psi, basis);
  ObservablePoint p;
  p.tau = psi.tau;
  p.n_stokes = m.n_stokes;
  p.n_anti_stokes = m.n_anti_stokes;
  p.n_phonon = m.n_phonon;
  p.phi = phi.value_or(optimal_phase_from(m));
  p.s_db = -10.0 * std::log10(variance_from(m, p.phi) / kVacuumVariance);
  if (m.n_stokes > kCorrelationThreshold && m.n_anti_stokes > kCorrelationThreshold) {
    p.g2 = m.pair_number / (m.n_stokes * m.n_anti_stokes);
  }
  return p;
}

double Deviation::max() const { return std::max({n_stokes, n_anti_stokes, n_phonon, variance, g2}); }

bool OracleReport::passed(double tolerance) const { return truncation_adequate && deviation.max() < tolerance; }

OracleReport run_comparison(const ModelParams& params, std::span<const double> taus, std::optional<double> phi,
                            int cutoff) {
  params.validate();
  if (cutoff < 1) throw Error(ErrorKind::InvalidParameters, "Fock cutoff must be at least 1");
  if (taus.empty()) throw Error(ErrorKind::InvalidParameters, "tau grid is empty");
  for (const double t : taus) {
    if (!std::isfinite(t) || t < 0) throw Error(ErrorKind::InvalidParameters, "tau grid must be finite and >= 0");
  }
  if (phi && !std::isfinite(*phi)) throw Error(ErrorKind::InvalidParameters, "phi must be finite");

  const BogoliubovBasis nambu = bogoliubov_basis(params);
  const FockBasis small(cutoff);
  const FockBasis large(2 * cutoff);
  const ExactEvolver evolve_small(build_hamiltonian(params, small));
  const ExactEvolver evolve_large(build_hamiltonian(params, large));
  const OracleState vac_small = vacuum_state(small);
  const OracleState vac_large = vacuum_state(large);

  std::vector<Sample> reference(taus.size()), coarse(taus.size()), fine(taus.size());
  parallel_for(taus.size(), [&](std::size_t i) {
    const GaussianMoments m = moments(propagator(nambu, taus[i]));
    ObservablePoint p = observe(nambu, taus[i], phi);
    reference[i] = {p, quadrature_variance(m, p.phi)};

    const OracleState a = evolve_small.evolve(vac_small, taus[i]);
    coarse[i] = {oracle_observables(a, small, p.phi), oracle_quadrature_variance(a, small, p.phi)};
    const OracleState b = evolve_large.evolve(vac_large, taus[i]);
    fine[i] = {oracle_observables(b, large, p.phi), oracle_quadrature_variance(b, large, p.phi)};
  });

  OracleReport report;
  report.params = params;
  report.cutoff = cutoff;
  report.points = taus.size();
  report.tau_min = *std::min_element(taus.begin(), taus.end());
  report.tau_max = *std::max_element(taus.begin(), taus.end());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    report.max_stokes = std::max(report.max_stokes, reference[i].point.n_stokes);
    accumulate(report.deviation, coarse[i].point, coarse[i].variance, reference[i].point, reference[i].variance);
    accumulate(report.reference_deviation, fine[i].point, fine[i].variance, reference[i].point,
               reference[i].variance);
    accumulate(report.doubling_shift, coarse[i].point, coarse[i].variance, fine[i].point, fine[i].variance);
  }

  std::ostringstream why;
  if (report.max_stokes > cutoff / 4.0) {
    report.truncation_adequate = false;
    why << "max N_S " << report.max_stokes << " exceeds cutoff/4 = " << cutoff / 4.0 << "; ";
  }
  if (report.doubling_shift.max() > kDoublingTolerance) {
    report.truncation_adequate = false;
    why << "doubling the cutoff shifts observables by " << report.doubling_shift.max() << " > "
        << kDoublingTolerance << "; ";
  }
  report.diagnostic = why.str();
  if (!report.diagnostic.empty()) report.diagnostic.resize(report.diagnostic.size() - 2);
  return report;
}

OracleReport compare(const ModelParams& params, std::span<const double> taus, std::optional<double> phi, int cutoff) {
  OracleReport report = run_comparison(params, taus, phi, cutoff);
  if (!report.truncation_adequate) throw Error(ErrorKind::TruncationInadequate, report.diagnostic);
  return report;
}

std::vector<double> verification_window(const ModelParams& params, double max_stokes, std::size_t points) {
  params.validate();
  if (!(max_stokes > 0) || !std::isfinite(max_stokes)) {
    throw Error(ErrorKind::InvalidParameters, "max_stokes must be positive");
  }
  if (points < 2) throw Error(ErrorKind::InvalidParameters, "window needs at least 2 points");

  const BogoliubovBasis nambu = bogoliubov_basis(params);
  auto stokes_at = [&](double tau) { return observe(nambu, tau, 0.0).n_stokes; };

  // Coarse scan on the coupling time scale, then bisection on the first crossing.
  const Couplings g = derive_couplings(params);
  const double rate = std::max(g.eta_minus + g.eta_plus, 1e-6);
  const double step = std::min(0.05, 0.02 / rate);
  constexpr int kMaxSteps = 200000;
  double tau_max = 10.0;
  double previous = 0.0;
  for (int k = 1; k <= kMaxSteps; ++k) {
    const double tau = k * step;
    if (stokes_at(tau) >= max_stokes) {
      double lo = previous;
      double hi = tau;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (stokes_at(mid) >= max_stokes ? hi : lo) = mid;
      }
      tau_max = lo;
      break;
    }
    previous = tau;
  }

  std::vector<double> taus(points);
  for (std::size_t i = 0; i < points; ++i) taus[i] = tau_max * static_cast<double>(i) / static_cast<double>(points - 1);
  return taus;
}

}  // namespace ramaniton::oracle
