#include "ramaniton/nambu.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ramaniton/error.hpp"

namespace ramaniton {

namespace {

constexpr Complex kI{0.0L, 1.0L};

Real max_abs(const Mat6& m) { return m.cwiseAbs().maxCoeff(); }

// Particle-hole conjugate of a column: swap the two 3-blocks and conjugate.
Vec6 hole_of(const Vec6& particle) {
  Vec6 hole;
  hole.head<3>() = particle.tail<3>().conjugate();
  hole.tail<3>() = particle.head<3>().conjugate();
  return hole;
}

Mat6 assemble(const Eigen::Matrix<Complex, 6, 3>& particles) {
  Mat6 U;
  for (int j = 0; j < kModes; ++j) {
    U.col(j) = particles.col(j);
    U.col(j + kModes) = hole_of(particles.col(j));
  }
  return U;
}

// Iterates U <- U (J G)^{-1/2} with G = U^dag Z U and J = Z, truncated after
// the quadratic term. Each sweep squares the canonical residual, and the
// particle-hole structure is reimposed from the particle columns every time.
Eigen::Matrix<Complex, 6, 3> z_orthonormalize(Eigen::Matrix<Complex, 6, 3> particles) {
  const Mat6 Z = parity_metric();
  const Mat6 I = Mat6::Identity();
  for (int sweep = 0; sweep < 12; ++sweep) {
    const Mat6 U = assemble(particles);
    const Mat6 X = Z * (U.adjoint() * Z * U) - I;
    if (max_abs(X) < 1e-18L) break;
    const Mat6 correction = I - X / Real(2) + Real(3) / Real(8) * X * X;
    particles = (U * correction).leftCols<3>();
  }
  return particles;
}

std::string describe(const ModelParams& p) {
  std::ostringstream os;
  os << "(omega_ratio=" << p.omega_ratio << ", eta=" << p.eta << ", q=" << p.q << ")";
  return os.str();
}

}  // namespace

NambuMatrix build_nambu_matrix(const ModelParams& params) {
  const Couplings g = derive_couplings(params);
  const Real q = params.q;
  const Real eta_minus = g.eta_minus;
  const Real eta_plus = g.eta_plus;

  Mat3 A = Mat3::Zero();
  A(kStokes, kStokes) = -q;
  A(kPhonon, kPhonon) = 1.0L;
  A(kAntiStokes, kAntiStokes) = q;
  // i eta_+ (c b_aS^dag - c^dag b_aS)
  A(kAntiStokes, kPhonon) = kI * eta_plus;
  A(kPhonon, kAntiStokes) = -kI * eta_plus;

  // i eta_- (c^dag b_S^dag - c b_S)
  Mat3 B = Mat3::Zero();
  B(kStokes, kPhonon) = kI * eta_minus;
  B(kPhonon, kStokes) = kI * eta_minus;

  NambuMatrix L{params, Mat6::Zero()};
  L.entries.topLeftCorner<3, 3>() = A;
  L.entries.topRightCorner<3, 3>() = B;
  L.entries.bottomLeftCorner<3, 3>() = B.conjugate();
  L.entries.bottomRightCorner<3, 3>() = A.conjugate();
  return L;
}

Mat6 parity_metric() {
  Mat6 Z = Mat6::Zero();
  for (int i = 0; i < 6; ++i) Z(i, i) = i < kModes ? 1.0L : -1.0L;
  return Z;
}

double hermiticity_residual(const NambuMatrix& L) {
  return static_cast<double>(max_abs(L.entries - L.entries.adjoint()));
}

Dispersion analytic_dispersion(const ModelParams& params) {
  params.validate();
  const double q = params.q;
  const double eta = params.eta;
  const double root = std::sqrt((q - 1.0) * (q - 1.0) + eta * eta * q / 2.0);
  const double omega3 = 0.5 * (q + 1.0) + 0.5 * root;
  // omega2 * omega3 = q (1 - eta^2/8); the product form avoids cancellation for q << 1.
  const double omega2 = q * (1.0 - eta * eta / 8.0) / omega3;
  return {-q, omega2, omega3};
}

Mat6 BogoliubovBasis::inverse() const {
  const Mat6 Z = parity_metric();
  return Z * U.adjoint() * Z;
}

BogoliubovBasis diagonalize(const NambuMatrix& L) {
  const Dispersion analytic = analytic_dispersion(L.params);
  const auto target = analytic.as_array();
  for (int i = 0; i < kModes; ++i) {
    for (int j = i + 1; j < kModes; ++j) {
      if (std::abs(target[i] - target[j]) < kDegeneracyThreshold) {
        throw Error(ErrorKind::DegenerateModes,
                    "modes " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                        " coincide at " + describe(L.params) + "; perturb q");
      }
    }
  }

  const Mat6 Z = parity_metric();
  Eigen::ComplexEigenSolver<Mat6> solver(Z * L.entries, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NonCanonical, "eigensolver did not converge at " + describe(L.params));
  }

  Eigen::Matrix<Complex, 6, 3> particles;
  int positive = 0;
  for (int k = 0; k < 6; ++k) {
    if (std::abs(solver.eigenvalues()(k).imag()) > Real(kDispersionTolerance)) {
      throw Error(ErrorKind::NonCanonical, "complex eigenvalue of Z L at " + describe(L.params));
    }
    Vec6 v = solver.eigenvectors().col(k);
    const Real norm = (v.adjoint() * Z * v)(0, 0).real();
    if (std::abs(norm) < 1e-14L) {
      throw Error(ErrorKind::NonCanonical, "eigenvector with vanishing symplectic norm at " + describe(L.params));
    }
    if (norm > 0) {
      if (positive == kModes) {
        throw Error(ErrorKind::NonCanonical, "more than three positive-norm modes at " + describe(L.params));
      }
      particles.col(positive++) = v / std::sqrt(norm);
    }
  }
  if (positive != kModes) {
    throw Error(ErrorKind::NonCanonical, "fewer than three positive-norm modes at " + describe(L.params));
  }

  particles = z_orthonormalize(particles);

  std::array<Real, 3> numeric{};
  for (int j = 0; j < kModes; ++j) {
    // Z-norm is one, so the Rayleigh quotient of Z L reduces to u^dag L u.
    numeric[j] = (particles.col(j).adjoint() * L.entries * particles.col(j))(0, 0).real();
  }

  // Label by the permutation that best matches the closed form.
  std::array<int, 3> perm{0, 1, 2};
  std::array<int, 3> best_perm = perm;
  Real best_dev = std::numeric_limits<Real>::infinity();
  do {
    Real dev = 0;
    for (int j = 0; j < kModes; ++j) dev = std::max(dev, std::abs(numeric[perm[j]] - Real(target[j])));
    if (dev < best_dev) {
      best_dev = dev;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (best_dev > Real(kDispersionTolerance)) {
    std::ostringstream os;
    os << "eigenvalues deviate from the closed-form dispersion by " << static_cast<double>(best_dev) << " at "
       << describe(L.params);
    throw Error(ErrorKind::NonCanonical, os.str());
  }

  BogoliubovBasis basis;
  Eigen::Matrix<Complex, 6, 3> ordered;
  for (int j = 0; j < kModes; ++j) {
    Vec6 u = particles.col(best_perm[j]);
    // Global phase: largest-magnitude component real and positive.
    int pivot = 0;
    for (int i = 1; i < 6; ++i) {
      if (std::abs(u(i)) > std::abs(u(pivot))) pivot = i;
    }
    u *= std::conj(u(pivot)) / std::abs(u(pivot));
    u(pivot) = Complex(u(pivot).real(), 0.0L);
    ordered.col(j) = u;
    basis.omegas[j] = numeric[best_perm[j]];
  }
  basis.U = assemble(ordered);

  const double residual = verify_canonical(basis);
  if (residual > kNonCanonicalThreshold) {
    throw Error(ErrorKind::NonCanonical,
                "canonical residual " + std::to_string(residual) + " at " + describe(L.params));
  }
  return basis;
}

BogoliubovBasis decoupled_basis(const ModelParams& params) {
  params.validate();
  if (params.eta != 0.0) throw Error(ErrorKind::InvalidParameters, "decoupled basis needs eta = 0");
  if (params.q < kDegeneracyThreshold) {
    throw Error(ErrorKind::DegenerateModes, "Stokes and anti-Stokes frequencies coincide at q = 0");
  }
  // Bare modes: Stokes at -q, phonon at 1, anti-Stokes at q; omega2 <= omega3.
  const std::array<int, 3> order = params.q <= 1.0 ? std::array<int, 3>{kStokes, kAntiStokes, kPhonon}
                                                   : std::array<int, 3>{kStokes, kPhonon, kAntiStokes};
  const std::array<Real, 3> bare{-Real(params.q), Real(1), Real(params.q)};
  Eigen::Matrix<Complex, 6, 3> particles = Eigen::Matrix<Complex, 6, 3>::Zero();
  BogoliubovBasis basis;
  for (int j = 0; j < kModes; ++j) {
    particles(order[j], j) = Real(1);
    basis.omegas[j] = bare[order[j]];
  }
  basis.U = assemble(particles);
  return basis;
}

BogoliubovBasis bogoliubov_basis(const ModelParams& params) {
  if (params.eta == 0.0) return decoupled_basis(params);
  return diagonalize(build_nambu_matrix(params));
}

double verify_canonical(const Mat6& U) {
  const Mat6 Z = parity_metric();
  return static_cast<double>(max_abs(U * Z * U.adjoint() * Z - Mat6::Identity()));
}

double verify_canonical(const BogoliubovBasis& basis) { return verify_canonical(basis.U); }

double eigen_relation_residual(const NambuMatrix& L, const BogoliubovBasis& basis) {
  const Mat6 Z = parity_metric();
  Mat6 ZW = Mat6::Zero();
  for (int j = 0; j < kModes; ++j) {
    ZW(j, j) = basis.omegas[j];
    ZW(j + kModes, j + kModes) = -basis.omegas[j];
  }
  return static_cast<double>(max_abs(Z * L.entries * basis.U - basis.U * ZW));
}

std::array<Complex, 6> nambu_spectrum(const NambuMatrix& L) {
  Eigen::ComplexEigenSolver<Mat6> solver(parity_metric() * L.entries, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NonCanonical, "eigensolver did not converge");
  std::array<Complex, 6> values;
  for (int k = 0; k < 6; ++k) values[k] = solver.eigenvalues()(k);
  std::sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) { return a.real() < b.real(); });
  return values;
}

}  // namespace ramaniton
