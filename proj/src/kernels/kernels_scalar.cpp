#include "kernels_impl.hpp"

namespace ramaniton::kernels::detail {

namespace {

void multiply_scalar(const cd* a, const cd* b, cd* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double re = a[k].real() * b[k].real() - a[k].imag() * b[k].imag();
    const double im = a[k].real() * b[k].imag() + a[k].imag() * b[k].real();
    out[k] = {re, im};
  }
}

void gemv_scalar(const cd* A, std::size_t rows, std::size_t cols, const cd* x, cd* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    const cd* column = A + j * rows;
    const double xr = x[j].real();
    const double xi = x[j].imag();
    for (std::size_t i = 0; i < rows; ++i) {
      const double re = column[i].real() * xr - column[i].imag() * xi;
      const double im = column[i].imag() * xr + column[i].real() * xi;
      y[i] = {y[i].real() + re, y[i].imag() + im};
    }
  }
}

double weighted_norm_scalar(const cd* psi, const double* w, std::size_t n) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += w[k] * (psi[k].real() * psi[k].real() + psi[k].imag() * psi[k].imag());
  }
  return sum;
}

cd gather_dot_scalar(const cd* psi, const std::int32_t* partner, const double* w, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const cd a = psi[partner[k]];
    const cd b = psi[k];
    re += w[k] * (a.real() * b.real() + a.imag() * b.imag());
    im += w[k] * (a.real() * b.imag() - a.imag() * b.real());
  }
  return {re, im};
}

}  // namespace

const KernelTable kScalarTable{Isa::Scalar, multiply_scalar, gemv_scalar, weighted_norm_scalar, gather_dot_scalar};

}  // namespace ramaniton::kernels::detail
