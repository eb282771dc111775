// Compiled with -mavx2 -mfma; only reached through avx2_table() after a CPU check.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace ramaniton::kernels::detail {

namespace {

// Two interleaved complex doubles per register: [re0 im0 re1 im1].
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_swap = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_swap, b_im));
}

// conj(a) * b
inline __m256d cmul_conj(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d b_swap = _mm256_permute_pd(b, 0x5);
  return _mm256_fmsubadd_pd(a_re, b, _mm256_mul_pd(a_im, b_swap));
}

// [w0 w0 w1 w1]
inline __m256d widen_weights(const double* w) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w)), 0x50);
}

inline double* raw(cd* p) { return reinterpret_cast<double*>(p); }
inline const double* raw(const cd* p) { return reinterpret_cast<const double*>(p); }

void multiply_avx2(const cd* a, const cd* b, cd* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    _mm256_storeu_pd(raw(out + k), cmul(_mm256_loadu_pd(raw(a + k)), _mm256_loadu_pd(raw(b + k))));
  }
  for (; k < n; ++k) {
    const double re = a[k].real() * b[k].real() - a[k].imag() * b[k].imag();
    const double im = a[k].real() * b[k].imag() + a[k].imag() * b[k].real();
    out[k] = {re, im};
  }
}

void gemv_avx2(const cd* A, std::size_t rows, std::size_t cols, const cd* x, cd* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = 0.0;
  const std::size_t paired = rows & ~std::size_t{1};
  for (std::size_t j = 0; j < cols; ++j) {
    const cd* column = A + j * rows;
    const __m256d xv = _mm256_setr_pd(x[j].real(), x[j].imag(), x[j].real(), x[j].imag());
    for (std::size_t i = 0; i < paired; i += 2) {
      const __m256d acc = _mm256_loadu_pd(raw(y + i));
      _mm256_storeu_pd(raw(y + i), _mm256_add_pd(acc, cmul(_mm256_loadu_pd(raw(column + i)), xv)));
    }
    if (paired < rows) {
      const std::size_t i = paired;
      const double re = column[i].real() * x[j].real() - column[i].imag() * x[j].imag();
      const double im = column[i].imag() * x[j].real() + column[i].real() * x[j].imag();
      y[i] = {y[i].real() + re, y[i].imag() + im};
    }
  }
}

double weighted_norm_avx2(const cd* psi, const double* w, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d p0 = _mm256_loadu_pd(raw(psi + k));
    const __m256d p1 = _mm256_loadu_pd(raw(psi + k + 2));
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(p0, p0), widen_weights(w + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_mul_pd(p1, p1), widen_weights(w + k + 2), acc1);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; k < n; ++k) sum += w[k] * (psi[k].real() * psi[k].real() + psi[k].imag() * psi[k].imag());
  return sum;
}

cd gather_dot_avx2(const cd* psi, const std::int32_t* partner, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d a = _mm256_set_m128d(_mm_loadu_pd(raw(psi + partner[k + 1])), _mm_loadu_pd(raw(psi + partner[k])));
    const __m256d b = _mm256_loadu_pd(raw(psi + k));
    acc = _mm256_fmadd_pd(cmul_conj(a, b), widen_weights(w + k), acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double re = lanes[0] + lanes[2];
  double im = lanes[1] + lanes[3];
  for (; k < n; ++k) {
    const cd a = psi[partner[k]];
    const cd b = psi[k];
    re += w[k] * (a.real() * b.real() + a.imag() * b.imag());
    im += w[k] * (a.real() * b.imag() - a.imag() * b.real());
  }
  return {re, im};
}

}  // namespace

const KernelTable kAvx2Table{Isa::Avx2, multiply_avx2, gemv_avx2, weighted_norm_avx2, gather_dot_avx2};

}  // namespace ramaniton::kernels::detail
