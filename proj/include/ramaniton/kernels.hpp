#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

// Data-parallel inner loops of the Fock-space oracle. Every kernel has a
// scalar reference implementation; an AVX2+FMA variant is used when the CPU
// supports it. RAMANITON_SIMD=scalar|avx2|auto overrides the choice.
namespace ramaniton::kernels {

using cd = std::complex<double>;

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  /// out[k] = a[k] * b[k]
  void (*complex_multiply)(const cd* a, const cd* b, cd* out, std::size_t n);
  /// y = A x, A column-major rows x cols
  void (*complex_gemv)(const cd* A, std::size_t rows, std::size_t cols, const cd* x, cd* y);
  /// sum_k w[k] |psi[k]|^2
  double (*weighted_norm)(const cd* psi, const double* w, std::size_t n);
  /// sum_k w[k] conj(psi[partner[k]]) psi[k]
  cd (*gather_dot)(const cd* psi, const std::int32_t* partner, const double* w, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 variant is not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

/// Table selected for this process (decided once, on first use).
const KernelTable& active_table();

void complex_multiply(std::span<const cd> a, std::span<const cd> b, std::span<cd> out);
void complex_gemv(std::span<const cd> column_major, std::size_t rows, std::size_t cols, std::span<const cd> x,
                  std::span<cd> y);
double weighted_norm(std::span<const cd> psi, std::span<const double> w);
cd gather_dot(std::span<const cd> psi, std::span<const std::int32_t> partner, std::span<const double> w);

}  // namespace ramaniton::kernels
