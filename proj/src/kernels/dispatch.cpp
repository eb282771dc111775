#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"
#include "ramaniton/error.hpp"

namespace ramaniton::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(RAMANITON_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select_table() {
  const char* env = std::getenv("RAMANITON_SIMD");
  const std::string_view choice = env ? env : "auto";
  if (choice == "scalar") return scalar_table();
  if (const KernelTable* simd = avx2_table()) return *simd;
  return scalar_table();
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidParameters, what);
}

}  // namespace

const char* to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_table() { return detail::kScalarTable; }

const KernelTable* avx2_table() {
#ifdef RAMANITON_HAVE_AVX2_KERNELS
  static const bool supported = cpu_has_avx2();
  return supported ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_table() {
  static const KernelTable& table = select_table();
  return table;
}

void complex_multiply(std::span<const cd> a, std::span<const cd> b, std::span<cd> out) {
  require(a.size() == b.size() && out.size() == a.size(), "complex_multiply: size mismatch");
  active_table().complex_multiply(a.data(), b.data(), out.data(), a.size());
}

void complex_gemv(std::span<const cd> column_major, std::size_t rows, std::size_t cols, std::span<const cd> x,
                  std::span<cd> y) {
  require(column_major.size() == rows * cols && x.size() == cols && y.size() == rows, "complex_gemv: size mismatch");
  active_table().complex_gemv(column_major.data(), rows, cols, x.data(), y.data());
}

double weighted_norm(std::span<const cd> psi, std::span<const double> w) {
  require(psi.size() == w.size(), "weighted_norm: size mismatch");
  return active_table().weighted_norm(psi.data(), w.data(), psi.size());
}

cd gather_dot(std::span<const cd> psi, std::span<const std::int32_t> partner, std::span<const double> w) {
  require(partner.size() == psi.size() && w.size() == psi.size(), "gather_dot: size mismatch");
  for (const std::int32_t p : partner) {
    require(p >= 0 && static_cast<std::size_t>(p) < psi.size(), "gather_dot: partner index out of range");
  }
  return active_table().gather_dot(psi.data(), partner.data(), w.data(), psi.size());
}

}  // namespace ramaniton::kernels
