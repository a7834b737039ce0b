#include <cstdlib>
#include <string_view>

#include "moralframe/kernels.hpp"

namespace moralframe::kernels {

#if defined(MORALFRAME_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double squared_norm(const double* a, std::size_t n);
void dot_rows(const double* rows, std::size_t n_rows, std::size_t dim, const double* query,
              double* out);
}  // namespace avx2
#endif

#if defined(MORALFRAME_HAVE_NEON)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double squared_norm(const double* a, std::size_t n);
void dot_rows(const double* rows, std::size_t n_rows, std::size_t dim, const double* query,
              double* out);
}  // namespace neon
#endif

namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::dot, &scalar::squared_norm, &scalar::dot_rows};

#if defined(MORALFRAME_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::dot, &avx2::squared_norm, &avx2::dot_rows};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

#if defined(MORALFRAME_HAVE_NEON)
// Advanced SIMD is mandatory on AArch64.
constexpr KernelTable kNeon{Isa::neon, &neon::dot, &neon::squared_norm, &neon::dot_rows};
#endif

const KernelTable& select() {
  if (const char* forced = std::getenv("MORALFRAME_SIMD")) {
    if (std::string_view(forced) == "scalar") return kScalar;
  }
  if (const KernelTable* t = table_for(Isa::avx2)) return *t;
  if (const KernelTable* t = table_for(Isa::neon)) return *t;
  return kScalar;
}

}  // namespace

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &kScalar;
    case Isa::avx2:
#if defined(MORALFRAME_HAVE_AVX2)
      if (cpu_has_avx2()) return &kAvx2;
#endif
      return nullptr;
    case Isa::neon:
#if defined(MORALFRAME_HAVE_NEON)
      return &kNeon;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

}  // namespace moralframe::kernels
