#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision inner loops. Every routine has a portable scalar
// reference implementation plus optional AVX2 (x86-64) and NEON (aarch64)
// variants; the widest variant the CPU supports is picked once at startup.
// Set MORALFRAME_SIMD=scalar in the environment to force the reference path.
namespace moralframe::kernels {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_norm)(const double* a, std::size_t n);
  // out[r] = dot(rows + r*dim, query) for r in [0, n_rows)
  void (*dot_rows)(const double* rows, std::size_t n_rows, std::size_t dim,
                   const double* query, double* out);
};

// Reference kernels. Summation is strictly left to right.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_norm(const double* a, std::size_t n);
void dot_rows(const double* rows, std::size_t n_rows, std::size_t dim, const double* query,
              double* out);
}  // namespace scalar

// Returns the table for `isa`, or nullptr if it was not compiled in or the
// CPU lacks the instructions.
const KernelTable* table_for(Isa isa);

// Table selected for this process.
const KernelTable& active();

std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline double squared_norm(std::span<const double> a) {
  return active().squared_norm(a.data(), a.size());
}

}  // namespace moralframe::kernels
