#pragma once

// Data-parallel inner loops. Every variant must reproduce the scalar
// reference bit for bit: only exact operations (max, abs) are reordered,
// and arithmetic is lane-wise with the same operation order.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace sklevy::kernels {

/// Replicate lanes processed together by the batched OU recursion.
inline constexpr std::size_t kOuLanes = 4;

struct KernelTable {
  std::string_view name;

  // max_k |a[k] - b[k]|, 0 for n == 0.
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);

  // max_k |a[k]|, 0 for n == 0.
  double (*max_abs)(const double* a, std::size_t n);

  // out[k] = (cx * x[k] + y[k]) + cz * z[k]
  void (*combine3)(const double* x, double cx, const double* y, const double* z, double cz,
                   double* out, std::size_t n);

  // kOuLanes independent recursions z <- a z + dL on lane-interleaved
  // increments (step k, lane l at incr[k * kOuLanes + l]), z(0) = 0.
  // Writes the final state and the running max of |z| per lane.
  void (*ou_lanes)(const double* incr, std::size_t n_steps, double a, double* z_final,
                   double* sup_abs);
};

const KernelTable& scalar_table();

/// Variants compiled in and supported by the running CPU, scalar first.
std::vector<const KernelTable*> available_tables();

/// Table used by the library. Chooses the widest supported variant unless
/// the environment variable SKLEVY_KERNELS names another one ("scalar",
/// "avx2", "neon").
const KernelTable& active();

/// Overrides the active table; returns false if `name` is unavailable.
bool select(std::string_view name);

// Convenience wrappers over active().
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
void combine3(std::span<const double> x, double cx, std::span<const double> y,
              std::span<const double> z, double cz, std::span<double> out);

}  // namespace sklevy::kernels
