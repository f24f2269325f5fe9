#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "kernels_internal.hpp"

namespace sklevy::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(SKLEVY_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* find(std::string_view name) {
  for (const KernelTable* t : available_tables()) {
    if (t->name == name) return t;
  }
  return nullptr;
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("SKLEVY_KERNELS"); env != nullptr && *env != '\0') {
    if (const KernelTable* t = find(env)) return t;
  }
  return available_tables().back();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> tables{&scalar_table()};
#if defined(SKLEVY_HAVE_AVX2)
  if (cpu_has_avx2()) tables.push_back(&avx2_table());
#endif
#if defined(SKLEVY_HAVE_NEON)
  tables.push_back(&neon_table());
#endif
  return tables;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

bool select(std::string_view name) {
  const KernelTable* t = find(name);
  if (t == nullptr) return false;
  current().store(t, std::memory_order_release);
  return true;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: length mismatch");
  return active().max_abs_diff(a.data(), b.data(), a.size());
}

double max_abs(std::span<const double> a) { return active().max_abs(a.data(), a.size()); }

void combine3(std::span<const double> x, double cx, std::span<const double> y,
              std::span<const double> z, double cz, std::span<double> out) {
  if (y.size() != x.size() || z.size() != x.size() || out.size() != x.size()) {
    throw std::invalid_argument("combine3: length mismatch");
  }
  active().combine3(x.data(), cx, y.data(), z.data(), cz, out.data(), x.size());
}

}  // namespace sklevy::kernels
