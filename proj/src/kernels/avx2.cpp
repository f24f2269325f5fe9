// Compiled with -mavx2 only; selected at runtime after a CPUID check.
// Keep this file free of standard-library templates so no AVX2-encoded
// inline function can leak into other translation units.

#include <immintrin.h>

#include "kernels_internal.hpp"

namespace sklevy::kernels {

namespace {

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline double hmax(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  double m = lanes[0];
  for (int l = 1; l < 4; ++l) m = lanes[l] > m ? lanes[l] : m;
  return m;
}

inline double abs_scalar(double x) { return x < 0.0 ? -x : (x == 0.0 ? 0.0 : x); }

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    acc = _mm256_max_pd(abs_pd(d), acc);
  }
  double m = hmax(acc);
  for (; k < n; ++k) {
    const double d = abs_scalar(a[k] - b[k]);
    m = d > m ? d : m;
  }
  return m;
}

double max_abs_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) acc = _mm256_max_pd(abs_pd(_mm256_loadu_pd(a + k)), acc);
  double m = hmax(acc);
  for (; k < n; ++k) {
    const double d = abs_scalar(a[k]);
    m = d > m ? d : m;
  }
  return m;
}

void combine3_avx2(const double* x, double cx, const double* y, const double* z, double cz,
                   double* out, std::size_t n) {
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vcz = _mm256_set1_pd(cz);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d t = _mm256_add_pd(_mm256_mul_pd(vcx, _mm256_loadu_pd(x + k)),
                                    _mm256_loadu_pd(y + k));
    _mm256_storeu_pd(out + k, _mm256_add_pd(t, _mm256_mul_pd(vcz, _mm256_loadu_pd(z + k))));
  }
  for (; k < n; ++k) out[k] = (cx * x[k] + y[k]) + cz * z[k];
}

void ou_lanes_avx2(const double* incr, std::size_t n_steps, double a, double* z_final,
                   double* sup_abs) {
  static_assert(kOuLanes == 4, "AVX2 OU kernel assumes four lanes");
  const __m256d va = _mm256_set1_pd(a);
  __m256d z = _mm256_setzero_pd();
  __m256d m = _mm256_setzero_pd();
  for (std::size_t k = 0; k < n_steps; ++k) {
    z = _mm256_add_pd(_mm256_mul_pd(va, z), _mm256_loadu_pd(incr + k * 4));
    m = _mm256_max_pd(abs_pd(z), m);
  }
  _mm256_storeu_pd(z_final, z);
  _mm256_storeu_pd(sup_abs, m);
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", max_abs_diff_avx2, max_abs_avx2, combine3_avx2,
                                 ou_lanes_avx2};
  return table;
}

}  // namespace sklevy::kernels
