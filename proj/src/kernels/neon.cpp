#include <arm_neon.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace sklevy::kernels {

namespace {

inline double hmax(float64x2_t v) {
  const double l0 = vgetq_lane_f64(v, 0);
  const double l1 = vgetq_lane_f64(v, 1);
  return l1 > l0 ? l1 : l0;
}

double max_abs_diff_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    acc = vmaxq_f64(vabsq_f64(vsubq_f64(vld1q_f64(a + k), vld1q_f64(b + k))), acc);
  }
  double m = hmax(acc);
  for (; k < n; ++k) {
    const double d = std::fabs(a[k] - b[k]);
    m = d > m ? d : m;
  }
  return m;
}

double max_abs_neon(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) acc = vmaxq_f64(vabsq_f64(vld1q_f64(a + k)), acc);
  double m = hmax(acc);
  for (; k < n; ++k) {
    const double d = std::fabs(a[k]);
    m = d > m ? d : m;
  }
  return m;
}

void combine3_neon(const double* x, double cx, const double* y, const double* z, double cz,
                   double* out, std::size_t n) {
  const float64x2_t vcx = vdupq_n_f64(cx);
  const float64x2_t vcz = vdupq_n_f64(cz);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    // vmulq + vaddq, never vfmaq: the scalar reference rounds twice.
    const float64x2_t t = vaddq_f64(vmulq_f64(vcx, vld1q_f64(x + k)), vld1q_f64(y + k));
    vst1q_f64(out + k, vaddq_f64(t, vmulq_f64(vcz, vld1q_f64(z + k))));
  }
  for (; k < n; ++k) out[k] = (cx * x[k] + y[k]) + cz * z[k];
}

void ou_lanes_neon(const double* incr, std::size_t n_steps, double a, double* z_final,
                   double* sup_abs) {
  static_assert(kOuLanes == 4, "NEON OU kernel assumes four lanes");
  const float64x2_t va = vdupq_n_f64(a);
  float64x2_t z0 = vdupq_n_f64(0.0), z1 = vdupq_n_f64(0.0);
  float64x2_t m0 = vdupq_n_f64(0.0), m1 = vdupq_n_f64(0.0);
  for (std::size_t k = 0; k < n_steps; ++k) {
    z0 = vaddq_f64(vmulq_f64(va, z0), vld1q_f64(incr + k * 4));
    z1 = vaddq_f64(vmulq_f64(va, z1), vld1q_f64(incr + k * 4 + 2));
    m0 = vmaxq_f64(vabsq_f64(z0), m0);
    m1 = vmaxq_f64(vabsq_f64(z1), m1);
  }
  vst1q_f64(z_final, z0);
  vst1q_f64(z_final + 2, z1);
  vst1q_f64(sup_abs, m0);
  vst1q_f64(sup_abs + 2, m1);
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{"neon", max_abs_diff_neon, max_abs_neon, combine3_neon,
                                 ou_lanes_neon};
  return table;
}

}  // namespace sklevy::kernels
