#include <cmath>

#include "kernels_internal.hpp"

namespace sklevy::kernels {

namespace {

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = std::fabs(a[k] - b[k]);
    m = d > m ? d : m;
  }
  return m;
}

double max_abs_scalar(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = std::fabs(a[k]);
    m = d > m ? d : m;
  }
  return m;
}

void combine3_scalar(const double* x, double cx, const double* y, const double* z, double cz,
                     double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = (cx * x[k] + y[k]) + cz * z[k];
}

void ou_lanes_scalar(const double* incr, std::size_t n_steps, double a, double* z_final,
                     double* sup_abs) {
  for (std::size_t l = 0; l < kOuLanes; ++l) {
    double z = 0.0;
    double m = 0.0;
    for (std::size_t k = 0; k < n_steps; ++k) {
      z = a * z + incr[k * kOuLanes + l];
      const double az = std::fabs(z);
      m = az > m ? az : m;
    }
    z_final[l] = z;
    sup_abs[l] = m;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", max_abs_diff_scalar, max_abs_scalar, combine3_scalar,
                                 ou_lanes_scalar};
  return table;
}

}  // namespace sklevy::kernels
