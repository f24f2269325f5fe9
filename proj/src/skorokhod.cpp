#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "metrics_internal.hpp"
#include "sklevy/errors.hpp"
#include "sklevy/path_metrics.hpp"

namespace sklevy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Distance from point s to the closed interval [lo, hi].
inline double dist_to(double s, double lo, double hi) {
  if (s < lo) return lo - s;
  if (s > hi) return s - hi;
  return 0.0;
}

// Lattice cell (i, j): segment i of x, [p_i, p_{i+1}), overlaps segment j of
// y, [q_j, q_{j+1}), under lambda. Entering (i, j) from
//   (i-1, j):   x jumps at p_i while y stays in segment j, lambda(p_i) in (q_j, q_{j+1});
//   (i, j-1):   y jumps at q_j while x stays in segment i, lambda^{-1}(q_j) in (p_i, p_{i+1});
//   (i-1, j-1): lambda(p_i) = q_j.
// Cells are restricted to gap(i, j) <= band; any lambda visiting a cell has
// ||lambda - id|| >= gap(i, j).
class MatchingLattice {
 public:
  MatchingLattice(const GridPath& x, const GridPath& y)
      : x_(x), y_(y), p_(x.times()), q_(y.times()), n_(p_.size() - 1), m_(q_.size() - 1) {
    // Terminal nodes are identified (horizons agree to 1e-12).
  }

  double solve(double band) const {
    const double T = std::max(p_[n_], q_[m_]);
    const bool full = band >= T;
    std::vector<double> prev, cur;
    std::size_t prev_lo = 0, prev_hi = 0;  // [lo, hi) in j
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (full) {
        lo = 0;
        hi = m_;
      } else {
        // First j with q_{j+1} >= p_i - band; last j with q_j <= p_{i+1} + band.
        lo = static_cast<std::size_t>(
            std::lower_bound(q_.begin() + 1, q_.end(), p_[i] - band) - (q_.begin() + 1));
        hi = static_cast<std::size_t>(
            std::upper_bound(q_.begin(), q_.end() - 1, p_[i + 1] + band) - q_.begin());
        lo = std::min(lo, m_);
        hi = std::max(std::min(hi, m_), lo);
      }
      cur.assign(hi - lo, kInf);
      for (std::size_t j = lo; j < hi; ++j) {
        double best = kInf;
        if (i == 0 && j == 0) {
          best = 0.0;
        } else {
          if (i > 0 && j >= prev_lo && j < prev_hi) {
            best = std::min(best, std::max(prev[j - prev_lo], dist_to(p_[i], q_[j], q_[j + 1])));
          }
          if (j > lo) {
            best = std::min(best, std::max(cur[j - 1 - lo], dist_to(q_[j], p_[i], p_[i + 1])));
          }
          if (i > 0 && j > 0 && j - 1 >= prev_lo && j - 1 < prev_hi) {
            best = std::min(best, std::max(prev[j - 1 - prev_lo], std::fabs(p_[i] - q_[j])));
          }
        }
        if (best < kInf) best = std::max(best, detail::norm(x_.node(i), y_.node(j)));
        cur[j - lo] = best;
      }
      prev.swap(cur);
      prev_lo = lo;
      prev_hi = hi;
    }
    if (!(m_ - 1 >= prev_lo && m_ - 1 < prev_hi)) return kInf;
    const double inner = prev[m_ - 1 - prev_lo];
    return std::max(inner, detail::norm(x_.node(n_), y_.node(m_)));
  }

  double default_band() const {
    double h = 0.0;
    for (std::size_t i = 0; i < n_; ++i) h = std::max(h, p_[i + 1] - p_[i]);
    for (std::size_t j = 0; j < m_; ++j) h = std::max(h, q_[j + 1] - q_[j]);
    return std::max(8.0 * h, p_[n_] / 32.0);
  }

 private:
  const GridPath& x_;
  const GridPath& y_;
  std::span<const double> p_;
  std::span<const double> q_;
  std::size_t n_;
  std::size_t m_;
};

}  // namespace

double skorokhod_distance(const GridPath& x, const GridPath& y, const SkorokhodOptions& options) {
  detail::check_comparable(x, y);
  if (x.interp() != Interp::CadlagStep || y.interp() != Interp::CadlagStep) {
    throw UnsupportedConvention("skorokhod_distance requires cadlag-step paths");
  }
  const MatchingLattice lattice(x, y);
  const double T = x.horizon();
  double band = options.initial_band > 0.0 ? options.initial_band : lattice.default_band();
  double r = lattice.solve(band);
  if (r <= band || band >= T) return r;
  // The banded value bounds the answer; a band of that width is exact.
  band = std::isfinite(r) ? r : T;
  return lattice.solve(band);
}

}  // namespace sklevy
