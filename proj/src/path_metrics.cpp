#include "sklevy/path_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "metrics_internal.hpp"
#include "sklevy/errors.hpp"
#include "sklevy/kernels/kernels.hpp"

namespace sklevy {

namespace detail {

void check_comparable(const GridPath& x, const GridPath& y) {
  if (x.size() < 2 || y.size() < 2) throw DomainError("paths must have at least two nodes");
  if (x.dim() != y.dim()) throw DomainError("paths have different dimensions");
  const double tx = x.horizon();
  const double ty = y.horizon();
  if (std::fabs(tx - ty) > 1e-12 * std::max(tx, ty)) {
    throw DomainError("paths have mismatched horizons");
  }
}

bool same_grid(const GridPath& x, const GridPath& y) {
  return x.size() == y.size() && std::equal(x.times().begin(), x.times().end(), y.times().begin());
}

std::vector<double> merged_times(const GridPath& x, const GridPath& y) {
  std::vector<double> t;
  t.reserve(x.size() + y.size());
  std::merge(x.times().begin(), x.times().end(), y.times().begin(), y.times().end(),
             std::back_inserter(t));
  t.erase(std::unique(t.begin(), t.end()), t.end());
  // Horizons agree to 1e-12; collapse a near-duplicate terminal node.
  while (t.size() > 2 && t[t.size() - 1] - t[t.size() - 2] <= 1e-12 * t.back()) {
    t.erase(t.end() - 2);
  }
  return t;
}

double norm(std::span<const double> a, std::span<const double> b) {
  if (a.size() == 1) return std::fabs(a[0] - b[0]);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace detail

namespace {

// Walks the merged grid and reports, per merged node, the values of both
// paths at the node and their left limits.
template <typename Visit>
void walk_merged(const GridPath& x, const GridPath& y, Visit&& visit) {
  const std::vector<double> t = detail::merged_times(x, y);
  const std::size_t d = x.dim();
  std::vector<double> xv(d), yv(d), xl(d), yl(d);
  for (std::size_t r = 0; r < t.size(); ++r) {
    const double tr = r + 1 == t.size() ? x.horizon() : t[r];
    x.evaluate(tr, xv);
    y.evaluate(tr, yv);
    if (r > 0) {
      x.left_limit(tr, xl);
      y.left_limit(tr, yl);
    }
    visit(r, t, xv, yv, xl, yl);
  }
}

// int_0^1 |p + s (q - p)| ds.
double segment_abs_integral(std::span<const double> p, std::span<const double> q) {
  if (p.size() == 1) {
    const double a = p[0];
    const double b = q[0];
    if ((a >= 0.0) == (b >= 0.0) || a == 0.0 || b == 0.0) return 0.5 * (std::fabs(a) + std::fabs(b));
    return 0.5 * (a * a + b * b) / (std::fabs(a) + std::fabs(b));
  }
  double aa = 0.0, bb = 0.0, cc = 0.0, cross = 0.0;
  const std::size_t d = p.size();
  for (std::size_t i = 0; i < d; ++i) {
    const double di = q[i] - p[i];
    aa += di * di;
    bb += p[i] * di;
    cc += p[i] * p[i];
    for (std::size_t j = i + 1; j < d; ++j) {
      const double cij = p[i] * (q[j] - p[j]) - p[j] * di;
      cross += cij * cij;
    }
  }
  if (aa <= 1e-300) return std::sqrt(cc);
  // |p + s dq|^2 = aa ((s + bb/aa)^2 + r2), r2 = cross / aa^2 (Lagrange identity).
  const double r2 = cross / (aa * aa);
  const double r = std::sqrt(r2);
  auto antiderivative = [&](double u) {
    if (r == 0.0) return 0.5 * u * std::fabs(u);
    return 0.5 * (u * std::sqrt(u * u + r2) + r2 * std::asinh(u / r));
  };
  const double u0 = bb / aa;
  return std::sqrt(aa) * (antiderivative(1.0 + u0) - antiderivative(u0));
}

}  // namespace

double uniform_distance(const GridPath& x, const GridPath& y) {
  detail::check_comparable(x, y);
  if (detail::same_grid(x, y) && x.interp() == y.interp()) {
    // Left limits coincide with node values of the previous node (step) or
    // the node itself (linear), so the node values suffice.
    if (x.dim() == 1) return kernels::max_abs_diff(x.values(), y.values());
    double m = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) m = std::max(m, detail::norm(x.node(k), y.node(k)));
    return m;
  }
  double m = 0.0;
  walk_merged(x, y, [&](std::size_t r, const std::vector<double>&, std::span<const double> xv,
                        std::span<const double> yv, std::span<const double> xl,
                        std::span<const double> yl) {
    m = std::max(m, detail::norm(xv, yv));
    if (r > 0) m = std::max(m, detail::norm(xl, yl));
  });
  return m;
}

double l1_distance(const GridPath& x, const GridPath& y) {
  detail::check_comparable(x, y);
  const std::size_t d = x.dim();
  std::vector<double> start(d), end(d);
  std::vector<double> prev_x(d), prev_y(d);
  double total = 0.0;
  double prev_t = 0.0;
  walk_merged(x, y, [&](std::size_t r, const std::vector<double>& t, std::span<const double> xv,
                        std::span<const double> yv, std::span<const double> xl,
                        std::span<const double> yl) {
    const double tr = r + 1 == t.size() ? x.horizon() : t[r];
    if (r > 0) {
      // On (t_{r-1}, t_r) the difference runs from its right value at
      // t_{r-1} to its left limit at t_r, linearly.
      for (std::size_t i = 0; i < d; ++i) {
        start[i] = prev_x[i] - prev_y[i];
        end[i] = xl[i] - yl[i];
      }
      total += (tr - prev_t) * segment_abs_integral(start, end);
    }
    std::copy(xv.begin(), xv.end(), prev_x.begin());
    std::copy(yv.begin(), yv.end(), prev_y.begin());
    prev_t = tr;
  });
  return total;
}

}  // namespace sklevy
