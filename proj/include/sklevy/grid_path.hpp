#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace sklevy {

enum class Interp {
  CadlagStep,  // value of the largest node <= t
  Linear,      // linear between nodes
};

std::string_view to_string(Interp interp);

/// A d-dimensional path sampled on 0 = t_0 < ... < t_n = T.
class GridPath {
 public:
  GridPath() = default;

  /// `values` is row-major, times.size() x dim. Throws GridError / DomainError
  /// on a malformed grid or value buffer.
  GridPath(std::vector<double> times, std::vector<double> values, std::size_t dim,
           Interp interp);

  /// Scalar-valued convenience constructor.
  static GridPath scalar(std::vector<double> times, std::vector<double> values, Interp interp);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return times_.size(); }
  Interp interp() const { return interp_; }
  double horizon() const { return times_.back(); }

  std::span<const double> times() const { return times_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> node(std::size_t k) const { return {values_.data() + k * dim_, dim_}; }

  /// Value at t in [0, T] under the path's interpolation convention.
  void evaluate(double t, std::span<double> out) const;

  /// lim_{s -> t-} x(s) for t in (0, T]; equals evaluate(t) for linear paths.
  void left_limit(double t, std::span<double> out) const;

  /// Same path, same values, interpolation tag replaced.
  GridPath with_interp(Interp interp) const;

 private:
  // Index k of the segment [t_k, t_{k+1}) containing t (n-1 for t = T).
  std::size_t segment(double t) const;

  std::vector<double> times_;
  std::vector<double> values_;
  std::size_t dim_ = 1;
  Interp interp_ = Interp::CadlagStep;
};

}  // namespace sklevy
