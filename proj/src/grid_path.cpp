#include "sklevy/grid_path.hpp"

#include <algorithm>

#include "sklevy/errors.hpp"
#include "sklevy/stable_noise.hpp"

namespace sklevy {

std::string_view to_string(Interp interp) {
  return interp == Interp::CadlagStep ? "cadlag-step" : "linear";
}

GridPath::GridPath(std::vector<double> times, std::vector<double> values, std::size_t dim,
                   Interp interp)
    : times_(std::move(times)), values_(std::move(values)), dim_(dim), interp_(interp) {
  validate_grid(times_);
  if (dim_ == 0) throw DomainError("path dimension must be positive");
  if (values_.size() != times_.size() * dim_) {
    throw DomainError("path needs one d-vector per grid node");
  }
}

GridPath GridPath::scalar(std::vector<double> times, std::vector<double> values, Interp interp) {
  return GridPath(std::move(times), std::move(values), 1, interp);
}

std::size_t GridPath::segment(double t) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto k = static_cast<std::size_t>(std::distance(times_.begin(), it));
  if (k == 0) return 0;
  return std::min(k - 1, times_.size() - 2);
}

void GridPath::evaluate(double t, std::span<double> out) const {
  if (out.size() != dim_) throw DomainError("evaluate: output has wrong dimension");
  if (t >= times_.back()) {
    std::copy_n(node(size() - 1).begin(), dim_, out.begin());
    return;
  }
  const std::size_t k = segment(t);
  const auto a = node(k);
  if (interp_ == Interp::CadlagStep || t <= times_[k]) {
    std::copy_n(a.begin(), dim_, out.begin());
    return;
  }
  const auto b = node(k + 1);
  const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = a[i] + w * (b[i] - a[i]);
}

void GridPath::left_limit(double t, std::span<double> out) const {
  if (interp_ == Interp::Linear || t <= 0.0) {
    evaluate(t, out);
    return;
  }
  // Largest node strictly below t.
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const auto k = static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
  std::copy_n(node(k).begin(), dim_, out.begin());
}

GridPath GridPath::with_interp(Interp interp) const {
  GridPath p = *this;
  p.interp_ = interp;
  return p;
}

}  // namespace sklevy
