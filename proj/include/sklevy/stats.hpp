#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sklevy::stats {

double mean(std::span<const double> x);
/// Unbiased sample standard deviation; 0 for fewer than two values.
double stddev(std::span<const double> x);
/// Linear-interpolation quantile (type 7) of the sorted copy of x, p in [0,1].
double quantile(std::span<const double> x, double p);
double median(std::span<const double> x);
/// Mean after dropping floor(fraction * n) values at each end.
double trimmed_mean(std::span<const double> x, double fraction);
/// Normal-approximation 95% half-width 1.96 s / sqrt(n).
double ci95_half_width(std::span<const double> x);

struct LinearFit {
  double slope;
  double intercept;
  double r_squared;
};

/// Ordinary least squares y = intercept + slope x.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace sklevy::stats
