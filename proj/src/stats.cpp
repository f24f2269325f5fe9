#include "sklevy/stats.hpp"

#include <algorithm>
#include <cmath>

#include "sklevy/errors.hpp"

namespace sklevy::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw EmptyInputError("mean of an empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double quantile(std::span<const double> x, double p) {
  if (x.empty()) throw EmptyInputError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("quantile level must lie in [0,1]");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double pos = p * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return s[lo] + w * (s[hi] - s[lo]);
}

double median(std::span<const double> x) { return quantile(x, 0.5); }

double trimmed_mean(std::span<const double> x, double fraction) {
  if (x.empty()) throw EmptyInputError("trimmed mean of an empty sample");
  if (!(fraction >= 0.0 && fraction < 0.5)) throw ParameterError("trim fraction must lie in [0,0.5)");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const auto cut = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(s.size())));
  return mean(std::span<const double>(s).subspan(cut, s.size() - 2 * cut));
}

double ci95_half_width(std::span<const double> x) {
  if (x.empty()) throw EmptyInputError("confidence interval of an empty sample");
  return 1.96 * stddev(x) / std::sqrt(static_cast<double>(x.size()));
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("least_squares: length mismatch");
  if (x.size() < 2) throw ParameterError("least_squares needs at least two points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("least_squares: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  // A constant response is fitted perfectly by slope 0.
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace sklevy::stats
