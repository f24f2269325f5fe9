#include "sklevy/stable_noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sklevy/errors.hpp"

namespace sklevy {

void StableParams::validate() const {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw ParameterError("alpha must lie in (1,2), got " + std::to_string(alpha));
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ParameterError("c must be positive, got " + std::to_string(c));
  }
  if (dim < 1) throw ParameterError("dim must be at least 1");
}

std::vector<double> uniform_grid(double T, std::size_t n_steps) {
  if (!(T > 0.0) || !std::isfinite(T)) throw GridError("horizon T must be positive");
  if (n_steps < 1) throw GridError("grid needs at least one step");
  std::vector<double> t(n_steps + 1);
  const double n = static_cast<double>(n_steps);
  for (std::size_t k = 0; k <= n_steps; ++k) t[k] = T * static_cast<double>(k) / n;
  return t;
}

void validate_grid(std::span<const double> times) {
  if (times.size() < 2) throw GridError("grid needs at least two nodes");
  if (times.front() != 0.0) throw GridError("grid must start at t=0");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw GridError("grid must be strictly increasing (violated at node " +
                      std::to_string(k) + ")");
    }
  }
}

double sample_symmetric_stable_1d(double alpha, double sigma, RandomStream& rng) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw ParameterError("alpha must lie in (1,2)");
  if (!(sigma >= 0.0)) throw ParameterError("sigma must be nonnegative");
  const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
  const double w = rng.exponential();
  if (sigma == 0.0) return 0.0;
  const double x = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
  return sigma * x;
}

double sample_positive_stable(double beta, double gamma, RandomStream& rng) {
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("beta must lie in (0,1)");
  if (!(gamma >= 0.0)) throw ParameterError("gamma must be nonnegative");
  // Kanter / Chambers-Mallows-Stuck with skewness 1; unit draw has
  // Laplace transform exp(-u^beta).
  const double u = std::numbers::pi * rng.uniform_open();
  const double w = rng.exponential();
  const double s = std::sin(beta * u) / std::pow(std::sin(u), 1.0 / beta) *
                   std::pow(std::sin((1.0 - beta) * u) / w, (1.0 - beta) / beta);
  return std::pow(gamma, 1.0 / beta) * s;
}

void sample_isotropic_increment(const StableParams& params, double dt, RandomStream& rng,
                                std::span<double> out) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  if (out.size() != params.dim) throw DomainError("output span has wrong dimension");
  if (params.dim == 1) {
    out[0] = sample_symmetric_stable_1d(params.alpha, std::pow(params.c * dt, 1.0 / params.alpha),
                                        rng);
    return;
  }
  const double s = sample_positive_stable(0.5 * params.alpha, params.c * dt, rng);
  const double scale = std::sqrt(2.0 * s);
  for (double& x : out) x = scale * rng.normal();
}

std::vector<double> sample_isotropic_increment(const StableParams& params, double dt,
                                               RandomStream& rng) {
  params.validate();
  std::vector<double> out(params.dim);
  sample_isotropic_increment(params, dt, rng, out);
  return out;
}

NoiseRealization sample_noise_realization(const StableParams& params,
                                          std::span<const double> grid, RandomStream& rng,
                                          std::optional<SplitSpec> split) {
  params.validate();
  validate_grid(grid);
  NoiseRealization noise;
  noise.times.assign(grid.begin(), grid.end());
  noise.dim = params.dim;
  const std::size_t n = noise.steps();
  noise.increments.resize(n * params.dim);
  for (std::size_t k = 0; k < n; ++k) {
    sample_isotropic_increment(params, grid[k + 1] - grid[k], rng,
                               {noise.increments.data() + k * params.dim, params.dim});
  }
  if (!split) return noise;

  if (params.dim != 1) {
    throw ParameterError("split mode requires dim=1 (isotropic Levy density constant unknown)");
  }
  if (!(split->levy_density_k > 0.0)) throw ParameterError("levy density k must be positive");
  noise.split = true;
  const double alpha = params.alpha;
  const double T = noise.horizon();
  // Total mass of nu on {|x| >= 1}: 2 k / alpha.
  const double rate = 2.0 * split->levy_density_k / alpha;
  double t = 0.0;
  while (true) {
    t += rng.exponential() / rate;
    if (t >= T) break;
    const double magnitude = std::pow(rng.uniform_open(), -1.0 / alpha);
    const double sign = rng.uniform_open() < 0.5 ? -1.0 : 1.0;
    auto it = std::upper_bound(noise.times.begin(), noise.times.end(), t);
    const auto step = static_cast<std::size_t>(std::distance(noise.times.begin(), it)) - 1;
    noise.large_jumps.push_back({t, std::min(step, n - 1), {sign * magnitude}});
  }
  noise.small_increments = noise.increments;
  for (const JumpEvent& j : noise.large_jumps) noise.small_increments[j.step] -= j.x[0];
  return noise;
}

std::vector<double> NoiseRealization::cumulative() const {
  std::vector<double> path((steps() + 1) * dim, 0.0);
  for (std::size_t k = 0; k < steps(); ++k) {
    for (std::size_t i = 0; i < dim; ++i) {
      path[(k + 1) * dim + i] = path[k * dim + i] + increments[k * dim + i];
    }
  }
  return path;
}

std::vector<double> NoiseRealization::large_jump_sum(std::size_t k) const {
  std::vector<double> sum(dim, 0.0);
  for (const JumpEvent& j : large_jumps) {
    if (j.step != k) continue;
    for (std::size_t i = 0; i < dim; ++i) sum[i] += j.x[i];
  }
  return sum;
}

NoiseRealization NoiseRealization::zeros(std::vector<double> times, std::size_t dim) {
  validate_grid(times);
  NoiseRealization noise;
  noise.dim = dim;
  noise.increments.assign((times.size() - 1) * dim, 0.0);
  noise.times = std::move(times);
  return noise;
}

std::complex<double> empirical_chf(std::span<const double> samples, std::size_t dim,
                                   std::span<const double> h) {
  if (dim == 0 || h.size() != dim) throw DomainError("h must have the samples' dimension");
  if (samples.empty()) throw EmptyInputError("empirical_chf needs at least one sample");
  if (samples.size() % dim != 0) throw DomainError("sample buffer is not a multiple of dim");
  const std::size_t n = samples.size() / dim;
  double re = 0.0;
  double im = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double phase = 0.0;
    for (std::size_t i = 0; i < dim; ++i) phase += samples[j * dim + i] * h[i];
    re += std::cos(phase);
    im += std::sin(phase);
  }
  return {re / static_cast<double>(n), im / static_cast<double>(n)};
}

}  // namespace sklevy
