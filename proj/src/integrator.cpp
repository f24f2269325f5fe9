#include "sklevy/integrator.hpp"

#include <bit>
#include <cmath>
#include <vector>

#include "sklevy/errors.hpp"

namespace sklevy {

StepCoefficients StepCoefficients::make(double h, double eps) {
  StepCoefficients c;
  c.h = h;
  c.decay = std::exp(-h / eps);
  c.relax = -std::expm1(-h / eps);
  c.vel_weight = eps * c.relax;
  c.drift_weight = h - c.vel_weight;
  return c;
}

void IncrementAudit::record(double x) {
  ++consumed;
  std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
  for (int b = 0; b < 8; ++b) {
    checksum ^= (bits & 0xffu);
    checksum *= 0x100000001b3ull;
    bits >>= 8;
  }
}

namespace {

// Step size of a uniform grid; throws GridError otherwise.
double uniform_step(const NoiseRealization& noise) {
  validate_grid(noise.times);
  const std::size_t n = noise.steps();
  const double T = noise.horizon();
  for (std::size_t k = 0; k <= n; ++k) {
    const double expected = T * static_cast<double>(k) / static_cast<double>(n);
    if (std::fabs(noise.times[k] - expected) > 1e-12 * T) {
      throw GridError("integrators require a uniform time grid");
    }
  }
  return T / static_cast<double>(n);
}

}  // namespace

void check_noise_matches(const ModelConfig& config, const NoiseRealization& noise) {
  if (noise.dim != config.stable.dim) throw DomainError("noise dimension does not match config");
  if (noise.steps() != config.n_steps) {
    throw DomainError("noise grid has " + std::to_string(noise.steps()) +
                      " steps, config expects " + std::to_string(config.n_steps));
  }
  if (std::fabs(noise.horizon() - config.T) > 1e-12 * config.T) {
    throw DomainError("noise horizon does not match config T");
  }
  if (noise.increments.size() != noise.steps() * noise.dim) {
    throw DomainError("noise increments do not fill the grid");
  }
  uniform_step(noise);
}

SlowFastPaths integrate_slow_fast(const ModelConfig& config, const NoiseRealization& noise,
                                  IncrementAudit* audit) {
  config.validate();
  check_noise_matches(config, noise);
  const std::size_t d = config.stable.dim;
  const std::size_t n = config.n_steps;
  const auto c = StepCoefficients::make(config.step(), config.eps);
  const double noise_gain = std::pow(config.eps, config.theta - 1.0);

  std::vector<double> U((n + 1) * d), V((n + 1) * d), f(d);
  std::copy(config.u0.begin(), config.u0.end(), U.begin());
  std::copy(config.v0.begin(), config.v0.end(), V.begin());
  for (std::size_t k = 0; k < n; ++k) {
    const double* u = U.data() + k * d;
    const double* v = V.data() + k * d;
    config.drift.apply({u, d}, f);
    const auto dL = noise.increment(k);
    for (std::size_t i = 0; i < d; ++i) {
      if (audit) audit->record(dL[i]);
      V[(k + 1) * d + i] = c.decay * v[i] + c.relax * f[i] + noise_gain * dL[i];
      U[(k + 1) * d + i] = u[i] + c.vel_weight * v[i] + c.drift_weight * f[i];
    }
  }
  return {GridPath(noise.times, std::move(U), d, Interp::CadlagStep),
          GridPath(noise.times, std::move(V), d, Interp::CadlagStep)};
}

GridPath integrate_limit(const ModelConfig& config, const NoiseRealization& noise,
                         IncrementAudit* audit) {
  config.validate();
  check_noise_matches(config, noise);
  const std::size_t d = config.stable.dim;
  const std::size_t n = config.n_steps;
  const double h = config.step();
  const double noise_gain = std::pow(config.eps, config.theta);

  std::vector<double> U((n + 1) * d), f(d);
  std::copy(config.u0.begin(), config.u0.end(), U.begin());
  for (std::size_t k = 0; k < n; ++k) {
    const double* u = U.data() + k * d;
    config.drift.apply({u, d}, f);
    const auto dL = noise.increment(k);
    for (std::size_t i = 0; i < d; ++i) {
      if (audit) audit->record(dL[i]);
      U[(k + 1) * d + i] = u[i] + h * f[i] + noise_gain * dL[i];
    }
  }
  return GridPath(noise.times, std::move(U), d, Interp::CadlagStep);
}

LinearPaths integrate_linear(const ModelConfig& config, const NoiseRealization& noise) {
  config.validate();
  check_noise_matches(config, noise);
  const std::size_t d = config.stable.dim;
  const std::size_t n = config.n_steps;
  const auto c = StepCoefficients::make(config.step(), config.eps);
  const double noise_gain = std::pow(config.eps, config.theta - 1.0);

  std::vector<double> u((n + 1) * d, 0.0), v((n + 1) * d, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto dL = noise.increment(k);
    for (std::size_t i = 0; i < d; ++i) {
      const double vk = v[k * d + i];
      v[(k + 1) * d + i] = c.decay * vk + noise_gain * dL[i];
      u[(k + 1) * d + i] = u[k * d + i] + c.vel_weight * vk;
    }
  }
  return {GridPath(noise.times, std::move(u), d, Interp::Linear),
          GridPath(noise.times, std::move(v), d, Interp::CadlagStep)};
}

GridPath integrate_ou(double eps, const NoiseRealization& noise) {
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  const double h = uniform_step(noise);
  check_stiffness(h, eps);
  const std::size_t d = noise.dim;
  const std::size_t n = noise.steps();
  const double a = std::exp(-h / eps);
  std::vector<double> z((n + 1) * d, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      z[(k + 1) * d + i] = a * z[k * d + i] + noise.increments[k * d + i];
    }
  }
  return GridPath(noise.times, std::move(z), d, Interp::CadlagStep);
}

CoupledTrajectories simulate_coupled(const ModelConfig& config, const NoiseRealization& noise,
                                     CoupledOptions options) {
  auto [U, V] = integrate_slow_fast(config, noise);
  CoupledTrajectories out{std::move(U), std::move(V), integrate_limit(config, noise), {}, {}, {},
                          &noise};
  if (options.linear) {
    auto lin = integrate_linear(config, noise);
    out.u_lin = std::move(lin.u);
    out.v_lin = std::move(lin.v);
  }
  if (options.ou) out.Z = integrate_ou(config.eps, noise);
  return out;
}

NoiseRealization sample_model_noise(const ModelConfig& config, RandomStream& rng) {
  NoiseRealization noise =
      sample_noise_realization(config.stable, uniform_grid(config.T, config.n_steps), rng);
  if (config.noise_scale != 1.0) {
    for (double& x : noise.increments) x *= config.noise_scale;
  }
  return noise;
}

}  // namespace sklevy
