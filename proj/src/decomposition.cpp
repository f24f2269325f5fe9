#include "sklevy/decomposition.hpp"

#include <cmath>

#include "sklevy/errors.hpp"
#include "sklevy/kernels/kernels.hpp"

namespace sklevy {

double DecompositionPaths::noise_coefficient() const {
  return std::pow(eps, theta + 1.0 / alpha - 1.0);
}

namespace {

void check_path_on_noise(const GridPath& p, const NoiseRealization& noise, const char* name) {
  if (p.size() != noise.times.size() || p.dim() != noise.dim ||
      !std::equal(p.times().begin(), p.times().end(), noise.times.begin())) {
    throw DomainError(std::string(name) + " does not live on the noise grid");
  }
}

double euclid(const double* v, std::size_t d) {
  if (d == 1) return std::fabs(v[0]);
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

}  // namespace

DecompositionPaths split_velocity(const ModelConfig& config, const NoiseRealization& noise,
                                  const GridPath& U) {
  config.validate();
  check_noise_matches(config, noise);
  check_path_on_noise(U, noise, "U");
  const std::size_t d = config.stable.dim;
  const std::size_t n = config.n_steps;
  const auto c = StepCoefficients::make(config.step(), config.eps);
  const double v3_gain = std::pow(config.eps, -1.0 / config.stable.alpha);

  std::vector<double> v1((n + 1) * d), v2((n + 1) * d, 0.0), v3((n + 1) * d, 0.0), f(d);
  for (std::size_t i = 0; i < d; ++i) v1[i] = config.eps * config.v0[i];
  for (std::size_t k = 0; k < n; ++k) {
    config.drift.apply(U.node(k), f);
    const auto dL = noise.increment(k);
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t now = k * d + i;
      const std::size_t next = now + d;
      v1[next] = c.decay * v1[now];
      v2[next] = c.decay * v2[now] + c.relax * f[i];
      v3[next] = c.decay * v3[now] + v3_gain * dL[i];
    }
  }

  DecompositionPaths dec;
  dec.eps = config.eps;
  dec.theta = config.theta;
  dec.alpha = config.stable.alpha;
  std::vector<double> rec((n + 1) * d);
  kernels::combine3(v1, 1.0 / config.eps, v2, v3, dec.noise_coefficient(), rec);
  dec.V1bar = GridPath(noise.times, std::move(v1), d, Interp::CadlagStep);
  dec.V2bar = GridPath(noise.times, std::move(v2), d, Interp::CadlagStep);
  dec.V3bar = GridPath(noise.times, std::move(v3), d, Interp::CadlagStep);
  dec.V_reconstructed = GridPath(noise.times, std::move(rec), d, Interp::CadlagStep);
  return dec;
}

GridPath closed_form_v1(double eps, std::span<const double> v0, std::span<const double> grid) {
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  validate_grid(grid);
  const std::size_t d = v0.size();
  if (d == 0) throw ParameterError("v0 must be non-empty");
  std::vector<double> out(grid.size() * d);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double decay = std::exp(-grid[k] / eps);
    for (std::size_t i = 0; i < d; ++i) out[k * d + i] = eps * v0[i] * decay;
  }
  return GridPath(std::vector<double>(grid.begin(), grid.end()), std::move(out), d,
                  Interp::CadlagStep);
}

std::map<std::string, GridPath> drift_residual(const GridPath& U, const GridPath& Ubar,
                                               const DecompositionPaths& dec,
                                               const ModelConfig& config,
                                               const NoiseRealization& noise) {
  config.validate();
  check_noise_matches(config, noise);
  check_path_on_noise(U, noise, "U");
  check_path_on_noise(Ubar, noise, "Ubar");
  check_path_on_noise(dec.V1bar, noise, "V1bar");
  check_path_on_noise(dec.V2bar, noise, "V2bar");
  check_path_on_noise(dec.V3bar, noise, "V3bar");
  const std::size_t d = config.stable.dim;
  const std::size_t n = config.n_steps;
  const double h = config.step();
  const double eps = config.eps;
  const auto c = StepCoefficients::make(h, eps);
  const double v3_coef = dec.noise_coefficient();
  const double noise_gain = std::pow(eps, config.theta);

  // Signed terms, node-major.
  std::vector<double> s1((n + 1) * d, 0.0), s2((n + 1) * d, 0.0), s3((n + 1) * d),
      s4((n + 1) * d, 0.0);
  std::vector<double> int_v3(d, 0.0), L(d, 0.0), fu(d), fb(d);
  const auto V1 = dec.V1bar.values();
  const auto V2 = dec.V2bar.values();
  const auto V3 = dec.V3bar.values();
  for (std::size_t i = 0; i < d; ++i) s3[i] = -eps * V2[i];
  for (std::size_t k = 0; k < n; ++k) {
    config.drift.apply(U.node(k), fu);
    config.drift.apply(Ubar.node(k), fb);
    const auto dL = noise.increment(k);
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t now = k * d + i;
      const std::size_t next = now + d;
      // eps^{-1} * eps (1 - a) * V1
      s1[next] = s1[now] + c.relax * V1[now];
      s2[next] = s2[now] + h * (fu[i] - fb[i]);
      s3[next] = -eps * V2[next];
      int_v3[i] += c.vel_weight * V3[now];
      L[i] += dL[i];
      s4[next] = v3_coef * int_v3[i] - noise_gain * L[i];
    }
  }

  std::map<std::string, GridPath> out;
  const std::vector<double>* signed_terms[4] = {&s1, &s2, &s3, &s4};
  for (int term = 0; term < 4; ++term) {
    const auto& s = *signed_terms[term];
    std::vector<double> mag(n + 1);
    for (std::size_t k = 0; k <= n; ++k) mag[k] = euclid(s.data() + k * d, d);
    const std::string id = std::to_string(term + 1);
    out.emplace("I" + id, GridPath::scalar(noise.times, std::move(mag), Interp::Linear));
    out.emplace("S" + id, GridPath(noise.times, s, d, Interp::Linear));
  }
  return out;
}

}  // namespace sklevy
