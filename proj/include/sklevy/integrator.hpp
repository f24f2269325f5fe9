#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "sklevy/grid_path.hpp"
#include "sklevy/model_config.hpp"
#include "sklevy/stable_noise.hpp"

namespace sklevy {

/// Per-step constants of the exponential integrator on a uniform step h.
struct StepCoefficients {
  double h;
  double decay;        // a = exp(-h/eps)
  double relax;        // 1 - a, computed as -expm1(-h/eps)
  double vel_weight;   // eps (1 - a) = int_0^h exp(-s/eps) ds
  double drift_weight; // h - eps (1 - a)

  static StepCoefficients make(double h, double eps);
};

/// Records which increments an integrator consumed, in order.
struct IncrementAudit {
  std::size_t consumed = 0;
  std::uint64_t checksum = 0xcbf29ce484222325ull;

  void record(double x);
  bool operator==(const IncrementAudit&) const = default;
};

struct SlowFastPaths {
  GridPath U;  // position, cadlag-step convention
  GridPath V;  // velocity
};

struct LinearPaths {
  GridPath u;  // time integral of v, linear convention
  GridPath v;
};

/// Slow-fast system U' = V, V' = eps^{-1}(-V + f(U)) + eps^{theta-1} L'.
///
/// Per step, with the increment applied undamped at the right endpoint:
///   V_{k+1} = a V_k + (1 - a) f(U_k) + eps^{theta-1} dL_k
///   U_{k+1} = U_k + eps (1 - a) V_k + (h - eps (1 - a)) f(U_k)
/// The U-update is the exact integral of the frozen-drift velocity over the
/// step, so decompositions of V integrate term by term without remainder.
SlowFastPaths integrate_slow_fast(const ModelConfig& config, const NoiseRealization& noise,
                                  IncrementAudit* audit = nullptr);

/// Limit equation U' = f(U) + eps^theta L' by Euler-Maruyama on the same
/// increments.
GridPath integrate_limit(const ModelConfig& config, const NoiseRealization& noise,
                         IncrementAudit* audit = nullptr);

/// Linear part: the slow-fast recursion with f = 0 and zero initial data.
LinearPaths integrate_linear(const ModelConfig& config, const NoiseRealization& noise);

/// dZ = -eps^{-1} Z dt + dL, Z(0) = 0: Z_{k+1} = a Z_k + dL_k.
GridPath integrate_ou(double eps, const NoiseRealization& noise);

struct CoupledOptions {
  bool linear = false;
  bool ou = false;
};

struct CoupledTrajectories {
  GridPath U;
  GridPath V;
  GridPath Ubar;
  std::optional<GridPath> u_lin;
  std::optional<GridPath> v_lin;
  std::optional<GridPath> Z;
  const NoiseRealization* noise = nullptr;
};

CoupledTrajectories simulate_coupled(const ModelConfig& config, const NoiseRealization& noise,
                                     CoupledOptions options = {});

/// Noise for `config` on its uniform grid, increments scaled by
/// config.noise_scale.
NoiseRealization sample_model_noise(const ModelConfig& config, RandomStream& rng);

/// Throws DomainError / GridError unless `noise` lives on config's uniform
/// grid with config's dimension.
void check_noise_matches(const ModelConfig& config, const NoiseRealization& noise);

}  // namespace sklevy
