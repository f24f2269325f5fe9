#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sklevy/drift.hpp"
#include "sklevy/stable_noise.hpp"

namespace sklevy {

/// One instance of eps U'' + U' = f(U) + eps^theta L', U(0) = u0, U'(0) = v0,
/// on [0, T] with n_steps uniform steps.
struct ModelConfig {
  Drift drift = Drift::sine(1.0);
  std::vector<double> u0{0.0};
  std::vector<double> v0{1.0};
  double eps = 0.125;
  double theta = 0.0;
  StableParams stable{};
  double T = 1.0;
  std::size_t n_steps = 128;
  std::uint64_t seed = 1;
  // Multiplies every sampled increment; 0 switches the noise off.
  double noise_scale = 1.0;

  double step() const { return T / static_cast<double>(n_steps); }

  /// Throws ParameterError / StiffnessError naming the violated invariant.
  void validate() const;
};

/// Default desk-scale configuration: alpha = 1.5, c = 1, d = 1, T = 1,
/// f = sine(1), u0 = 0, v0 = 1, theta = 0, eps = 2^-3.
ModelConfig canonical_config();

/// Relative slack on h <= eps/10 absorbing the rounding of T / n.
inline constexpr double kStiffnessSlack = 1e-12;

/// Throws StiffnessError unless h <= eps / 10.
void check_stiffness(double h, double eps);

/// Smallest power of two >= ceil(10 T / eps).
std::size_t n_steps_for(double eps, double T);

}  // namespace sklevy
