#pragma once

#include <map>
#include <string>
#include <vector>

#include "sklevy/grid_path.hpp"
#include "sklevy/integrator.hpp"
#include "sklevy/model_config.hpp"
#include "sklevy/stable_noise.hpp"

namespace sklevy {

/// Velocity split V = eps^{-1} V1 + V2 + eps^{theta + 1/alpha - 1} V3 with
///   V1' = -V1/eps,                V1(0) = eps v0
///   V2' = -(V2 - f(U))/eps,       V2(0) = 0
///   V3' = -V3/eps + eps^{-1/alpha} L',  V3(0) = 0
/// each advanced with the integrator's step conventions.
struct DecompositionPaths {
  GridPath V1bar;
  GridPath V2bar;
  GridPath V3bar;
  GridPath V_reconstructed;
  double eps = 0.0;
  double theta = 0.0;
  double alpha = 0.0;

  /// eps^{theta + 1/alpha - 1}
  double noise_coefficient() const;
};

/// `U` must come from integrate_slow_fast on the same (config, noise).
DecompositionPaths split_velocity(const ModelConfig& config, const NoiseRealization& noise,
                                  const GridPath& U);

/// eps v0 exp(-t_k / eps) at the grid nodes.
GridPath closed_form_v1(double eps, std::span<const double> v0, std::span<const double> grid);

/// Error-budget terms of U - Ubar, as scalar paths keyed "I1".."I4":
///   I1 = |eps^{-1} int V1|,  I2 = |int (f(U) - f(Ubar))|,
///   I3 = eps |V2|,           I4 = |eps^{theta+1/alpha-1} int V3 - eps^theta L|,
/// with time integrals on the same quadrature that advances U, so that
///   U - Ubar = eps^{-1} int V1 + int (f(U) - f(Ubar)) - eps V2
///              + (eps^{theta+1/alpha-1} int V3 - eps^theta L)
/// holds exactly in exact arithmetic. The signed terms are returned under
/// "S1".."S4" (row-major, dim components each, as linear-convention paths).
std::map<std::string, GridPath> drift_residual(const GridPath& U, const GridPath& Ubar,
                                               const DecompositionPaths& dec,
                                               const ModelConfig& config,
                                               const NoiseRealization& noise);

}  // namespace sklevy
