#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sklevy/rng.hpp"

namespace sklevy {

/// Law of an isotropic alpha-stable Levy process L with
/// E exp(i(L(t), h)) = exp(-c t |h|^alpha).
struct StableParams {
  double alpha = 1.5;
  double c = 1.0;
  std::size_t dim = 1;

  /// Throws ParameterError unless 1 < alpha < 2, c > 0, dim >= 1.
  void validate() const;
};

struct JumpEvent {
  double time;
  std::size_t step;        // index k with t_k <= time < t_{k+1}
  std::vector<double> x;   // |x| >= 1
};

/// Large jumps of a one-dimensional split realization follow the Levy density
/// k |x|^{-1-alpha} on each half-line, restricted to |x| >= 1.
struct SplitSpec {
  double levy_density_k = 1.0;
};

/// Increments of L on a time grid, row-major (step k, component i at
/// increments[k * dim + i]).
struct NoiseRealization {
  std::vector<double> times;
  std::size_t dim = 1;
  std::vector<double> increments;

  // Populated only in split mode.
  bool split = false;
  std::vector<JumpEvent> large_jumps;
  std::vector<double> small_increments;

  std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
  double horizon() const { return times.back(); }
  std::span<const double> increment(std::size_t k) const {
    return {increments.data() + k * dim, dim};
  }

  /// Cumulated path L(t_k), (steps()+1) x dim, starting at 0.
  std::vector<double> cumulative() const;

  /// Sum of large jumps falling in step k, or zeros.
  std::vector<double> large_jump_sum(std::size_t k) const;

  /// All-zero realization on the given grid.
  static NoiseRealization zeros(std::vector<double> times, std::size_t dim);
};

/// Uniform grid t_k = T k / n, k = 0..n, so the last node equals T exactly.
std::vector<double> uniform_grid(double T, std::size_t n_steps);

/// Throws GridError unless the grid has >= 2 nodes, starts at 0, and is
/// strictly increasing.
void validate_grid(std::span<const double> times);

/// One draw X with E exp(ihX) = exp(-(sigma |h|)^alpha) (Chambers-Mallows-Stuck).
/// Always consumes exactly two stream words.
double sample_symmetric_stable_1d(double alpha, double sigma, RandomStream& rng);

/// Totally skewed positive stable draw S with E exp(-u S) = exp(-gamma u^beta),
/// 0 < beta < 1. Consumes two stream words.
double sample_positive_stable(double beta, double gamma, RandomStream& rng);

/// Increment of L over a step of length dt. For dim > 1 uses Gaussian
/// subordination: sqrt(2 S) G with S positive (alpha/2)-stable.
std::vector<double> sample_isotropic_increment(const StableParams& params, double dt,
                                               RandomStream& rng);

/// In-place variant writing params.dim values into `out`.
void sample_isotropic_increment(const StableParams& params, double dt, RandomStream& rng,
                                std::span<double> out);

/// Increments of L on `grid`. With `split`, also simulates the large jumps as
/// an explicit marked Poisson process and stores the small-jump residual
/// (increment minus in-step large jumps). Split mode requires dim = 1.
NoiseRealization sample_noise_realization(const StableParams& params,
                                          std::span<const double> grid, RandomStream& rng,
                                          std::optional<SplitSpec> split = std::nullopt);

/// (1/N) sum_j exp(i (X_j, h)) for samples stored row-major with `dim`
/// components each.
std::complex<double> empirical_chf(std::span<const double> samples, std::size_t dim,
                                   std::span<const double> h);

inline std::complex<double> empirical_chf(std::span<const double> samples, double h) {
  return empirical_chf(samples, 1, std::span<const double>(&h, 1));
}

}  // namespace sklevy
