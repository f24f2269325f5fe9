#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "sklevy/model_config.hpp"
#include "sklevy/stable_noise.hpp"

namespace sklevy {

struct ExperimentOptions {
  // Worker threads for replicate loops; 0 = hardware concurrency. Results do
  // not depend on this value.
  std::size_t threads = 0;
};

/// Statistics of one ensemble cell (one eps, one theta).
struct EnsembleSummary {
  double eps = 0.0;
  double theta = 0.0;
  std::size_t n_steps = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::uint32_t cell = 0;
  double mean = 0.0;
  double ci_half_width = 0.0;  // normal approximation; indicative only under heavy tails
  double median = 0.0;
  double trimmed_mean = 0.0;   // 10% trimmed
  double q05 = 0.0, q25 = 0.0, q75 = 0.0, q95 = 0.0;
  double wall_seconds = 0.0;
};

EnsembleSummary summarize(std::span<const double> samples);

struct SupErrorEstimate {
  double mean = 0.0;
  double ci = 0.0;
  EnsembleSummary summary;
  std::vector<double> samples;  // sup_k |U_k - Ubar_k| per replicate
};

/// Monte Carlo estimate of E sup_t |U(t) - Ubar(t)| with U and Ubar driven by
/// the same noise. Replicate j of cell `cell` uses stream (config.seed,
/// replicate_stream_id(cell, j)).
SupErrorEstimate estimate_sup_error(const ModelConfig& config, std::size_t replicates,
                                    std::uint32_t cell = 0, const ExperimentOptions& opt = {});

struct RateFit {
  std::vector<double> eps_list;
  std::vector<double> errors;
  std::vector<double> ci_half_widths;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  // Robustness column: the same regression on per-cell medians.
  std::vector<double> median_errors;
  double median_slope = 0.0;
};

/// Least squares of log(errors) on log(eps_list). Needs >= 3 positive points.
RateFit fit_convergence_rate(std::span<const double> eps_list, std::span<const double> errors);

struct ThetaSweepResult {
  double theta = 0.0;
  RateFit fit;
  std::vector<EnsembleSummary> cells;
};

/// For each theta and eps (n_steps = n_steps_for(eps, T)), estimates the sup
/// error with independent noise per cell, then fits the log-log slope.
std::map<double, ThetaSweepResult> run_theta_sweep(const ModelConfig& base,
                                                   std::span<const double> theta_list,
                                                   std::span<const double> eps_list,
                                                   std::size_t replicates,
                                                   const ExperimentOptions& opt = {});

inline constexpr std::array<double, 3> kExceedanceLevels{0.05, 0.1, 0.2};

struct DichotomyRow {
  double eps = 0.0;
  std::size_t n_steps = 0;
  std::size_t replicates = 0;
  double median_skorokhod = 0.0;
  double median_uniform = 0.0;
  double median_largest_jump = 0.0;  // max_k |dL_k| per replicate
  double mean_skorokhod = 0.0;
  double mean_uniform = 0.0;
  std::array<double, 3> exceed_skorokhod{};  // P(d > delta), delta in kExceedanceLevels
  std::array<double, 3> exceed_uniform{};
  double wall_seconds = 0.0;
};

/// theta = 0: compares U^eps with Ubar in the Skorokhod and the uniform metric.
std::vector<DichotomyRow> run_skorokhod_dichotomy(const ModelConfig& base,
                                                  std::span<const double> eps_list,
                                                  std::size_t replicates,
                                                  const ExperimentOptions& opt = {});

struct OuFloorRow {
  double eps = 0.0;
  std::size_t n_steps = 0;
  std::size_t replicates = 0;
  double mean_sup = 0.0;
  double median_sup = 0.0;
  double ci_sup = 0.0;
  double mean_abs_terminal = 0.0;  // E |Z(T)|
  double median_abs_terminal = 0.0;
  double wall_seconds = 0.0;
};

struct OuFloorTable {
  std::vector<OuFloorRow> rows;
  double min_mean_sup = 0.0;
  // log E|Z(T)| against log eps; the slope estimates 1/alpha.
  RateFit terminal_scale_fit;
};

/// Monte Carlo E sup |Z^eps| and E |Z^eps(T)| per eps, replicates processed in
/// SIMD lanes.
OuFloorTable run_ou_floor(std::span<const double> eps_list, const StableParams& stable, double T,
                          std::size_t replicates, std::uint64_t seed, double noise_scale = 1.0,
                          const ExperimentOptions& opt = {});

struct MomentRow {
  double eps = 0.0;
  std::size_t n_steps = 0;
  std::size_t replicates = 0;
  double mean_sup = 0.0;
  double median_sup = 0.0;
  double ci_sup = 0.0;
  double wall_seconds = 0.0;
};

struct MomentTable {
  std::vector<MomentRow> rows;
  double max_mean = 0.0;
  double min_mean = 0.0;
  double baseline = 0.0;  // value at the largest eps (eps = 1 when present)
  bool blow_up = false;   // some cell exceeds 10x the baseline
};

/// Monte Carlo E sup_t |U^eps(t)| per eps.
MomentTable run_moment_sweep(const ModelConfig& base, std::span<const double> eps_list,
                             std::size_t replicates, const ExperimentOptions& opt = {});

/// Runs body(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace sklevy
