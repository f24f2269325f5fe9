#include "sklevy/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "sklevy/errors.hpp"
#include "sklevy/integrator.hpp"
#include "sklevy/kernels/kernels.hpp"
#include "sklevy/path_metrics.hpp"
#include "sklevy/stats.hpp"

namespace sklevy {

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double sup_norm_diff(const GridPath& a, const GridPath& b) {
  if (a.dim() == 1) return kernels::max_abs_diff(a.values(), b.values());
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
      const double d = a.node(k)[i] - b.node(k)[i];
      s += d * d;
    }
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

double sup_norm(const GridPath& a) {
  if (a.dim() == 1) return kernels::max_abs(a.values());
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double s = 0.0;
    for (double v : a.node(k)) s += v * v;
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

double largest_increment(const NoiseRealization& noise) {
  double m = 0.0;
  for (std::size_t k = 0; k < noise.steps(); ++k) {
    double s = 0.0;
    for (double v : noise.increment(k)) s += v * v;
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

void check_replicates(std::size_t n, std::size_t minimum) {
  if (n < minimum) {
    throw ParameterError("replicate count must be at least " + std::to_string(minimum));
  }
}

void check_eps_list(std::span<const double> eps_list) {
  if (eps_list.empty()) throw ParameterError("eps list must not be empty");
  for (double e : eps_list) {
    if (!(e > 0.0 && e <= 1.0)) throw ParameterError("eps must lie in (0,1]");
  }
}

ModelConfig cell_config(const ModelConfig& base, double eps) {
  ModelConfig c = base;
  c.eps = eps;
  c.n_steps = n_steps_for(eps, base.T);
  c.validate();
  return c;
}

double exceedance(std::span<const double> x, double level) {
  const auto count = std::count_if(x.begin(), x.end(), [level](double v) { return v > level; });
  return static_cast<double>(count) / static_cast<double>(x.size());
}

}  // namespace

EnsembleSummary summarize(std::span<const double> samples) {
  EnsembleSummary s;
  s.replicates = samples.size();
  s.mean = stats::mean(samples);
  s.ci_half_width = stats::ci95_half_width(samples);
  s.median = stats::median(samples);
  s.trimmed_mean = stats::trimmed_mean(samples, 0.1);
  s.q05 = stats::quantile(samples, 0.05);
  s.q25 = stats::quantile(samples, 0.25);
  s.q75 = stats::quantile(samples, 0.75);
  s.q95 = stats::quantile(samples, 0.95);
  return s;
}

SupErrorEstimate estimate_sup_error(const ModelConfig& config, std::size_t replicates,
                                    std::uint32_t cell, const ExperimentOptions& opt) {
  config.validate();
  check_replicates(replicates, 2);
  const auto start = Clock::now();
  SupErrorEstimate est;
  est.samples.resize(replicates);
  parallel_for(replicates, opt.threads, [&](std::size_t j) {
    RandomStream rng(config.seed, replicate_stream_id(cell, static_cast<std::uint32_t>(j)));
    const NoiseRealization noise = sample_model_noise(config, rng);
    const auto sf = integrate_slow_fast(config, noise);
    const GridPath ubar = integrate_limit(config, noise);
    est.samples[j] = sup_norm_diff(sf.U, ubar);
  });
  est.summary = summarize(est.samples);
  est.summary.eps = config.eps;
  est.summary.theta = config.theta;
  est.summary.n_steps = config.n_steps;
  est.summary.seed = config.seed;
  est.summary.cell = cell;
  est.summary.wall_seconds = seconds_since(start);
  est.mean = est.summary.mean;
  est.ci = est.summary.ci_half_width;
  return est;
}

RateFit fit_convergence_rate(std::span<const double> eps_list, std::span<const double> errors) {
  if (eps_list.size() != errors.size()) throw DomainError("eps list and errors differ in length");
  if (eps_list.size() < 3) throw ParameterError("rate fit needs at least three points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0) || !(errors[i] > 0.0)) {
      throw DomainError("rate fit needs positive eps and errors");
    }
    lx.push_back(std::log(eps_list[i]));
    ly.push_back(std::log(errors[i]));
  }
  const auto fit = stats::least_squares(lx, ly);
  RateFit r;
  r.eps_list.assign(eps_list.begin(), eps_list.end());
  r.errors.assign(errors.begin(), errors.end());
  r.slope = fit.slope;
  r.intercept = fit.intercept;
  r.r_squared = fit.r_squared;
  return r;
}

std::map<double, ThetaSweepResult> run_theta_sweep(const ModelConfig& base,
                                                   std::span<const double> theta_list,
                                                   std::span<const double> eps_list,
                                                   std::size_t replicates,
                                                   const ExperimentOptions& opt) {
  check_eps_list(eps_list);
  std::map<double, ThetaSweepResult> out;
  for (std::size_t ti = 0; ti < theta_list.size(); ++ti) {
    ThetaSweepResult res;
    res.theta = theta_list[ti];
    std::vector<double> means, medians, cis;
    for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
      ModelConfig c = base;
      c.theta = theta_list[ti];
      c = cell_config(c, eps_list[ei]);
      const auto cell = static_cast<std::uint32_t>(ti * eps_list.size() + ei);
      const auto est = estimate_sup_error(c, replicates, cell, opt);
      res.cells.push_back(est.summary);
      means.push_back(est.mean);
      medians.push_back(est.summary.median);
      cis.push_back(est.ci);
    }
    res.fit = fit_convergence_rate(eps_list, means);
    res.fit.ci_half_widths = cis;
    res.fit.median_errors = medians;
    if (std::all_of(medians.begin(), medians.end(), [](double m) { return m > 0.0; })) {
      res.fit.median_slope = fit_convergence_rate(eps_list, medians).slope;
    }
    out.emplace(res.theta, std::move(res));
  }
  return out;
}

std::vector<DichotomyRow> run_skorokhod_dichotomy(const ModelConfig& base,
                                                  std::span<const double> eps_list,
                                                  std::size_t replicates,
                                                  const ExperimentOptions& opt) {
  if (base.theta != 0.0) throw ParameterError("dichotomy experiment requires theta = 0");
  check_eps_list(eps_list);
  check_replicates(replicates, 1);
  std::vector<DichotomyRow> rows;
  for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
    const auto start = Clock::now();
    const ModelConfig c = cell_config(base, eps_list[ei]);
    std::vector<double> sk(replicates), un(replicates), jump(replicates);
    parallel_for(replicates, opt.threads, [&](std::size_t j) {
      RandomStream rng(c.seed, replicate_stream_id(static_cast<std::uint32_t>(ei),
                                                   static_cast<std::uint32_t>(j)));
      const NoiseRealization noise = sample_model_noise(c, rng);
      const auto sf = integrate_slow_fast(c, noise);
      const GridPath ubar = integrate_limit(c, noise);
      sk[j] = skorokhod_distance(sf.U, ubar);
      un[j] = uniform_distance(sf.U, ubar);
      jump[j] = largest_increment(noise);
    });
    DichotomyRow row;
    row.eps = c.eps;
    row.n_steps = c.n_steps;
    row.replicates = replicates;
    row.median_skorokhod = stats::median(sk);
    row.median_uniform = stats::median(un);
    row.median_largest_jump = stats::median(jump);
    row.mean_skorokhod = stats::mean(sk);
    row.mean_uniform = stats::mean(un);
    for (std::size_t l = 0; l < kExceedanceLevels.size(); ++l) {
      row.exceed_skorokhod[l] = exceedance(sk, kExceedanceLevels[l]);
      row.exceed_uniform[l] = exceedance(un, kExceedanceLevels[l]);
    }
    row.wall_seconds = seconds_since(start);
    rows.push_back(row);
  }
  return rows;
}

OuFloorTable run_ou_floor(std::span<const double> eps_list, const StableParams& stable, double T,
                          std::size_t replicates, std::uint64_t seed, double noise_scale,
                          const ExperimentOptions& opt) {
  stable.validate();
  check_eps_list(eps_list);
  check_replicates(replicates, 2);
  if (!(noise_scale >= 0.0)) throw ParameterError("noise_scale must be nonnegative");
  constexpr std::size_t lanes = kernels::kOuLanes;
  const kernels::KernelTable& kt = kernels::active();
  OuFloorTable table;
  for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
    const auto start = Clock::now();
    const double eps = eps_list[ei];
    const std::size_t n = n_steps_for(eps, T);
    const std::vector<double> grid = uniform_grid(T, n);
    const double h = T / static_cast<double>(n);
    check_stiffness(h, eps);
    const double a = std::exp(-h / eps);
    const std::size_t groups = (replicates + lanes - 1) / lanes;
    std::vector<double> sup(replicates), terminal(replicates);
    parallel_for(groups, opt.threads, [&](std::size_t g) {
      std::vector<double> interleaved(n * lanes, 0.0);
      for (std::size_t l = 0; l < lanes; ++l) {
        const std::size_t j = g * lanes + l;
        if (j >= replicates) break;
        RandomStream rng(seed, replicate_stream_id(static_cast<std::uint32_t>(ei),
                                                   static_cast<std::uint32_t>(j)));
        const NoiseRealization noise = sample_noise_realization(stable, grid, rng);
        // Lanes carry one component; the norm over components is taken per
        // replicate below for dim = 1 only.
        for (std::size_t k = 0; k < n; ++k) {
          interleaved[k * lanes + l] = noise_scale * noise.increments[k * stable.dim];
        }
      }
      double z_final[lanes], z_sup[lanes];
      kt.ou_lanes(interleaved.data(), n, a, z_final, z_sup);
      for (std::size_t l = 0; l < lanes; ++l) {
        const std::size_t j = g * lanes + l;
        if (j >= replicates) break;
        sup[j] = z_sup[l];
        terminal[j] = std::fabs(z_final[l]);
      }
    });
    OuFloorRow row;
    row.eps = eps;
    row.n_steps = n;
    row.replicates = replicates;
    row.mean_sup = stats::mean(sup);
    row.median_sup = stats::median(sup);
    row.ci_sup = stats::ci95_half_width(sup);
    row.mean_abs_terminal = stats::mean(terminal);
    row.median_abs_terminal = stats::median(terminal);
    row.wall_seconds = seconds_since(start);
    table.rows.push_back(row);
  }
  table.min_mean_sup = table.rows.front().mean_sup;
  for (const auto& r : table.rows) table.min_mean_sup = std::min(table.min_mean_sup, r.mean_sup);
  if (eps_list.size() >= 3) {
    std::vector<double> terms;
    for (const auto& r : table.rows) terms.push_back(r.mean_abs_terminal);
    if (std::all_of(terms.begin(), terms.end(), [](double v) { return v > 0.0; })) {
      table.terminal_scale_fit = fit_convergence_rate(eps_list, terms);
    }
  }
  return table;
}

MomentTable run_moment_sweep(const ModelConfig& base, std::span<const double> eps_list,
                             std::size_t replicates, const ExperimentOptions& opt) {
  check_eps_list(eps_list);
  check_replicates(replicates, 2);
  MomentTable table;
  for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
    const auto start = Clock::now();
    const ModelConfig c = cell_config(base, eps_list[ei]);
    std::vector<double> sup(replicates);
    parallel_for(replicates, opt.threads, [&](std::size_t j) {
      RandomStream rng(c.seed, replicate_stream_id(static_cast<std::uint32_t>(ei),
                                                   static_cast<std::uint32_t>(j)));
      const NoiseRealization noise = sample_model_noise(c, rng);
      sup[j] = sup_norm(integrate_slow_fast(c, noise).U);
    });
    MomentRow row;
    row.eps = c.eps;
    row.n_steps = c.n_steps;
    row.replicates = replicates;
    row.mean_sup = stats::mean(sup);
    row.median_sup = stats::median(sup);
    row.ci_sup = stats::ci95_half_width(sup);
    row.wall_seconds = seconds_since(start);
    table.rows.push_back(row);
  }
  const auto largest = std::max_element(table.rows.begin(), table.rows.end(),
                                        [](const auto& a, const auto& b) { return a.eps < b.eps; });
  table.baseline = largest->mean_sup;
  table.max_mean = table.min_mean = table.rows.front().mean_sup;
  for (const auto& r : table.rows) {
    table.max_mean = std::max(table.max_mean, r.mean_sup);
    table.min_mean = std::min(table.min_mean, r.mean_sup);
  }
  table.blow_up = table.max_mean > 10.0 * table.baseline;
  return table;
}

}  // namespace sklevy
