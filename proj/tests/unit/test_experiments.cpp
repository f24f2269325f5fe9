#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sklevy/errors.hpp"
#include "sklevy/experiments.hpp"
#include "sklevy/integrator.hpp"

using namespace sklevy;

namespace {

std::vector<double> dyadic(int from, int to) {
  std::vector<double> out;
  for (int e = from; e <= to; ++e) out.push_back(std::pow(2.0, -e));
  return out;
}

ModelConfig at_eps(ModelConfig c, double eps) {
  c.eps = eps;
  c.n_steps = n_steps_for(eps, c.T);
  return c;
}

}  // namespace

TEST_CASE("rate fit on exact inputs") {
  const auto eps = dyadic(3, 8);
  const auto f1 = fit_convergence_rate(eps, eps);
  CHECK(f1.slope == Catch::Approx(1.0).margin(1e-12));
  CHECK(f1.r_squared == Catch::Approx(1.0).margin(1e-12));

  const std::vector<double> flat(eps.size(), 0.42);
  const auto f0 = fit_convergence_rate(eps, flat);
  CHECK(std::fabs(f0.slope) <= 1e-12);

  std::vector<double> p;
  for (double e : eps) p.push_back(3.0 * std::sqrt(e));
  const auto fh = fit_convergence_rate(eps, p);
  CHECK(std::fabs(fh.slope - 0.5) <= 1e-12);
  CHECK(std::fabs(fh.intercept - std::log(3.0)) <= 1e-12);
}

TEST_CASE("rate fit recovers random exponents") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double s = u(gen), c = std::exp(u(gen));
    std::vector<double> eps, err;
    for (int k = 0; k < 3 + i % 6; ++k) {
      eps.push_back(std::exp(-0.7 * k - 0.1));
      err.push_back(c * std::pow(eps.back(), s));
    }
    const auto f = fit_convergence_rate(eps, err);
    REQUIRE(std::fabs(f.slope - s) <= 1e-12);
  }
}

TEST_CASE("rate fit rejects bad input") {
  const std::vector<double> e{0.1, 0.05, 0.02};
  CHECK_THROWS_AS(fit_convergence_rate(e, std::vector<double>{1.0, 0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(fit_convergence_rate(e, std::vector<double>{1.0, -1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(fit_convergence_rate(std::vector<double>{0.1, 0.0, 0.02}, e), DomainError);
  CHECK_THROWS_AS(fit_convergence_rate(e, std::vector<double>{1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(fit_convergence_rate(std::vector<double>{0.1, 0.05},
                                       std::vector<double>{1.0, 1.0}),
                  ParameterError);
}

TEST_CASE("sup error vanishes when both systems coincide") {
  ModelConfig c = canonical_config();
  c.drift = Drift::zero();
  c.v0 = {0.0};
  c.noise_scale = 0.0;
  const auto est = estimate_sup_error(c, 10);
  CHECK(est.mean == 0.0);
  CHECK(est.ci == 0.0);
}

TEST_CASE("deterministic sup error matches the closed form") {
  for (double eps : {0.5, 0.1, 0.01}) {
    for (double v0 : {1.0, -2.5}) {
      ModelConfig c = at_eps(canonical_config(), eps);
      c.drift = Drift::zero();
      c.v0 = {v0};
      c.noise_scale = 0.0;
      const auto est = estimate_sup_error(c, 3);
      const double exact = eps * std::fabs(v0) * (-std::expm1(-c.T / eps));
      CHECK(std::fabs(est.mean - exact) <= 1e-12 * exact);
      CHECK(est.mean <= eps * std::fabs(v0));
    }
  }
}

TEST_CASE("vanishing noise sends the sup error to the velocity bound") {
  ModelConfig c = at_eps(canonical_config(), 0.05);
  c.drift = Drift::zero();
  c.theta = 0.5;
  c.v0 = {1.3};
  const double bound = c.eps * 1.3 * (-std::expm1(-c.T / c.eps));
  double last = std::numeric_limits<double>::infinity();
  for (double s : {1.0, 1e-1, 1e-2, 1e-3, 1e-4}) {
    c.noise_scale = s;
    const double gap = std::fabs(estimate_sup_error(c, 50).mean - bound);
    CHECK(gap <= last);
    last = gap;
  }
  CHECK(last <= 1e-3 * bound);
}

TEST_CASE("sup error needs two replicates") {
  CHECK_THROWS_AS(estimate_sup_error(canonical_config(), 1), ParameterError);
  CHECK_THROWS_AS(estimate_sup_error(canonical_config(), 0), ParameterError);
}

TEST_CASE("single-cell estimate agrees with the sweep fit") {
  ModelConfig base = canonical_config();
  const std::vector<double> theta{0.5};
  const auto eps = dyadic(3, 8);
  const auto sweep = run_theta_sweep(base, theta, eps, 200);
  // Least-squares C for errors = C eps^0.5 in log space.
  const auto& fit = sweep.at(0.5).fit;
  double log_c = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) log_c += std::log(fit.errors[i]) - 0.5 * std::log(eps[i]);
  const double C = std::exp(log_c / static_cast<double>(eps.size()));

  ModelConfig c = at_eps(base, 0.05);
  c.theta = 0.5;
  const auto est = estimate_sup_error(c, 200, 1000);
  CHECK(std::fabs(est.mean - C * std::sqrt(0.05)) <= est.ci);
}

TEST_CASE("theta = 0 has no rate") {
  const std::vector<double> theta{0.0};
  const auto eps = dyadic(3, 8);
  const auto res = run_theta_sweep(canonical_config(), theta, eps, 200).at(0.0);
  CHECK(std::fabs(res.fit.slope) <= 0.1);
  const auto [lo, hi] = std::minmax_element(res.fit.errors.begin(), res.fit.errors.end());
  CHECK(*lo >= 0.5 * *hi);
  CHECK(*lo > 0.5);
}

TEST_CASE("sweep cells carry their metadata") {
  const std::vector<double> theta{0.25, 0.75};
  const std::vector<double> eps{0.25, 0.125, 0.0625};
  const auto res = run_theta_sweep(canonical_config(), theta, eps, 8);
  REQUIRE(res.size() == 2);
  const auto& cells = res.at(0.75).cells;
  REQUIRE(cells.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(cells[i].eps == eps[i]);
    CHECK(cells[i].theta == 0.75);
    CHECK(cells[i].n_steps == n_steps_for(eps[i], 1.0));
    CHECK(cells[i].cell == 3 + i);
    CHECK(cells[i].replicates == 8);
    CHECK(cells[i].q05 <= cells[i].q25);
    CHECK(cells[i].q25 <= cells[i].median);
    CHECK(cells[i].median <= cells[i].q75);
    CHECK(cells[i].q75 <= cells[i].q95);
  }
  const std::vector<double> bad{0.5, 0.0};
  CHECK_THROWS_AS(run_theta_sweep(canonical_config(), theta, bad, 8), ParameterError);
}

TEST_CASE("deterministic dichotomy shrinks with eps") {
  ModelConfig c = canonical_config();
  c.noise_scale = 0.0;
  const auto eps = dyadic(3, 7);
  const auto rows = run_skorokhod_dichotomy(c, eps, 2);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].median_uniform < rows[i - 1].median_uniform);
    CHECK(rows[i].median_skorokhod <= rows[i].median_uniform);
  }
  // Gronwall: |U - Ubar| <= (eps |v0| + eps sup|f|) e^{L T} with L = T = 1.
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].median_uniform <= 2.0 * std::exp(1.0) * eps[i]);
  }
  CHECK(rows.back().median_largest_jump == 0.0);
}

TEST_CASE("dichotomy needs theta = 0") {
  ModelConfig c = canonical_config();
  c.theta = 0.25;
  const std::vector<double> eps{0.125};
  CHECK_THROWS_AS(run_skorokhod_dichotomy(c, eps, 4), ParameterError);
}

TEST_CASE("OU floor without noise") {
  const std::vector<double> eps{0.1, 0.01};
  const auto t = run_ou_floor(eps, StableParams{}, 1.0, 9, 1, 0.0);
  for (const auto& r : t.rows) {
    CHECK(r.mean_sup == 0.0);
    CHECK(r.mean_abs_terminal == 0.0);
  }
  CHECK(t.min_mean_sup == 0.0);
}

TEST_CASE("one jump is seen by the OU sup at every eps") {
  for (double eps : {0.1, 0.01, 0.001}) {
    const std::size_t n = n_steps_for(eps, 1.0);
    auto noise = NoiseRealization::zeros(uniform_grid(1.0, n), 1);
    const double J = -2.75;
    noise.increments[n / 3] = J;
    const auto z = integrate_ou(eps, noise);
    double s = 0.0;
    for (double v : z.values()) s = std::max(s, std::fabs(v));
    CHECK(s >= std::fabs(J));
    CHECK(z.node(n / 3 + 1)[0] == J);
  }
}

TEST_CASE("OU floor lanes match the scalar recursion") {
  const std::vector<double> eps{0.05};
  const std::size_t n = 7;
  const auto t = run_ou_floor(eps, StableParams{}, 1.0, n, 3);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    RandomStream rng(3, replicate_stream_id(0, static_cast<std::uint32_t>(j)));
    const auto noise = sample_noise_realization(StableParams{}, uniform_grid(1.0, n_steps_for(0.05, 1.0)), rng);
    const auto z = integrate_ou(0.05, noise);
    double s = 0.0;
    for (double v : z.values()) s = std::max(s, std::fabs(v));
    sum += s;
  }
  CHECK(t.rows[0].mean_sup == Catch::Approx(sum / n).epsilon(1e-14));
}

TEST_CASE("moment sweep without noise or drift") {
  ModelConfig c = canonical_config();
  c.drift = Drift::zero();
  c.v0 = {0.0};
  c.u0 = {-0.7};
  c.noise_scale = 0.0;
  const auto t = run_moment_sweep(c, dyadic(0, 4), 3);
  for (const auto& r : t.rows) CHECK(r.mean_sup == Catch::Approx(0.7).epsilon(1e-15));
  CHECK_FALSE(t.blow_up);
}

TEST_CASE("moment sweep under constant drift") {
  ModelConfig c = canonical_config();
  c.drift = Drift::linear_scalar(0.0, {1.0});
  c.u0 = {0.4};
  c.v0 = {1.0};
  c.noise_scale = 0.0;
  const auto t = run_moment_sweep(c, dyadic(0, 8), 2);
  for (const auto& r : t.rows) CHECK(r.mean_sup == Catch::Approx(0.4 + 1.0).epsilon(1e-12));
}

TEST_CASE("moments stay bounded at theta = 0.5") {
  ModelConfig c = canonical_config();
  c.theta = 0.5;
  const auto t = run_moment_sweep(c, dyadic(0, 8), 200);
  CHECK_FALSE(t.blow_up);
  CHECK(t.max_mean <= 3.0 * t.min_mean);
}

TEST_CASE("replicate doubling shrinks the CI") {
  const ModelConfig c = canonical_config();
  const auto a = estimate_sup_error(c, 200);
  const auto b = estimate_sup_error(c, 400);
  const double ratio = b.ci / a.ci;
  CHECK(std::fabs(ratio / std::sqrt(0.5) - 1.0) <= 0.2);
}

TEST_CASE("summary CI scales with sample size for light tails") {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> g;
  std::vector<double> x(20000);
  for (auto& v : x) v = g(gen);
  const auto a = summarize(std::span<const double>(x).first(5000));
  const auto b = summarize(std::span<const double>(x).first(10000));
  CHECK(std::fabs(b.ci_half_width / a.ci_half_width / std::sqrt(0.5) - 1.0) <= 0.05);
  CHECK(a.ci_half_width == Catch::Approx(1.96 / std::sqrt(5000.0)).epsilon(0.05));
  CHECK(std::fabs(a.median) <= 0.05);
}

TEST_CASE("tables are reproducible and thread independent") {
  ModelConfig c = canonical_config();
  c.theta = 0.25;
  const std::vector<double> theta{0.25};
  const std::vector<double> eps{0.25, 0.125, 0.0625};
  const auto a = run_theta_sweep(c, theta, eps, 24, {1});
  const auto b = run_theta_sweep(c, theta, eps, 24, {4});
  CHECK(a.at(0.25).fit.errors == b.at(0.25).fit.errors);
  CHECK(a.at(0.25).fit.slope == b.at(0.25).fit.slope);

  ModelConfig d = canonical_config();
  const std::vector<double> e2{0.125, 0.0625};
  const auto r1 = run_skorokhod_dichotomy(d, e2, 6, {1});
  const auto r2 = run_skorokhod_dichotomy(d, e2, 6, {3});
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].median_skorokhod == r2[i].median_skorokhod);
    CHECK(r1[i].exceed_uniform == r2[i].exceed_uniform);
  }

  const auto o1 = run_ou_floor(e2, StableParams{}, 1.0, 13, 5, 1.0, {1});
  const auto o2 = run_ou_floor(e2, StableParams{}, 1.0, 13, 5, 1.0, {2});
  CHECK(o1.rows[1].mean_sup == o2.rows[1].mean_sup);

  const auto m1 = run_moment_sweep(d, e2, 10, {1});
  const auto m2 = run_moment_sweep(d, e2, 10, {4});
  CHECK(m1.rows[0].mean_sup == m2.rows[0].mean_sup);
}

TEST_CASE("parallel_for visits each index once and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) REQUIRE(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 2,
                               [](std::size_t i) {
                                 if (i == 7) throw DomainError("boom");
                               }),
                  DomainError);
}
