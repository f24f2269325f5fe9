#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "sklevy/errors.hpp"
#include "sklevy/integrator.hpp"
#include "sklevy/path_metrics.hpp"

using namespace sklevy;

namespace {

ModelConfig quiet(double eps, Drift f = Drift::zero()) {
  ModelConfig c = canonical_config();
  c.drift = std::move(f);
  c.eps = eps;
  c.n_steps = n_steps_for(eps, c.T);
  return c;
}

NoiseRealization zero_noise(const ModelConfig& c) {
  return NoiseRealization::zeros(uniform_grid(c.T, c.n_steps), c.stable.dim);
}

NoiseRealization random_noise(const ModelConfig& c, std::uint64_t stream = 0) {
  RandomStream rng(c.seed, stream);
  return sample_model_noise(c, rng);
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

}  // namespace

TEST_CASE("equilibrium stays put") {
  ModelConfig c = quiet(0.1);
  c.u0 = {0.4};
  c.v0 = {0.0};
  const auto r = integrate_slow_fast(c, zero_noise(c));
  for (std::size_t k = 0; k < r.U.size(); ++k) {
    CHECK(r.U.node(k)[0] == 0.4);
    CHECK(r.V.node(k)[0] == 0.0);
  }
  CHECK(r.U.interp() == Interp::CadlagStep);
}

TEST_CASE("free velocity decays exactly for eps down to 1e-3") {
  for (double eps : {1.0, 0.1, 0.01, 0.002, 0.001}) {
    ModelConfig c = quiet(eps);
    c.v0 = {-2.5};
    const auto noise = zero_noise(c);
    const auto r = integrate_slow_fast(c, noise);
    for (std::size_t k = 0; k < r.V.size(); ++k) {
      const double exact = -2.5 * std::exp(-noise.times[k] / eps);
      if (std::fabs(exact) < 2.3e-308) continue;  // below the normal range
      INFO("eps " << eps << " k " << k);
      REQUIRE(rel(r.V.node(k)[0], exact) <= 1e-12);
    }
  }
}

TEST_CASE("single unit jump propagates through the velocity") {
  for (double theta : {0.0, 0.3, 0.8}) {
    ModelConfig c = quiet(0.05);
    c.theta = theta;
    c.v0 = {0.0};
    auto noise = zero_noise(c);
    const std::size_t m = 37;
    noise.increments[m] = 1.0;
    const auto r = integrate_slow_fast(c, noise);
    for (std::size_t k = 0; k <= m; ++k) CHECK(r.V.node(k)[0] == 0.0);
    for (std::size_t k = m + 1; k < r.V.size(); ++k) {
      const double exact =
          std::pow(c.eps, theta - 1.0) * std::exp(-(noise.times[k] - noise.times[m + 1]) / c.eps);
      REQUIRE(rel(r.V.node(k)[0], exact) <= 1e-12);
    }
  }
}

TEST_CASE("limit equation examples") {
  ModelConfig c = quiet(0.1);
  c.u0 = {0.25};
  const auto none = integrate_limit(c, zero_noise(c));
  for (std::size_t k = 0; k < none.size(); ++k) CHECK(none.node(k)[0] == 0.25);

  const auto noise = random_noise(c);
  const auto ubar = integrate_limit(c, noise);
  const auto L = noise.cumulative();
  for (std::size_t k = 0; k < ubar.size(); ++k) {
    CHECK(ubar.node(k)[0] == Catch::Approx(0.25 + L[k]).margin(1e-12));
  }
}

TEST_CASE("deterministic Euler oracle for f(x) = -x") {
  ModelConfig c = canonical_config();
  c.drift = Drift::linear_scalar(-1.0, {0.0});
  c.u0 = {1.0};
  c.eps = 0.1;
  c.n_steps = 100;
  const auto ubar = integrate_limit(c, zero_noise(c));
  CHECK(std::fabs(ubar.node(100)[0] - std::pow(0.99, 100)) <= 1e-12);
  CHECK(ubar.node(100)[0] == Catch::Approx(0.3660).margin(1e-4));
}

TEST_CASE("linear system") {
  ModelConfig c = quiet(0.05);
  c.theta = 0.4;
  const auto zero = integrate_linear(c, zero_noise(c));
  for (std::size_t k = 0; k < zero.u.size(); ++k) {
    CHECK(zero.u.node(k)[0] == 0.0);
    CHECK(zero.v.node(k)[0] == 0.0);
  }

  const auto noise = random_noise(c, 3);
  const auto lin = integrate_linear(c, noise);
  const double alpha = c.stable.alpha;
  const double a = std::exp(-c.step() / c.eps);
  // w-scheme: w_{k+1} = a w_k + eps^{-1/alpha} dL_k.
  std::vector<double> w(noise.times.size(), 0.0);
  for (std::size_t k = 0; k < noise.steps(); ++k) {
    w[k + 1] = a * w[k] + std::pow(c.eps, -1.0 / alpha) * noise.increments[k];
  }
  const double scale = std::pow(c.eps, c.theta + 1.0 / alpha - 1.0);
  double wmax = 0.0;
  for (double v : w) wmax = std::max(wmax, std::fabs(v));
  for (std::size_t k = 0; k < w.size(); ++k) {
    REQUIRE(std::fabs(lin.v.node(k)[0] - scale * w[k]) <= 1e-12 * scale * wmax);
  }

  const auto L = noise.cumulative();
  const double gain = std::pow(c.eps, c.theta);
  double lmax = 0.0;
  for (double v : L) lmax = std::max(lmax, std::fabs(v));
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double identity = gain * (L[k] - std::pow(c.eps, 1.0 / alpha) * w[k]);
    REQUIRE(std::fabs(lin.u.node(k)[0] - identity) <= 1e-12 * gain * (lmax + std::pow(c.eps, 1.0 / alpha) * wmax));
  }
  CHECK(lin.u.interp() == Interp::Linear);
}

TEST_CASE("OU convolution") {
  ModelConfig c = quiet(0.02);
  const auto none = integrate_ou(c.eps, zero_noise(c));
  for (std::size_t k = 0; k < none.size(); ++k) CHECK(none.node(k)[0] == 0.0);

  auto noise = zero_noise(c);
  const std::size_t m = 100;
  noise.increments[m] = 1.0;
  const auto z = integrate_ou(c.eps, noise);
  for (std::size_t k = m + 1; k < z.size(); ++k) {
    const double exact = std::exp(-(noise.times[k] - noise.times[m + 1]) / c.eps);
    REQUIRE(rel(z.node(k)[0], exact) <= 1e-12);
  }
  CHECK_THROWS_AS(integrate_ou(0.001, noise), StiffnessError);
}

TEST_CASE("OU terminal scale follows (eps/alpha)^{1/alpha}") {
  const StableParams p{1.5, 1.0, 1};
  std::vector<double> lx, ly;
  for (double eps : {0.1, 0.05, 0.02}) {
    const auto grid = uniform_grid(1.0, n_steps_for(eps, 1.0));
    double s = 0.0;
    const int n = 10000;
    for (int j = 0; j < n; ++j) {
      RandomStream rng(5, replicate_stream_id(0, j));
      const auto z = integrate_ou(eps, sample_noise_realization(p, grid, rng));
      s += std::fabs(z.node(z.size() - 1)[0]);
    }
    lx.push_back(std::log(eps));
    ly.push_back(std::log(s / n));
  }
  const double mx = (lx[0] + lx[1] + lx[2]) / 3.0, my = (ly[0] + ly[1] + ly[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
  CHECK(sxy / sxx == Catch::Approx(1.0 / 1.5).margin(0.1));
}

TEST_CASE("slow-fast and limit consume identical increments") {
  ModelConfig c = quiet(0.03, Drift::sine(1.0));
  c.theta = 0.3;
  const auto noise = random_noise(c, 1);
  IncrementAudit a, b;
  integrate_slow_fast(c, noise, &a);
  integrate_limit(c, noise, &b);
  CHECK(a.consumed == noise.increments.size());
  CHECK(a == b);
  IncrementAudit other;
  integrate_limit(c, random_noise(c, 2), &other);
  CHECK_FALSE(a == other);
}

TEST_CASE("guards and mismatches") {
  ModelConfig c = quiet(0.1);
  c.n_steps = 50;
  CHECK_THROWS_AS(c.validate(), StiffnessError);
  CHECK_THROWS_WITH(c.validate(), Catch::Matchers::ContainsSubstring("stiffness guard"));
  c = quiet(0.1);
  auto noise = zero_noise(quiet(0.05));
  CHECK_THROWS_AS(integrate_slow_fast(c, noise), DomainError);
  CHECK_THROWS_AS(integrate_limit(c, noise), DomainError);
  ModelConfig bad = quiet(0.1);
  bad.theta = 1.0;
  CHECK_THROWS_WITH(bad.validate(), Catch::Matchers::ContainsSubstring("theta must lie in [0,1)"));
  bad = quiet(0.1);
  bad.eps = 1.5;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  auto uneven = NoiseRealization::zeros({0.0, 0.001, 1.0}, 1);
  ModelConfig two = quiet(0.1);
  two.n_steps = 2;
  CHECK_THROWS(integrate_slow_fast(two, uneven));
}

TEST_CASE("step count rule") {
  CHECK(n_steps_for(0.125, 1.0) == 128);
  CHECK(n_steps_for(0.1, 1.0) == 128);
  CHECK(n_steps_for(1.0, 1.0) == 16);
  CHECK(n_steps_for(0.002, 1.0) == 8192);
  for (double eps : {0.3, 0.01, 0.0037}) {
    const auto n = n_steps_for(eps, 2.0);
    CHECK(2.0 / n <= eps / 10.0);
    CHECK((n & (n - 1)) == 0);
  }
}

TEST_CASE("halving the step changes U by O(h)") {
  ModelConfig base = canonical_config();
  base.eps = 0.1;
  base.theta = 0.5;
  // Fixed smooth noise path L(t) = t + 0.5 sin(7t), sampled on each grid.
  const auto L = [](double t) { return t + 0.5 * std::sin(7.0 * t); };
  const auto run = [&](std::size_t n) {
    ModelConfig c = base;
    c.n_steps = n;
    auto noise = NoiseRealization::zeros(uniform_grid(c.T, n), 1);
    for (std::size_t k = 0; k < n; ++k) noise.increments[k] = L(noise.times[k + 1]) - L(noise.times[k]);
    return integrate_slow_fast(c, noise).U;
  };
  std::vector<double> lh, ld;
  for (std::size_t n = 128; n <= 4096; n *= 2) {
    const auto coarse = run(n);
    const auto finer = run(2 * n);
    double d = 0.0;
    for (std::size_t k = 0; k <= n; ++k) d = std::max(d, std::fabs(coarse.node(k)[0] - finer.node(2 * k)[0]));
    lh.push_back(std::log(1.0 / n));
    ld.push_back(std::log(d));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lh.size(); ++i) mx += lh[i] / lh.size(), my += ld[i] / lh.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lh.size(); ++i) sxy += (lh[i] - mx) * (ld[i] - my), sxx += (lh[i] - mx) * (lh[i] - mx);
  CHECK(sxy / sxx >= 0.9);
}

TEST_CASE("coupled trajectories share the grid and initial data") {
  ModelConfig c = quiet(0.05, Drift::tanh(0.5));
  c.u0 = {0.3};
  c.v0 = {-1.0};
  const auto noise = random_noise(c);
  const auto tr = simulate_coupled(c, noise, {true, true});
  REQUIRE(tr.u_lin);
  REQUIRE(tr.v_lin);
  REQUIRE(tr.Z);
  for (const GridPath* p : {&tr.U, &tr.V, &tr.Ubar, &*tr.u_lin, &*tr.v_lin, &*tr.Z}) {
    CHECK(std::equal(p->times().begin(), p->times().end(), noise.times.begin()));
  }
  CHECK(tr.U.node(0)[0] == 0.3);
  CHECK(tr.Ubar.node(0)[0] == 0.3);
  CHECK(tr.V.node(0)[0] == -1.0);
  CHECK(tr.u_lin->node(0)[0] == 0.0);
  CHECK(tr.v_lin->node(0)[0] == 0.0);
  CHECK(tr.Z->node(0)[0] == 0.0);
  CHECK(tr.noise == &noise);
  const auto plain = simulate_coupled(c, noise);
  CHECK_FALSE(plain.Z);
}

TEST_CASE("outputs are byte-identical for identical inputs") {
  ModelConfig c = quiet(0.02, Drift::sine(1.0));
  c.stable.dim = 2;
  c.u0 = {0.1, -0.1};
  c.v0 = {1.0, 0.5};
  c.theta = 0.25;
  const auto n1 = random_noise(c, 9);
  const auto n2 = random_noise(c, 9);
  const auto a = integrate_slow_fast(c, n1);
  const auto b = integrate_slow_fast(c, n2);
  CHECK(std::memcmp(a.U.values().data(), b.U.values().data(), a.U.values().size_bytes()) == 0);
  CHECK(std::memcmp(a.V.values().data(), b.V.values().data(), a.V.values().size_bytes()) == 0);
}

TEST_CASE("noise scale multiplies every increment") {
  ModelConfig c = quiet(0.05);
  RandomStream r1(c.seed, 4), r2(c.seed, 4);
  const auto unit = sample_model_noise(c, r1);
  c.noise_scale = 0.5;
  const auto half = sample_model_noise(c, r2);
  for (std::size_t k = 0; k < unit.increments.size(); ++k) {
    CHECK(half.increments[k] == 0.5 * unit.increments[k]);
  }
}
