#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "sklevy/kernels/kernels.hpp"
#include "sklevy/rng.hpp"

namespace k = sklevy::kernels;

namespace {

std::vector<double> heavy(std::size_t n, std::uint64_t stream) {
  sklevy::RandomStream rng(2024, stream);
  std::vector<double> v(n);
  for (auto& x : v) x = (rng.uniform_open() - 0.5) / std::pow(rng.uniform_open(), 0.7);
  return v;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("scalar table is first and always present") {
  const auto tables = k::available_tables();
  REQUIRE(!tables.empty());
  CHECK(tables.front() == &k::scalar_table());
  CHECK(tables.front()->name == "scalar");
  CHECK_FALSE(k::select("no-such-kernel"));
}

TEST_CASE("every variant matches the scalar reference bit for bit") {
  const auto& ref = k::scalar_table();
  for (const auto* t : k::available_tables()) {
    INFO("variant " << t->name);
    for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 1000, 1027}) {
      INFO("n " << n);
      const auto a = heavy(n, 1), b = heavy(n, 2), c = heavy(n, 3);
      CHECK(same_bits(t->max_abs_diff(a.data(), b.data(), n), ref.max_abs_diff(a.data(), b.data(), n)));
      CHECK(same_bits(t->max_abs(a.data(), n), ref.max_abs(a.data(), n)));
      std::vector<double> o1(n), o2(n);
      t->combine3(a.data(), 1.7, b.data(), c.data(), -0.3, o1.data(), n);
      ref.combine3(a.data(), 1.7, b.data(), c.data(), -0.3, o2.data(), n);
      CHECK(std::memcmp(o1.data(), o2.data(), n * sizeof(double)) == 0);
    }
    for (std::size_t steps : {0, 1, 5, 257}) {
      const auto incr = heavy(steps * k::kOuLanes, 4);
      double zf1[k::kOuLanes], zs1[k::kOuLanes], zf2[k::kOuLanes], zs2[k::kOuLanes];
      t->ou_lanes(incr.data(), steps, 0.93, zf1, zs1);
      ref.ou_lanes(incr.data(), steps, 0.93, zf2, zs2);
      CHECK(std::memcmp(zf1, zf2, sizeof zf1) == 0);
      CHECK(std::memcmp(zs1, zs2, sizeof zs1) == 0);
    }
  }
}

TEST_CASE("scalar reference semantics") {
  const auto& ref = k::scalar_table();
  const double a[] = {1.0, -4.0, 2.5};
  const double b[] = {0.5, 1.0, 2.0};
  CHECK(ref.max_abs_diff(a, b, 3) == 5.0);
  CHECK(ref.max_abs(a, 3) == 4.0);
  CHECK(ref.max_abs(a, 0) == 0.0);
  double out[3];
  ref.combine3(a, 2.0, b, b, 10.0, out, 3);
  CHECK(out[0] == 7.5);
  CHECK(out[1] == 3.0);
  CHECK(out[2] == 27.0);

  // Lane l sees increments l+1 at every step.
  std::vector<double> incr;
  for (int s = 0; s < 3; ++s)
    for (std::size_t l = 0; l < k::kOuLanes; ++l) incr.push_back(static_cast<double>(l + 1));
  double zf[k::kOuLanes], zs[k::kOuLanes];
  ref.ou_lanes(incr.data(), 3, 0.5, zf, zs);
  for (std::size_t l = 0; l < k::kOuLanes; ++l) {
    CHECK(zf[l] == Catch::Approx(1.75 * (l + 1)));
    CHECK(zs[l] == zf[l]);
  }
}

TEST_CASE("span wrappers reject mismatched lengths") {
  std::vector<double> a(3), b(4), out(3);
  CHECK_THROWS(k::max_abs_diff(a, b));
  CHECK_THROWS(k::combine3(a, 1.0, b, a, 1.0, out));
}

TEST_CASE("select switches the active table") {
  const auto name = k::active().name;
  REQUIRE(k::select("scalar"));
  CHECK(k::active().name == "scalar");
  REQUIRE(k::select(name));
  CHECK(k::active().name == name);
}
