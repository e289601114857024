#include <doctest.h>

#include <cmath>

#include "kochspray/constants.hpp"
#include "kochspray/errors.hpp"
#include "kochspray/ifs.hpp"

using namespace kochspray;

TEST_CASE("build_ifs map counts and histograms") {
  const auto i00 = build_ifs(0, 0);
  CHECK(i00.entries.size() == 12);
  const auto h00 = i00.exponent_histogram();
  CHECK(h00[2] == 6);
  CHECK(h00[3] == 6);
  CHECK(build_ifs(1, 0).entries.size() == 17);
  const auto h66 = build_ifs(6, 6).exponent_histogram();
  CHECK(build_ifs(6, 6).entries.size() == 72);
  CHECK(h66[2] == 0);
  CHECK(h66[3] == 0);
  CHECK(h66[4] == 36);
  CHECK(h66[5] == 36);
  CHECK(i00.lattice_constant == doctest::Approx(std::log(3.0) / 2).epsilon(1e-15));
}

TEST_CASE("build_ifs rejects out-of-range k") {
  CHECK_THROWS_AS(build_ifs(7, 0), DomainError);
  CHECK_THROWS_AS(build_ifs(0, -1), DomainError);
}

TEST_CASE("ratios sit on the lattice") {
  for (const auto& m : build_ifs(3, 4).entries) {
    CHECK(m.ratio == doctest::Approx(std::pow(3.0, -m.lattice_exponent / 2.0)).epsilon(1e-14));
  }
}

TEST_CASE("replacement maps are the outer ring inside the replaced copy") {
  const auto ifs = build_ifs(6, 6);
  const auto base = build_ifs(0, 0);
  int replaced = 0;
  for (const auto& m : ifs.entries) {
    if (!m.parent) continue;
    ++replaced;
    const auto& p = base.entries[static_cast<std::size_t>(*m.parent - 1)];
    const auto& ring = base.entries[static_cast<std::size_t>(*m.child - 1)];
    CHECK(m.lattice_exponent == p.lattice_exponent + 2);
    for (Vec2 x : {Vec2{0.0, 0.0}, Vec2{0.3, -0.2}, Vec2{-1.0, 0.5}}) {
      const Vec2 want = p.apply(ring.apply(x));
      CHECK(distance(m.apply(x), want) <= 1e-14);
    }
  }
  CHECK(replaced == 72);
}

TEST_CASE("word multiplicities, small levels") {
  const auto c = word_multiplicities(build_ifs(0, 0), 6);
  CHECK(c.counts[0] == 1);
  CHECK(c.counts[1] == 0);
  CHECK(c.counts[2] == 6);
  CHECK(c.counts[3] == 6);
  // words of length two: exponents 2+2 and 2+3 / 3+2
  int c4 = 0, c5 = 0;
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      const int nu = (i < 6 ? 2 : 3) + (j < 6 ? 2 : 3);
      c4 += nu == 4;
      c5 += nu == 5;
    }
  }
  CHECK(c.counts[4] == c4);
  CHECK(c.counts[5] == c5);
  CHECK(c4 == 36);
  CHECK(c5 == 72);
}

TEST_CASE("generator and spray volumes") {
  CHECK(generator_volume({0, 0, 1.0}) == doctest::Approx(2 * kSqrt3 / 5).epsilon(1e-15));
  CHECK(generator_volume({1, 0, 1.0}) == doctest::Approx(8 * kSqrt3 / 15).epsilon(1e-15));
  CHECK(generator_volume({0, 6, 1.0}) == doctest::Approx(2 * kSqrt3 / 3).epsilon(1e-15));
  CHECK(generator_volume({0, 0, 2.0}) == doctest::Approx(8 * kSqrt3 / 5).epsilon(1e-15));
  CHECK(build_ifs(0, 0).ratio_power_sum(2.0) == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(build_ifs(6, 6).ratio_power_sum(2.0) == doctest::Approx(16.0 / 27.0).epsilon(1e-15));
  CHECK(build_ifs(0, 6).ratio_power_sum(2.0) == doctest::Approx(22.0 / 27.0).epsilon(1e-15));
  for (int k1 = 0; k1 <= 6; ++k1) {
    for (int k2 = 0; k2 <= 6; ++k2) {
      CHECK(spray_volume({k1, k2, 1.0}) == doctest::Approx(18 * kSqrt3 / 5).epsilon(1e-12));
    }
  }
}

TEST_CASE("component layout") {
  const SprayConfig c{2, 3, 1.0};
  const auto b = c.component_base_lengths();
  const auto m = c.component_exponents();
  REQUIRE(b.size() == 6);
  REQUIRE(m.size() == 6);
  CHECK(b[0] == 1.0);
  CHECK(b[1] == doctest::Approx(kSqrt3 / 3));
  CHECK(b[5] == doctest::Approx(1.0 / 3));
  for (std::size_t j = 0; j < b.size(); ++j) CHECK(b[j] == doctest::Approx(std::exp(-kLatticeConstant * m[j])));
}

TEST_CASE("prefractal boundary") {
  const auto b0 = prefractal_boundary(1.0, 0);
  REQUIRE(b0.polylines.size() == 1);
  CHECK(b0.polylines[0].size() == 3);
  const auto b2 = prefractal_boundary(1.0, 2);
  std::size_t n = 0;
  for (const auto& l : b2.polylines) {
    n += l.size();
    for (std::size_t i = 0; i < l.size(); ++i) CHECK(distance(l[i], l[(i + 1) % l.size()]) == doctest::Approx(1.0 / 9));
  }
  CHECK(n == 48);

  // The depth-6 vertices approach the depth-3 polyline no further than the bump height.
  const auto b3 = prefractal_boundary(1.0, 3);
  CHECK(b3.hausdorff_bound == doctest::Approx(kSqrt3 / 6 / 27).epsilon(1e-15));
  const auto b6 = prefractal_boundary(1.0, 6);
  double worst = 0.0;
  for (const Vec2& p : b6.polylines[0]) {
    double best = 1e9;
    const auto& l = b3.polylines[0];
    for (std::size_t i = 0; i < l.size(); ++i) best = std::min(best, point_segment_distance(p, l[i], l[(i + 1) % l.size()]));
    worst = std::max(worst, best);
  }
  CHECK(worst <= b3.hausdorff_bound + 1e-12);
  CHECK(worst >= 0.9 * b3.hausdorff_bound);
}

TEST_CASE("prefractal depth limit") { CHECK_THROWS_AS(prefractal_boundary(1.0, 40), ResourceError); }

TEST_CASE("json serialization") {
  const auto j = to_json(build_ifs(1, 0));
  CHECK(j["k1"] == 1);
  CHECK(j["entries"].size() == 17);
}
