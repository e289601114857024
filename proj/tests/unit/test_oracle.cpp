#include <doctest.h>

#include <cmath>

#include "kochspray/constants.hpp"
#include "kochspray/errors.hpp"
#include "kochspray/expansion.hpp"
#include "kochspray/ifs.hpp"
#include "kochspray/oracle.hpp"
#include "kochspray/snowflake_volume.hpp"

using namespace kochspray;

TEST_CASE("oracle depth and deficit") {
  CHECK(default_oracle_depth(0.1, 1.0, 10.0) == 4);  // (sqrt3/6) 3^-n <= 0.01
  CHECK(prefractal_area_deficit(1.0, 0) == doctest::Approx(3 * kSqrt3 / 20));
  // triangle of side 1 plus the deficit is the snowflake
  CHECK(kSqrt3 / 4 + prefractal_area_deficit(1.0, 0) == doctest::Approx(kSnowflakeArea));
  CHECK_THROWS_AS(default_oracle_depth(0.0, 1.0), DomainError);
}

TEST_CASE("distance to a polyline") {
  PrefractalBoundary b;
  b.polylines = {{{0, 0}, {1, 0}, {0.5, -kSqrt3 / 2}}};
  CHECK(distance_to_boundary({0.5, 0.5}, b) == doctest::Approx(0.5));
  CHECK(distance_to_boundary({0.5, -kSqrt3 / 6}, b) == doctest::Approx(kSqrt3 / 6));
  CHECK_THROWS_AS(distance_to_boundary({0, 0}, PrefractalBoundary{}), DomainError);
}

TEST_CASE("oracle matches the closed form") {
  OracleOptions o;
  o.budget = 50000;
  o.depth_divisor = 50;
  for (double eps : {0.5, 0.2, 0.05}) {
    const auto est = parallel_volume_estimate(eps, 1.0, o);
    const auto cf = snowflake_parallel_volume(eps);
    CHECK(std::abs(est.value - cf.area) <= est.total_bound() + 1e-4);
  }
  // base length scaling
  const auto big = parallel_volume_estimate(0.4, 2.0, o);
  CHECK(std::abs(big.value - snowflake_parallel_volume(0.4, 2.0).area) <= big.total_bound() + 4e-4);
}

TEST_CASE("oracle is deterministic for a fixed seed") {
  OracleOptions o;
  o.budget = 20000;
  o.seed = 7;
  const auto a = parallel_volume_estimate(0.05, 1.0, o);
  const auto b = parallel_volume_estimate(0.05, 1.0, o);
  CHECK(a.value == b.value);
  CHECK(a.stochastic_bound == b.stochastic_bound);
  o.workers = 3;
  const auto c = parallel_volume_estimate(0.05, 1.0, o);
  CHECK(c.value == a.value);
  o.seed = 8;
  CHECK(parallel_volume_estimate(0.05, 1.0, o).value != a.value);
}

TEST_CASE("tolerance request") {
  OracleOptions o;
  o.budget = 100;
  o.tolerance = 1e-9;
  CHECK_THROWS_AS(parallel_volume_estimate(0.01, 1.0, o), PrecisionError);
}

TEST_CASE("generator and spray estimates") {
  OracleOptions o;
  o.budget = 20000;
  o.depth_divisor = 50;
  OracleCache cache;
  const SprayConfig cfg{1, 1, 1.0};
  const auto g = generator_parallel_volume_estimate(cfg, 0.1, o, &cache);
  CHECK(std::abs(g.value - generator_parallel_volume(cfg, 0.1).area) <= g.total_bound() + 1e-4);
  // copies at nu = 1, 2, 3 are not swallowed at this eps
  const double eps = std::exp(-6 * kLatticeConstant);
  const auto s = spray_parallel_volume_estimate(cfg, eps, 10, o, &cache);
  CHECK(std::abs(s.value - spray_parallel_volume_exact(cfg, eps).area) <= s.total_bound() + 1e-4);
  // nu_max = 0 leaves unsubmerged deeper copies as [0, full]
  const auto coarse = spray_parallel_volume_estimate(cfg, eps, 0, o, &cache);
  CHECK(coarse.deterministic_bound > s.deterministic_bound);
  CHECK(std::abs(coarse.value - spray_parallel_volume_exact(cfg, eps).area) <= coarse.total_bound() + 1e-4);
}
