#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>

#include <json.hpp>

#include "kochspray/ifs.hpp"

namespace kochspray {

struct OracleEstimate {
  double value{0.0};
  double deterministic_bound{0.0};  // prefractal approximation
  double stochastic_bound{0.0};     // 99% confidence half-width
  long long samples{0};
  int depth{0};
  double total_bound() const { return deterministic_bound + stochastic_bound; }
};

struct OracleOptions {
  int depth{-1};            // < 0: smallest n with (sqrt3/6) 3^-n <= eps / depth_divisor
  double depth_divisor{10.0};
  long long budget{200000};  // samples
  std::uint64_t seed{1};
  int workers{1};
  // Requested stochastic tolerance; 0 disables the check.
  double tolerance{0.0};
};

// Exact Euclidean distance from p to the segments of the polylines.
double distance_to_boundary(Vec2 p, const PrefractalBoundary& boundary);

// Depth used for a snowflake of base b at neighbourhood width eps.
int default_oracle_depth(double eps, double base_length, double divisor = 10.0);

// Area of K minus its depth-n polygon: (3 sqrt3 / 20) (4/9)^n b^2.
double prefractal_area_deficit(double base_length, int depth);

// Stratified estimate of vol{x in K : dist(x, boundary K) < eps} for the
// snowflake of the given base length.
OracleEstimate parallel_volume_estimate(double eps, double base_length,
                                        const OracleOptions& opt = {});

// Memo for per-level estimates; all copies at one lattice level are
// congruent, and the unit-snowflake estimate at eps/b serves every base b.
class OracleCache {
 public:
  OracleEstimate get(double eps_rel, const OracleOptions& opt);

 private:
  std::mutex mu_;
  std::map<std::tuple<double, int, double, long long, std::uint64_t>, OracleEstimate> memo_;
};

OracleEstimate generator_parallel_volume_estimate(const SprayConfig& config, double eps,
                                                  const OracleOptions& opt = {},
                                                  OracleCache* cache = nullptr);

// Sum over words with nu <= nu_max; copies with inradius b/3 <= eps are
// counted exactly. Unsubmerged copies beyond nu_max enter as [0, full area].
OracleEstimate spray_parallel_volume_estimate(const SprayConfig& config, double eps, int nu_max,
                                              const OracleOptions& opt = {},
                                              OracleCache* cache = nullptr);

nlohmann::ordered_json to_json(const OracleEstimate& e);

}  // namespace kochspray
