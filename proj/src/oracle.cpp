#include "kochspray/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "kochspray/constants.hpp"
#include "kochspray/errors.hpp"
#include "kochspray/koch_distance.hpp"

namespace kochspray {

namespace {

constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

struct Cell {
  double cx, cy, h;  // centre and half side
};

struct LeafResult {
  double mean{0.0};      // fraction of the cell in the complement set
  double var_mean{0.0};  // variance of that mean
  double ambiguous{0.0}; // fraction whose status is undecided at this depth
};

}  // namespace

double distance_to_boundary(Vec2 p, const PrefractalBoundary& boundary) {
  if (boundary.polylines.empty()) throw DomainError("distance_to_boundary: empty boundary");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& line : boundary.polylines) {
    const std::size_t n = line.size();
    if (n == 1) best = std::min(best, dot(p - line[0], p - line[0]));
    for (std::size_t i = 0; n > 1 && i < n; ++i) {
      best = std::min(best, point_segment_distance_sq(p, line[i], line[(i + 1) % n]));
    }
  }
  return std::sqrt(best);
}

int default_oracle_depth(double eps, double base_length, double divisor) {
  if (!(eps > 0.0) || !(base_length > 0.0) || !(divisor > 0.0)) {
    throw DomainError("default_oracle_depth: arguments must be positive");
  }
  int n = 0;
  while (kSqrt3 / 6.0 * base_length * std::pow(3.0, -n) > eps / divisor) ++n;
  return n;
}

double prefractal_area_deficit(double base_length, int depth) {
  return 3.0 * kSqrt3 / 20.0 * std::pow(4.0 / 9.0, depth) * base_length * base_length;
}

// Estimates the area of C = {x in K : dist(x, boundary) >= eps} for the unit
// snowflake and returns area(K) - C. Coarse cells are classified from the
// polygon distance at their centre; cells straddling the level set are
// refined down to size ~eps/2 and then sampled.
OracleEstimate parallel_volume_estimate(double eps, double base_length, const OracleOptions& opt) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("parallel_volume_estimate: eps must be positive");
  if (!(base_length > 0.0)) throw DomainError("parallel_volume_estimate: base length must be positive");
  if (opt.budget < 1) throw DomainError("parallel_volume_estimate: budget must be positive");

  const double e = eps / base_length;
  const int depth = opt.depth >= 0 ? opt.depth : default_oracle_depth(e, 1.0, opt.depth_divisor);
  const double hd = kSqrt3 / 6.0 * std::pow(3.0, -depth);
  const KochBoundary k(1.0);

  // Bounding square of the circumscribed circle.
  const Vec2 centre = k.center();
  const double half0 = 1.0 / kSqrt3 + 1e-9;

  enum class Kind { Full, Empty, Mixed };
  auto classify = [&](const Cell& c) {
    const Vec2 p{c.cx, c.cy};
    const double r = c.h * std::sqrt(2.0);
    const double d = k.polyline_distance(p, depth);
    if (d + r + hd < e) return Kind::Empty;
    if (d - r - hd >= e) {
      // No polygon edge meets the cell, so membership is uniform.
      return k.prefractal_contains(p, depth) ? Kind::Full : Kind::Empty;
    }
    return Kind::Mixed;
  };

  int max_level = 0;
  while (2.0 * half0 / std::ldexp(1.0, max_level) > e / 2.0 && max_level < 14) ++max_level;

  double full_area = 0.0;
  std::vector<Cell> level{{centre.x, centre.y, half0}};
  for (int lvl = 0;; ++lvl) {
    std::vector<Cell> mixed;
    for (const Cell& c : level) {
      const Kind kind = classify(c);
      if (kind == Kind::Full) full_area += 4.0 * c.h * c.h;
      if (kind == Kind::Mixed) mixed.push_back(c);
    }
    level = std::move(mixed);
    if (lvl == max_level || level.empty()) break;
    std::vector<Cell> next;
    next.reserve(level.size() * 4);
    for (const Cell& c : level) {
      const double q = 0.5 * c.h;
      next.push_back({c.cx - q, c.cy - q, q});
      next.push_back({c.cx + q, c.cy - q, q});
      next.push_back({c.cx - q, c.cy + q, q});
      next.push_back({c.cx + q, c.cy + q, q});
    }
    level = std::move(next);
  }

  const std::size_t leaves = level.size();
  const long long per_leaf =
      leaves == 0 ? 0 : std::max<long long>(2, opt.budget / static_cast<long long>(leaves));
  std::vector<LeafResult> results(leaves);

  auto run_leaf = [&](std::size_t i) {
    const Cell& c = level[i];
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double sum = 0.0, sum2 = 0.0, amb = 0.0;
    for (long long s = 0; s < per_leaf; ++s) {
      const Vec2 p{c.cx + c.h * u(rng), c.cy + c.h * u(rng)};
      const double d = k.polyline_distance(p, depth);
      double w = 0.0;
      if (d + hd >= e && k.prefractal_contains(p, depth)) {
        if (d - hd >= e) {
          w = 1.0;
        } else {
          w = 0.5;
          amb += 1.0;
        }
      }
      sum += w;
      sum2 += w * w;
    }
    const double n = static_cast<double>(per_leaf);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
    results[i] = {mean, var / n, amb / n};
  };

  const int workers = std::max(1, opt.workers);
  if (workers == 1 || leaves < 64) {
    for (std::size_t i = 0; i < leaves; ++i) run_leaf(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = static_cast<std::size_t>(w); i < leaves; i += static_cast<std::size_t>(workers)) {
          run_leaf(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  double c_area = full_area, var = 0.0, amb_area = 0.0;
  for (std::size_t i = 0; i < leaves; ++i) {
    const double a = 4.0 * level[i].h * level[i].h;
    c_area += a * results[i].mean;
    var += a * a * results[i].var_mean;
    amb_area += a * results[i].ambiguous;
  }

  OracleEstimate out;
  out.depth = depth;
  out.samples = static_cast<long long>(leaves) * per_leaf;
  out.value = kSnowflakeArea - c_area;
  out.deterministic_bound = 0.5 * amb_area;
  // Points of K outside the polygon lie in depth-n hull triangles, within
  // 3^-n / sqrt3 of the curve; if that is not below eps their status is open.
  if (std::pow(3.0, -depth) / kSqrt3 >= e) {
    const double deficit = prefractal_area_deficit(1.0, depth);
    out.value -= 0.5 * deficit;
    out.deterministic_bound += 0.5 * deficit;
  }
  out.stochastic_bound = kZ99 * std::sqrt(var);

  const double b2 = base_length * base_length;
  out.value *= b2;
  out.deterministic_bound *= b2;
  out.stochastic_bound *= b2;
  if (opt.tolerance > 0.0 && out.stochastic_bound > opt.tolerance) {
    throw PrecisionError("parallel_volume_estimate: budget exhausted before reaching tolerance",
                         out.stochastic_bound);
  }
  return out;
}

OracleEstimate OracleCache::get(double eps_rel, const OracleOptions& opt) {
  const auto key = std::make_tuple(eps_rel, opt.depth, opt.depth_divisor, opt.budget, opt.seed);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  OracleEstimate est = parallel_volume_estimate(eps_rel, 1.0, opt);
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(key, est);
  return est;
}

namespace {

OracleEstimate unit_estimate(double eps_rel, const OracleOptions& opt, OracleCache* cache) {
  OracleOptions o = opt;
  o.tolerance = 0.0;
  return cache ? cache->get(eps_rel, o) : parallel_volume_estimate(eps_rel, 1.0, o);
}

void accumulate(OracleEstimate& sum, const OracleEstimate& e, double weight) {
  sum.value += weight * e.value;
  sum.deterministic_bound += weight * e.deterministic_bound;
  // Copies share one estimate, so their errors add linearly.
  sum.stochastic_bound += weight * e.stochastic_bound;
  sum.samples += e.samples;
  sum.depth = std::max(sum.depth, e.depth);
}

}  // namespace

OracleEstimate generator_parallel_volume_estimate(const SprayConfig& config, double eps,
                                                  const OracleOptions& opt, OracleCache* cache) {
  validate_k(config.k1, config.k2);
  OracleEstimate sum;
  for (double rel : config.component_base_lengths()) {
    const double b = rel * config.base_length;
    accumulate(sum, unit_estimate(eps / b, opt, cache), b * b);
  }
  return sum;
}

OracleEstimate spray_parallel_volume_estimate(const SprayConfig& config, double eps, int nu_max,
                                              const OracleOptions& opt, OracleCache* cache) {
  validate_k(config.k1, config.k2);
  if (!(eps > 0.0)) throw DomainError("spray_parallel_volume_estimate: eps must be positive");
  if (nu_max < 0) throw DomainError("spray_parallel_volume_estimate: nu_max must be >= 0");
  const double a = kLatticeConstant;
  const LatticeIFS ifs = build_ifs(config.k1, config.k2);
  const double total_weight = 1.0 / (1.0 - ifs.ratio_power_sum(2.0));

  // Enough levels to reach the submerged copies of every component.
  int top = nu_max;
  for (int m : config.component_exponents()) {
    const double b = config.base_length * std::exp(-a * m);
    top = std::max(top, static_cast<int>(std::ceil(std::log(b / (3.0 * eps)) / a)) + 1);
  }
  const auto c = word_multiplicities(ifs, top);

  OracleEstimate sum;
  for (int m : config.component_exponents()) {
    double partial = 0.0;
    for (int nu = 0; nu <= top; ++nu) {
      const double b = config.base_length * std::exp(-a * (nu + m));
      if (b / 3.0 <= eps) break;  // inradius below eps: the copy is entirely in the neighbourhood
      const double weight = c.counts[nu];
      partial += weight * std::exp(-2.0 * a * nu);
      if (nu <= nu_max) {
        accumulate(sum, unit_estimate(eps / b, opt, cache), weight * b * b);
      } else {
        const double full = weight * kSnowflakeArea * b * b;
        sum.value += 0.5 * full;
        sum.deterministic_bound += 0.5 * full;
      }
    }
    const double b_m = config.base_length * std::exp(-a * m);
    sum.value += kSnowflakeArea * b_m * b_m * (total_weight - partial);
  }
  return sum;
}

nlohmann::ordered_json to_json(const OracleEstimate& e) {
  nlohmann::ordered_json j;
  j["value"] = e.value;
  j["deterministic_bound"] = e.deterministic_bound;
  j["stochastic_bound"] = e.stochastic_bound;
  j["samples"] = e.samples;
  j["depth"] = e.depth;
  return j;
}

}  // namespace kochspray
