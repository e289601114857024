#include "kochspray/ifs.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "kochspray/constants.hpp"
#include "kochspray/errors.hpp"
#include "kochspray/koch_distance.hpp"

namespace kochspray {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxPrefractalSegments = std::size_t{1} << 26;

// The six outer maps x -> x/3 + (2 sqrt3 / 3) e^{i (k-1) pi/3}.
SimilarityMap outer_map(int k) {
  const double ang = (k - 1) * kPi / 3.0;
  const double rad = 2.0 * kSqrt3 / 3.0;
  return {1.0 / 3.0, 0.0, {rad * std::cos(ang), rad * std::sin(ang)}, 2, std::nullopt,
          std::nullopt};
}

// The six inner maps x -> R_{pi/6} x / (3 sqrt3) + (2/3) e^{i (pi/6 + (k-7) pi/3)}.
SimilarityMap inner_map(int k) {
  const double ang = kPi / 6.0 + (k - 7) * kPi / 3.0;
  return {1.0 / (3.0 * kSqrt3), kPi / 6.0, {2.0 / 3.0 * std::cos(ang), 2.0 / 3.0 * std::sin(ang)},
          3, std::nullopt, std::nullopt};
}

SimilarityMap compose(const SimilarityMap& f, const SimilarityMap& g) {
  SimilarityMap h;
  h.ratio = f.ratio * g.ratio;
  h.rotation = f.rotation + g.rotation;
  h.translation = f.apply(g.translation);
  h.lattice_exponent = f.lattice_exponent + g.lattice_exponent;
  return h;
}

}  // namespace

Vec2 SimilarityMap::apply(Vec2 x) const { return rotate(x, rotation) * ratio + translation; }

void validate_k(int k1, int k2) {
  if (k1 < 0 || k1 > 6 || k2 < 0 || k2 > 6) {
    throw DomainError("k1 and k2 must lie in {0,...,6}, got (" + std::to_string(k1) + "," +
                      std::to_string(k2) + ")");
  }
}

std::vector<int> LatticeIFS::exponent_histogram() const {
  std::vector<int> h(6, 0);
  for (const auto& e : entries) ++h.at(static_cast<std::size_t>(e.lattice_exponent));
  return h;
}

double LatticeIFS::ratio_power_sum(double s) const {
  double sum = 0.0;
  for (const auto& e : entries) sum += std::exp(-lattice_constant * e.lattice_exponent * s);
  return sum;
}

double LatticeIFS::similarity_dimension() const {
  auto f = [this](double d) { return ratio_power_sum(d) - 1.0; };
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(
      f, 0.0, 2.0, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

std::vector<double> SprayConfig::component_base_lengths() const {
  std::vector<double> b{1.0};
  b.insert(b.end(), static_cast<std::size_t>(k1), kSqrt3 / 3.0);
  b.insert(b.end(), static_cast<std::size_t>(k2), 1.0 / 3.0);
  return b;
}

std::vector<int> SprayConfig::component_exponents() const {
  std::vector<int> m{0};
  m.insert(m.end(), static_cast<std::size_t>(k1), 1);
  m.insert(m.end(), static_cast<std::size_t>(k2), 2);
  return m;
}

LatticeIFS build_ifs(int k1, int k2) {
  validate_k(k1, k2);
  LatticeIFS ifs;
  ifs.lattice_constant = kLatticeConstant;
  ifs.k1 = k1;
  ifs.k2 = k2;
  for (int i = 1; i <= 12; ++i) {
    const SimilarityMap parent = i <= 6 ? outer_map(i) : inner_map(i);
    const bool replaced = (i <= 6 && i <= k1) || (i > 6 && i <= 6 + k2);
    if (!replaced) {
      ifs.entries.push_back(parent);
      continue;
    }
    for (int k = 1; k <= 6; ++k) {
      SimilarityMap m = compose(parent, outer_map(k));
      m.parent = i;
      m.child = k;
      ifs.entries.push_back(m);
    }
  }
  return ifs;
}

WordMultiplicities word_multiplicities(const LatticeIFS& ifs, int nu_max) {
  if (nu_max < 0) throw DomainError("word_multiplicities: nu_max must be >= 0");
  const auto hist = ifs.exponent_histogram();
  WordMultiplicities w;
  w.counts.assign(static_cast<std::size_t>(nu_max) + 1, 0.0);
  w.counts[0] = 1.0;
  for (int nu = 1; nu <= nu_max; ++nu) {
    double c = 0.0;
    for (int j = 1; j < static_cast<int>(hist.size()); ++j) {
      if (hist[j] != 0 && nu - j >= 0) c += hist[j] * w.counts[nu - j];
    }
    w.counts[nu] = c;
  }
  return w;
}

double generator_volume(const SprayConfig& config) {
  validate_k(config.k1, config.k2);
  if (!(config.base_length > 0.0)) throw DomainError("base_length must be positive");
  return kSnowflakeArea * (1.0 + config.k1 / 3.0 + config.k2 / 9.0) * config.base_length *
         config.base_length;
}

double spray_volume(const SprayConfig& config) {
  const LatticeIFS ifs = build_ifs(config.k1, config.k2);
  return generator_volume(config) / (1.0 - ifs.ratio_power_sum(2.0));
}

PrefractalBoundary prefractal_boundary(double base_length, int depth) {
  if (!(base_length > 0.0)) throw DomainError("prefractal_boundary: base_length must be positive");
  if (depth < 0) throw DomainError("prefractal_boundary: depth must be >= 0");
  std::size_t segments = 3;
  for (int i = 0; i < depth; ++i) {
    if (segments > kMaxPrefractalSegments / 4) {
      throw ResourceError("prefractal_boundary: depth " + std::to_string(depth) +
                          " exceeds the segment limit");
    }
    segments *= 4;
  }
  const KochBoundary k(base_length);
  std::vector<Vec2> pts(k.corners().begin(), k.corners().end());
  for (int d = 0; d < depth; ++d) {
    std::vector<Vec2> next;
    next.reserve(pts.size() * 4);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto v = koch_subdivide(pts[i], pts[(i + 1) % pts.size()]);
      next.insert(next.end(), v.begin(), v.end() - 1);
    }
    pts = std::move(next);
  }
  PrefractalBoundary b;
  b.polylines.push_back(std::move(pts));
  b.depth = depth;
  b.hausdorff_bound = kSqrt3 / 6.0 * base_length * std::pow(3.0, -depth);
  return b;
}

nlohmann::ordered_json to_json(const SimilarityMap& m) {
  nlohmann::ordered_json j;
  j["ratio"] = m.ratio;
  j["rotation"] = m.rotation;
  j["translation"] = {m.translation.x, m.translation.y};
  j["lattice_exponent"] = m.lattice_exponent;
  j["parent"] = m.parent ? nlohmann::ordered_json(*m.parent) : nlohmann::ordered_json();
  j["child"] = m.child ? nlohmann::ordered_json(*m.child) : nlohmann::ordered_json();
  return j;
}

nlohmann::ordered_json to_json(const LatticeIFS& ifs) {
  nlohmann::ordered_json j;
  j["lattice_constant"] = ifs.lattice_constant;
  j["k1"] = ifs.k1;
  j["k2"] = ifs.k2;
  j["map_count"] = ifs.entries.size();
  j["exponent_histogram"] = nlohmann::ordered_json::object();
  const auto h = ifs.exponent_histogram();
  for (std::size_t e = 0; e < h.size(); ++e) {
    if (h[e] != 0) j["exponent_histogram"][std::to_string(e)] = h[e];
  }
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& m : ifs.entries) j["entries"].push_back(to_json(m));
  return j;
}

nlohmann::ordered_json to_json(const PrefractalBoundary& b) {
  nlohmann::ordered_json j;
  j["depth"] = b.depth;
  j["hausdorff_bound"] = b.hausdorff_bound;
  j["polylines"] = nlohmann::ordered_json::array();
  for (const auto& line : b.polylines) {
    nlohmann::ordered_json pl = nlohmann::ordered_json::array();
    for (const Vec2& p : line) pl.push_back({p.x, p.y});
    j["polylines"].push_back(std::move(pl));
  }
  return j;
}

}  // namespace kochspray
