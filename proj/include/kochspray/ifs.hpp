#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "kochspray/geometry.hpp"

namespace kochspray {

// x -> ratio * R(rotation) x + translation, with ratio = exp(-a * nu).
struct SimilarityMap {
  double ratio{1.0};
  double rotation{0.0};
  Vec2 translation{};
  int lattice_exponent{0};
  // Index (1..12) of the map this one replaced, if any.
  std::optional<int> parent;
  // Position (1..6) among the six replacement maps.
  std::optional<int> child;

  Vec2 apply(Vec2 x) const;
};

// Phi(k1, k2): the twelve maps of the snowflake spray with phi_1..phi_k1 and
// phi_7..phi_{6+k2} each replaced by six smaller maps.
struct LatticeIFS {
  double lattice_constant{0.0};
  int k1{0};
  int k2{0};
  std::vector<SimilarityMap> entries;

  // Multiplicity of each lattice exponent, index = exponent (0..5).
  std::vector<int> exponent_histogram() const;
  // sum_i r_i^s.
  double ratio_power_sum(double s) const;
  // Real solution of sum_i r_i^D = 1.
  double similarity_dimension() const;
};

struct SprayConfig {
  int k1{0};
  int k2{0};
  double base_length{1.0};

  // Base lengths of the generator components, relative to base_length:
  // 1, then k1 copies of sqrt(3)/3, then k2 copies of 1/3.
  std::vector<double> component_base_lengths() const;
  // Lattice exponents matching component_base_lengths (b_j = e^{-a m_j}).
  std::vector<int> component_exponents() const;
};

struct WordMultiplicities {
  // counts[nu] = number of words w with nu_w = nu. Stored as doubles because
  // they grow like e^{a D nu} and overflow 64-bit integers near nu ~ 60.
  std::vector<double> counts;
};

struct PrefractalBoundary {
  std::vector<std::vector<Vec2>> polylines;  // closed; last point != first
  int depth{0};
  double hausdorff_bound{0.0};
};

void validate_k(int k1, int k2);

LatticeIFS build_ifs(int k1, int k2);
WordMultiplicities word_multiplicities(const LatticeIFS& ifs, int nu_max);

double generator_volume(const SprayConfig& config);
double spray_volume(const SprayConfig& config);

// Depth-n polygon of the snowflake with corners (0,0), (b,0), (b/2, -b*sqrt(3)/2).
PrefractalBoundary prefractal_boundary(double base_length, int depth);

nlohmann::ordered_json to_json(const SimilarityMap& m);
nlohmann::ordered_json to_json(const LatticeIFS& ifs);
nlohmann::ordered_json to_json(const PrefractalBoundary& b);

}  // namespace kochspray
