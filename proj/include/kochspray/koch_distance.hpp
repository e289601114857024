#pragma once

#include <array>

#include "kochspray/geometry.hpp"

namespace kochspray {

struct DistanceBracket {
  double lower{0.0};
  double upper{0.0};
  double mid() const { return 0.5 * (lower + upper); }
};

// Distance to the boundary of the *limit* Koch snowflake, evaluated by
// branch-and-bound over the curve's self-similar tree.
//
// Each tree node is a segment p->q standing for the Koch curve built on it.
// That curve lies inside the isosceles triangle on the left of p->q with base
// angles of 30 degrees, and it passes through p and q. So the distance to the
// triangle is a lower bound for the node and the endpoint distances are upper
// bounds; nodes whose lower bound cannot beat the incumbent are pruned.
//
// The snowflake is placed with corners (0,0), (b,0), (b/2, -b*sqrt(3)/2),
// traversed clockwise so that bumps grow to the left of each segment.
class KochBoundary {
 public:
  explicit KochBoundary(double base_length = 1.0);

  double base_length() const { return base_; }
  Vec2 center() const;
  const std::array<Vec2, 3>& corners() const { return corners_; }

  // Bracket on dist(p, boundary) with upper - lower <= tol.
  DistanceBracket distance(Vec2 p, double tol = 1e-13) const;

  // Exact distance to the depth-n polygon (3 * 4^n segments), using the same
  // hull hierarchy for pruning.
  double polyline_distance(Vec2 p, int depth) const;

  // Membership in the closed depth-n polygon: the base triangle plus the
  // bump triangles of levels 1..n.
  bool prefractal_contains(Vec2 p, int depth) const;

 private:
  double base_;
  std::array<Vec2, 3> corners_;
};

// Apex of the hull triangle of the Koch curve built on p->q.
inline Vec2 koch_hull_apex(Vec2 p, Vec2 q) {
  constexpr double kApexHeight = 0.28867513459481288225;  // sqrt(3)/6
  return (p + q) * 0.5 + perp_left(q - p) * kApexHeight;
}

// Splits p->q into the four first-generation sub-segments; returns the five
// vertices p, p+d/3, peak, p+2d/3, q.
inline std::array<Vec2, 5> koch_subdivide(Vec2 p, Vec2 q) {
  constexpr double kSin60 = 0.86602540378443864676;
  const Vec2 d = (q - p) / 3.0;
  const Vec2 a = p + d;
  const Vec2 b = p + d * 2.0;
  const Vec2 peak = a + Vec2{0.5 * d.x - kSin60 * d.y, kSin60 * d.x + 0.5 * d.y};
  return {p, a, peak, b, q};
}

}  // namespace kochspray
