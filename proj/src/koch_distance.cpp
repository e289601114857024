#include "kochspray/koch_distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "kochspray/constants.hpp"

namespace kochspray {

namespace {

struct Node {
  Vec2 p;
  Vec2 q;
  double lower;
};

double node_lower(Vec2 x, Vec2 p, Vec2 q) {
  return point_triangle_distance(x, p, q, koch_hull_apex(p, q));
}

}  // namespace

KochBoundary::KochBoundary(double base_length) : base_(base_length) {
  corners_ = {Vec2{0.0, 0.0}, Vec2{base_, 0.0},
              Vec2{0.5 * base_, -0.5 * kSqrt3 * base_}};
}

Vec2 KochBoundary::center() const {
  return {0.5 * base_, -kSqrt3 / 6.0 * base_};
}

DistanceBracket KochBoundary::distance(Vec2 x, double tol) const {
  thread_local std::vector<Node> stack;
  stack.clear();

  double upper = std::numeric_limits<double>::infinity();
  for (const Vec2& c : corners_) upper = std::min(upper, kochspray::distance(x, c));

  double pruned_lower = upper;
  for (int i = 0; i < 3; ++i) {
    const Vec2 p = corners_[i];
    const Vec2 q = corners_[(i + 1) % 3];
    stack.push_back({p, q, node_lower(x, p, q)});
  }

  const double min_len = std::max(tol, 1e-300);
  while (!stack.empty()) {
    const Node n = stack.back();
    stack.pop_back();
    if (n.lower >= upper - tol) {
      pruned_lower = std::min(pruned_lower, n.lower);
      continue;
    }
    const auto v = koch_subdivide(n.p, n.q);
    for (int k = 1; k < 4; ++k) upper = std::min(upper, kochspray::distance(x, v[k]));
    if (kochspray::distance(n.p, n.q) < min_len) {
      // The hull is smaller than tol: its lower bound is final.
      pruned_lower = std::min(pruned_lower, n.lower);
      continue;
    }
    // Push farthest first so the nearest child is refined next.
    std::array<Node, 4> kids;
    for (int k = 0; k < 4; ++k) kids[k] = {v[k], v[k + 1], node_lower(x, v[k], v[k + 1])};
    std::sort(kids.begin(), kids.end(),
              [](const Node& a, const Node& b) { return a.lower > b.lower; });
    for (const Node& k : kids) {
      if (k.lower >= upper - tol) {
        pruned_lower = std::min(pruned_lower, k.lower);
      } else {
        stack.push_back(k);
      }
    }
  }
  return {std::min(pruned_lower, upper), upper};
}

double KochBoundary::polyline_distance(Vec2 x, int depth) const {
  struct LNode {
    Vec2 p;
    Vec2 q;
    int level;
    double lower;
  };
  thread_local std::vector<LNode> stack;
  stack.clear();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const Vec2 p = corners_[i];
    const Vec2 q = corners_[(i + 1) % 3];
    stack.push_back({p, q, 0, node_lower(x, p, q)});
  }
  while (!stack.empty()) {
    const LNode n = stack.back();
    stack.pop_back();
    if (n.lower >= best) continue;
    if (n.level == depth) {
      best = std::min(best, point_segment_distance(x, n.p, n.q));
      continue;
    }
    const auto v = koch_subdivide(n.p, n.q);
    std::array<LNode, 4> kids;
    for (int k = 0; k < 4; ++k) kids[k] = {v[k], v[k + 1], n.level + 1, node_lower(x, v[k], v[k + 1])};
    std::sort(kids.begin(), kids.end(),
              [](const LNode& a, const LNode& b) { return a.lower > b.lower; });
    for (const LNode& k : kids) {
      if (k.lower < best) stack.push_back(k);
    }
  }
  return best;
}

namespace {

bool bump_contains(Vec2 x, Vec2 p, Vec2 q, int level, int depth) {
  if (level >= depth) return false;
  if (point_triangle_distance(x, p, q, koch_hull_apex(p, q)) > 0.0) return false;
  const auto v = koch_subdivide(p, q);
  if (point_triangle_distance(x, v[1], v[2], v[3]) == 0.0) return true;
  for (int k = 0; k < 4; ++k) {
    if (bump_contains(x, v[k], v[k + 1], level + 1, depth)) return true;
  }
  return false;
}

}  // namespace

bool KochBoundary::prefractal_contains(Vec2 x, int depth) const {
  if (point_triangle_distance(x, corners_[0], corners_[1], corners_[2]) == 0.0) return true;
  for (int i = 0; i < 3; ++i) {
    if (bump_contains(x, corners_[i], corners_[(i + 1) % 3], 0, depth)) return true;
  }
  return false;
}

}  // namespace kochspray
