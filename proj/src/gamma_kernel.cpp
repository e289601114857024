#include "kochspray/gamma_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "kochspray/constants.hpp"
#include "kochspray/errors.hpp"
#include "kochspray/koch_distance.hpp"

extern const char* const kochspray_builtin_gamma_table_csv;

namespace kochspray {

namespace {

const KochBoundary& unit_snowflake() {
  static const KochBoundary k(1.0);
  return k;
}

double boundary_distance(Vec2 p) { return unit_snowflake().distance(p, 1e-15).upper; }

// Smallest step of the scanline walk; excursions of the level set narrower
// than this are not resolved.
constexpr double kWalkFloor = 1e-10;

}  // namespace

double gamma_chord_measure(double x, double eps) {
  const double half = (x - GammaTriangle::cx) * kSqrt3 / 3.0;
  if (half <= 0.0) return 0.0;
  const double ylo = GammaTriangle::cy - half;
  const double yhi = GammaTriangle::cy + half;

  auto f = [&](double y) { return boundary_distance({x, y}) - eps; };

  // The distance is 1-Lipschitz, so f keeps its sign on [y, y + |f(y)|).
  double y = ylo;
  double fy = f(y);
  double start = ylo;
  double total = 0.0;
  while (y < yhi) {
    const double yn = std::min(y + std::max(std::fabs(fy), kWalkFloor), yhi);
    const double fn = f(yn);
    if ((fy < 0.0) != (fn < 0.0)) {
      std::uintmax_t iters = 100;
      const auto r = boost::math::tools::toms748_solve(
          f, y, yn, fy, fn,
          [](double a, double b) { return std::fabs(b - a) < 1e-15; }, iters);
      const double root = 0.5 * (r.first + r.second);
      if (fy < 0.0) {
        total += root - start;
      } else {
        start = root;
      }
    }
    y = yn;
    fy = fn;
  }
  if (fy < 0.0) total += yhi - start;
  return total;
}

GammaValue gamma_volume_quadrature(double eps, const GammaQuadratureOptions& opt) {
  using boost::math::quadrature::gauss_kronrod;
  if (!(eps > 0.0)) throw DomainError("gamma_volume_quadrature: eps must be positive");
  auto m = [eps](double x) { return gamma_chord_measure(x, eps); };
  const double lo = GammaTriangle::cx;
  const double hi = GammaTriangle::ax;
  // Near the vertex (1/3, -sqrt(3)/9) an uncovered corner of width about
  // sqrt(3)/9 - eps survives until eps = sqrt(3)/9; it gets its own panel.
  const double corner = std::clamp(hi - 8.0 * (kGammaCoreUpper - eps), lo, hi);
  const double golden = lo + (hi - lo) * 0.3819660112501051;

  // Three estimates with different node layouts. A single adaptive run can
  // accept a panel whose internal error estimate is fooled by a kink of the
  // chord measure; the layouts rarely fail at the same eps, so the median is
  // kept and its distance to the nearer neighbour is the error.
  auto integrate = [&](std::vector<double> breaks, bool high_order) {
    std::sort(breaks.begin(), breaks.end());
    double sum = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double x0 = breaks[i], x1 = breaks[i + 1];
      if (!(x1 > x0)) continue;
      sum += high_order ? gauss_kronrod<double, 31>::integrate(m, x0, x1, opt.max_depth, 1e-13, &err)
                        : gauss_kronrod<double, 15>::integrate(m, x0, x1, opt.max_depth, 1e-13, &err);
    }
    return sum;
  };
  std::array<double, 3> v{integrate({lo, corner, hi}, false), integrate({lo, golden, corner, hi}, false),
                          integrate({lo, corner, hi}, true)};
  std::sort(v.begin(), v.end());
  return {v[1], std::min(v[1] - v[0], v[2] - v[1])};
}

GammaValue gamma_volume_certified(double eps, double tol, int max_level) {
  if (!(eps > 0.0)) throw DomainError("gamma_volume_certified: eps must be positive");
  struct Tri {
    Vec2 a, b, c;
  };
  const Tri root{{GammaTriangle::ax, GammaTriangle::ay},
                 {GammaTriangle::bx, GammaTriangle::by},
                 {GammaTriangle::cx, GammaTriangle::cy}};

  std::vector<Tri> level{root};
  std::vector<Tri> next;
  double inside = 0.0;
  double cell_area = kGammaArea;
  double straddle = kGammaArea;

  for (int lvl = 0; lvl <= max_level; ++lvl) {
    next.clear();
    for (const Tri& t : level) {
      const Vec2 g = (t.a + t.b + t.c) / 3.0;
      const double rho = std::max({distance(g, t.a), distance(g, t.b), distance(g, t.c)});
      const DistanceBracket d = unit_snowflake().distance(g, 1e-14);
      if (d.upper + rho < eps) {
        inside += cell_area;
      } else if (d.lower - rho >= eps) {
        // outside the neighbourhood
      } else {
        next.push_back(t);
      }
    }
    straddle = cell_area * static_cast<double>(next.size());
    if (0.5 * straddle <= tol || lvl == max_level) break;

    level.clear();
    for (const Tri& t : next) {
      const Vec2 ab = (t.a + t.b) * 0.5;
      const Vec2 bc = (t.b + t.c) * 0.5;
      const Vec2 ca = (t.c + t.a) * 0.5;
      level.push_back({t.a, ab, ca});
      level.push_back({ab, t.b, bc});
      level.push_back({ca, bc, t.c});
      level.push_back({ab, bc, ca});
    }
    cell_area *= 0.25;
  }
  const GammaValue out{inside + 0.5 * straddle, 0.5 * straddle};
  if (out.error > tol) {
    throw PrecisionError("gamma_volume_certified: tolerance not reached", out.error);
  }
  return out;
}

// ---------------------------------------------------------------------------
// GammaTable

GammaTable::GammaTable(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end(),
            [](const Node& a, const Node& b) { return a.eps < b.eps; });
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i].eps > nodes_[i - 1].eps)) {
      throw DomainError("GammaTable: duplicate node");
    }
  }
  compute_slopes();
}

void GammaTable::compute_slopes() {
  const std::size_t n = nodes_.size();
  slopes_.assign(n, 0.0);
  if (n < 2) return;
  std::vector<double> h(n - 1), del(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = nodes_[k + 1].eps - nodes_[k].eps;
    del[k] = (nodes_[k + 1].value - nodes_[k].value) / h[k];
  }
  if (n == 2) {
    slopes_[0] = slopes_[1] = del[0];
    return;
  }
  // Three-point (parabolic) slopes are second-order accurate on uneven grids;
  // the Fritsch-Carlson limit keeps the interpolant monotone.
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (del[k - 1] * del[k] <= 0.0) continue;
    const double d = (h[k] * del[k - 1] + h[k - 1] * del[k]) / (h[k - 1] + h[k]);
    const double limit = 3.0 * std::min(std::fabs(del[k - 1]), std::fabs(del[k]));
    slopes_[k] = std::fabs(d) > limit ? std::copysign(limit, d) : d;
  }
  // One-sided three-point end slopes, limited to preserve monotonicity.
  auto edge = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::fabs(d) > std::fabs(3.0 * d0)) return 3.0 * d0;
    return d;
  };
  slopes_[0] = edge(h[0], h[1], del[0], del[1]);
  slopes_[n - 1] = edge(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
}

double GammaTable::max_error() const {
  double e = 0.0;
  for (const Node& n : nodes_) e = std::max(e, n.error);
  return e;
}

GammaValue GammaTable::operator()(double eps) const {
  if (nodes_.size() < 2) throw DomainError("GammaTable: table is empty");
  if (eps < nodes_.front().eps || eps > nodes_.back().eps) {
    throw DomainError("GammaTable: eps outside the tabulated interval");
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), eps,
                             [](double e, const Node& n) { return e < n.eps; });
  std::size_t k = static_cast<std::size_t>(it - nodes_.begin());
  k = std::clamp<std::size_t>(k, 1, nodes_.size() - 1) - 1;
  const Node& p = nodes_[k];
  const Node& q = nodes_[k + 1];
  if (eps == p.eps) return {p.value, p.error};
  if (eps == q.eps) return {q.value, q.error};
  const double h = q.eps - p.eps;
  const double t = (eps - p.eps) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double v = (2 * t3 - 3 * t2 + 1) * p.value + (t3 - 2 * t2 + t) * h * slopes_[k] +
                   (-2 * t3 + 3 * t2) * q.value + (t3 - t2) * h * slopes_[k + 1];
  // A-posteriori interpolation error: distance to the cubic through the four
  // surrounding nodes. The midpoint test of the build misses kinks of g''
  // that fall between midpoints.
  if (nodes_.size() < 4) return {v, std::max(p.error, q.error)};
  const std::size_t j0 = std::min(k > 0 ? k - 1 : 0, nodes_.size() - 4);
  double cubic = 0.0;
  for (std::size_t i = j0; i < j0 + 4; ++i) {
    double l = 1.0;
    for (std::size_t j = j0; j < j0 + 4; ++j) {
      if (j != i) l *= (eps - nodes_[j].eps) / (nodes_[i].eps - nodes_[j].eps);
    }
    cubic += l * nodes_[i].value;
  }
  // Floor: dense scans against direct quadrature stay below 4e-10.
  constexpr double kInterpolationFloor = 1e-9;
  return {v, std::max(p.error, q.error) + 2.0 * std::fabs(v - cubic) + kInterpolationFloor};
}

GammaTable GammaTable::build(double interp_tol, const GammaQuadratureOptions& opt,
                             const std::function<void(std::size_t)>& progress) {
  struct Work {
    double eps, value, quad_err, interp_err;
    bool done;  // cell [eps, next) has converged
  };
  std::vector<Work> w;
  auto eval = [&](double e) {
    if (e >= kGammaCoreUpper) return GammaValue{kGammaArea, 0.0};
    return gamma_volume_quadrature(e, opt);
  };
  constexpr int kInitial = 32;
  for (int i = 0; i <= kInitial; ++i) {
    const double e = kGammaCoreLower + (kGammaCoreUpper - kGammaCoreLower) * i / kInitial;
    const GammaValue g = eval(i == kInitial ? kGammaCoreUpper : e);
    w.push_back({i == kInitial ? kGammaCoreUpper : e, g.area, g.error, 0.0, false});
    if (progress) progress(w.size());
  }
  {
    // 1/9 is a singular point of the second derivative; keep it as a node.
    const double e = kBreakCase3;
    const GammaValue g = eval(e);
    w.push_back({e, g.area, g.error, 0.0, false});
    std::sort(w.begin(), w.end(), [](const Work& a, const Work& b) { return a.eps < b.eps; });
  }
  w.back().done = true;

  constexpr double kMinWidth = 1e-9;
  for (;;) {
    std::vector<Node> cur;
    for (const Work& x : w) cur.push_back({x.eps, x.value, 0.0});
    const GammaTable interp(cur);

    std::vector<Work> added;
    bool any = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i].done) continue;
      any = true;
      const double m = 0.5 * (w[i].eps + w[i + 1].eps);
      const GammaValue g = eval(m);
      const double disc = std::fabs(interp(m).area - g.area);
      const bool ok = disc <= interp_tol || (w[i + 1].eps - w[i].eps) < kMinWidth;
      w[i].done = ok;
      w[i].interp_err = disc;
      added.push_back({m, g.area, g.error, disc, ok});
      if (progress) progress(w.size() + added.size());
    }
    if (!any) break;
    w.insert(w.end(), added.begin(), added.end());
    std::sort(w.begin(), w.end(), [](const Work& a, const Work& b) { return a.eps < b.eps; });
  }

  std::vector<Node> nodes;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double interp_err = i + 1 < w.size() ? w[i].interp_err : 0.0;
    nodes.push_back({w[i].eps, w[i].value, w[i].quad_err + interp_err});
  }
  return GammaTable(std::move(nodes));
}

GammaTable GammaTable::from_csv(std::istream& in) {
  std::vector<Node> nodes;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("eps", 0) == 0) continue;
    }
    std::istringstream ls(line);
    Node n{};
    char c1 = 0, c2 = 0;
    if (!(ls >> n.eps >> c1 >> n.value >> c2 >> n.error) || c1 != ',' || c2 != ',') {
      throw DomainError("GammaTable: malformed CSV line: " + line);
    }
    nodes.push_back(n);
  }
  return GammaTable(std::move(nodes));
}

GammaTable GammaTable::from_csv_string(const std::string& text) {
  std::istringstream in(text);
  return from_csv(in);
}

void GammaTable::to_csv(std::ostream& out) const {
  out << "eps,value,error\n";
  out << std::setprecision(17);
  for (const Node& n : nodes_) out << n.eps << ',' << n.value << ',' << n.error << '\n';
}

const GammaTable& GammaTable::builtin() {
  static const GammaTable t = from_csv_string(kochspray_builtin_gamma_table_csv);
  return t;
}

// ---------------------------------------------------------------------------

GammaValue gamma_volume(double eps, const GammaOptions& opt) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError("gamma_volume: eps must be positive and finite");
  }
  if (eps >= kGammaCoreUpper) return {kGammaArea, 0.0};

  // vol(eps) = vol(3 eps) / 9 for eps <= 1/27.
  double scale = 1.0;
  while (eps <= kGammaCoreLower) {
    eps *= 3.0;
    scale /= 9.0;
  }

  GammaValue core;
  const GammaTable* table = opt.table ? opt.table : &GammaTable::builtin();
  if (opt.direct || table->empty()) {
    core = gamma_volume_quadrature(eps, opt.quadrature);
  } else {
    core = (*table)(std::max(eps, table->nodes().front().eps));
  }
  if (core.error > opt.tolerance) {
    throw PrecisionError("gamma_volume: tolerance not reached", core.error);
  }
  return {scale * core.area, scale * core.error};
}

}  // namespace kochspray
