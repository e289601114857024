#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace kochspray {

// Area of K_{-eps} ∩ Gamma, where K is the unit snowflake and Gamma the small
// equilateral triangle with vertices (1/3,0), (1/3,-sqrt(3)/9), (1/6,-sqrt(3)/18)
// in the frame of KochBoundary (corners (0,0), (1,0), (1/2,-sqrt(3)/2)).
//
// Only the core interval (1/27, sqrt(3)/9] needs numerics: beyond sqrt(3)/9 the
// whole triangle is covered, and below 1/27 the area scales by 1/9 per factor 3.

struct GammaValue {
  double area{0.0};
  double error{0.0};
};

inline constexpr double kGammaCoreLower = 1.0 / 27.0;
// sqrt(3)/9
inline constexpr double kGammaCoreUpper = 0.19245008972987525484;

// Vertices of Gamma in the KochBoundary frame.
struct GammaTriangle {
  static constexpr double ax = 1.0 / 3.0, ay = 0.0;
  static constexpr double bx = 1.0 / 3.0, by = -0.19245008972987525484;
  static constexpr double cx = 1.0 / 6.0, cy = -0.09622504486493762742;
};

// Length of {y : (x,y) in Gamma, dist((x,y), boundary K) < eps}.
double gamma_chord_measure(double x, double eps);

struct GammaQuadratureOptions {
  int max_depth{10};
};

// Scanline quadrature on the core interval: median of three node layouts,
// with the gap to the nearest other layout as an error estimate.
GammaValue gamma_volume_quadrature(double eps, const GammaQuadratureOptions& opt = {});

// Deterministic enclosure by recursive triangle subdivision; cells are
// classified by a distance bracket at the centroid widened by the cell's
// circumradius. Returns midpoint of [inside, inside + straddling] with
// error = half the straddling area. Throws PrecisionError if `tol` is not
// reached within `max_level` subdivision levels.
GammaValue gamma_volume_certified(double eps, double tol, int max_level = 22);

// Monotone (PCHIP) interpolation table on the core interval.
class GammaTable {
 public:
  struct Node {
    double eps;
    double value;
    double error;  // quadrature error at the node + interpolation bound on [eps, next)
  };

  GammaTable() = default;
  explicit GammaTable(std::vector<Node> nodes);

  // Adaptive construction: cells are bisected until the PCHIP prediction at
  // the midpoint agrees with quadrature to within interp_tol.
  static GammaTable build(double interp_tol, const GammaQuadratureOptions& opt = {},
                          const std::function<void(std::size_t)>& progress = {});

  static GammaTable from_csv(std::istream& in);
  static GammaTable from_csv_string(const std::string& text);
  void to_csv(std::ostream& out) const;

  // Table shipped with the library.
  static const GammaTable& builtin();

  bool empty() const { return nodes_.empty(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  double max_error() const;

  // Interpolated value on [nodes.front().eps, nodes.back().eps].
  GammaValue operator()(double eps) const;

 private:
  void compute_slopes();

  std::vector<Node> nodes_;
  std::vector<double> slopes_;
};

struct GammaOptions {
  // Evaluate the core interval by quadrature instead of the table.
  bool direct{false};
  double tolerance{1e-8};
  GammaQuadratureOptions quadrature{};
  const GammaTable* table{nullptr};  // defaults to GammaTable::builtin()
};

// vol(K_{-eps} ∩ Gamma) for any eps > 0.
GammaValue gamma_volume(double eps, const GammaOptions& opt = {});

}  // namespace kochspray
