#include "kochspray/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "kochspray/constants.hpp"
#include "kochspray/errors.hpp"
#include "kochspray/expansion.hpp"
#include "kochspray/ifs.hpp"
#include "kochspray/oracle.hpp"
#include "kochspray/snowflake_volume.hpp"
#include "kochspray/spectral_zeros.hpp"

namespace kochspray {

namespace {

constexpr double kPi = std::numbers::pi;

class Recorder {
 public:
  Recorder(std::string suite, std::vector<CheckResult>& out) : suite_(std::move(suite)), out_(out) {}

  void check(const std::string& name, bool ok, const std::string& detail = {}) {
    out_.push_back({suite_, name, ok, detail});
  }

  // Runs fn and turns exceptions into failures.
  void guarded(const std::string& name, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      check(name, false, std::string("exception: ") + e.what());
    }
  }

 private:
  std::string suite_;
  std::vector<CheckResult>& out_;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

// Counts words by walking every individual map, no regrouping.
void enumerate_words(const std::vector<int>& exponents, int level, int nu_max, std::vector<double>& c) {
  c[level] += 1.0;
  for (int nu : exponents) {
    if (level + nu <= nu_max) enumerate_words(exponents, level + nu, nu_max, c);
  }
}

std::vector<int> map_exponents(const LatticeIFS& ifs) {
  std::vector<int> e;
  for (const auto& m : ifs.entries) e.push_back(m.lattice_exponent);
  return e;
}

void ifs_suite(std::vector<CheckResult>& out) {
  Recorder r("ifs", out);

  r.guarded("histogram and map count, 49 configs", [&] {
    bool ok = true;
    for (int k1 = 0; k1 <= 6; ++k1) {
      for (int k2 = 0; k2 <= 6; ++k2) {
        const LatticeIFS ifs = build_ifs(k1, k2);
        const auto h = ifs.exponent_histogram();
        ok = ok && static_cast<int>(ifs.entries.size()) == 12 + 5 * (k1 + k2) && h[2] == 6 - k1 &&
             h[3] == 6 - k2 && h[4] == 6 * k1 && h[5] == 6 * k2;
        for (const auto& m : ifs.entries) {
          ok = ok && std::abs(m.ratio - std::exp(-kLatticeConstant * m.lattice_exponent)) <= 1e-15;
        }
      }
    }
    r.check("histogram and map count, 49 configs", ok);
  });

  r.guarded("c4 = 36, c5 = 72 for (0,0)", [&] {
    const auto c = word_multiplicities(build_ifs(0, 0), 5);
    r.check("c4 = 36, c5 = 72 for (0,0)", c.counts[0] == 1 && c.counts[4] == 36 && c.counts[5] == 72);
  });

  r.guarded("recurrence equals word enumeration", [&] {
    bool ok = true;
    for (int k1 : {0, 3, 6}) {
      for (int k2 : {0, 3, 6}) {
        const LatticeIFS ifs = build_ifs(k1, k2);
        std::vector<double> brute(13, 0.0);
        enumerate_words(map_exponents(ifs), 0, 12, brute);
        const auto c = word_multiplicities(ifs, 12);
        for (int nu = 0; nu <= 12; ++nu) ok = ok && brute[nu] == c.counts[nu];
      }
    }
    r.check("recurrence equals word enumeration", ok, "nu <= 12, (k1,k2) in {0,3,6}^2");
  });

  r.guarded("generating function at x = 0.1", [&] {
    double worst = 0.0;
    for (int k1 = 0; k1 <= 6; ++k1) {
      for (int k2 = 0; k2 <= 6; ++k2) {
        const LatticeIFS ifs = build_ifs(k1, k2);
        const auto c = word_multiplicities(ifs, 60);
        double series = 0.0, denom = 1.0;
        for (int nu = 60; nu >= 0; --nu) series = series * 0.1 + c.counts[nu];
        for (const auto& m : ifs.entries) denom -= std::pow(0.1, m.lattice_exponent);
        worst = std::max(worst, std::abs(series - 1.0 / denom));
      }
    }
    r.check("generating function at x = 0.1", worst <= 1e-10, "max diff " + fmt(worst));
  });

  r.guarded("spray volume 18 sqrt3 / 5", [&] {
    double worst = 0.0;
    const double ref = 18.0 * kSqrt3 / 5.0;
    for (int k1 = 0; k1 <= 6; ++k1) {
      for (int k2 = 0; k2 <= 6; ++k2) {
        worst = std::max(worst, std::abs(spray_volume({k1, k2, 1.0}) - ref) / ref);
      }
    }
    r.check("spray volume 18 sqrt3 / 5", worst <= 1e-12, "max rel diff " + fmt(worst));
  });

  r.guarded("similarity dimension in (1,2)", [&] {
    bool ok = true;
    for (int k1 = 0; k1 <= 6; ++k1) {
      for (int k2 = 0; k2 <= 6; ++k2) {
        const LatticeIFS ifs = build_ifs(k1, k2);
        const double d = ifs.similarity_dimension();
        ok = ok && d > 1.0 && d < 2.0 && std::abs(ifs.ratio_power_sum(d) - 1.0) <= 1e-10 &&
             ifs.ratio_power_sum(1.0) > 1.0 && ifs.ratio_power_sum(2.0) < 1.0;
      }
    }
    r.check("similarity dimension in (1,2)", ok);
  });

  r.guarded("prefractal segment counts", [&] {
    bool ok = true;
    for (int n = 0; n <= 5; ++n) {
      const auto b = prefractal_boundary(1.0, n);
      std::size_t segs = 0;
      for (const auto& line : b.polylines) {
        segs += line.size();
        for (std::size_t i = 0; i < line.size(); ++i) {
          const Vec2 d = line[(i + 1) % line.size()] - line[i];
          ok = ok && std::abs(std::sqrt(dot(d, d)) - std::pow(3.0, -n)) <= 1e-12;
        }
      }
      ok = ok && segs == static_cast<std::size_t>(3) << (2 * n) &&
           std::abs(b.hausdorff_bound - kSqrt3 / 6.0 * std::pow(3.0, -n)) <= 1e-15;
    }
    r.check("prefractal segment counts", ok, "3 * 4^n segments of length 3^-n, n <= 5");
  });
}

void volume_suite(std::vector<CheckResult>& out) {
  Recorder r("volume", out);
  const GammaOptions g;

  r.guarded("closed-form values", [&] {
    const double v1 = snowflake_parallel_volume(1.0).area;
    const double v13 = snowflake_parallel_volume(1.0 / 3.0).area;
    const double v02 = snowflake_parallel_volume(0.2).area;
    const double ref02 = 7.0 * kSqrt3 / 30.0 + std::sqrt(0.04 - 1.0 / 36.0) + 0.24 * std::asin(5.0 / 6.0) -
                         0.04 * kPi;
    const bool ok = std::abs(v1 - kSnowflakeArea) <= 1e-15 && std::abs(v13 - kSnowflakeArea) <= 1e-14 &&
                    std::abs(v02 - ref02) <= 1e-14;
    r.check("closed-form values", ok, "eps = 1, 1/3, 0.2");
  });

  r.guarded("continuity at breakpoints", [&] {
    std::vector<double> points{kBreakCase1, kBreakCase2, kBreakCase3};
    for (int m = 2; m <= 8; ++m) {
      points.push_back(std::pow(3.0, -m));
      points.push_back(std::pow(3.0, -m - 0.5));
    }
    double worst = 0.0;
    bool ok = true;
    for (double x : points) {
      const auto lo = snowflake_parallel_volume(x * (1.0 - 1e-11), 1.0, g);
      const auto hi = snowflake_parallel_volume(x * (1.0 + 1e-11), 1.0, g);
      const double jump = std::abs(hi.area - lo.area);
      worst = std::max(worst, jump);
      // the 1e-11 offset itself moves the value by about |V'| x 1e-11
      ok = ok && jump <= 2.0 * std::max(lo.error, hi.error) + 1e-10;
    }
    r.check("continuity at breakpoints", ok, "max jump " + fmt(worst));
  });

  r.guarded("monotone and bounded", [&] {
    bool ok = true;
    double prev = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double eps = std::pow(10.0, -4.0 + 4.0 * i / 2000.0);
      const auto v = snowflake_parallel_volume(eps, 1.0, g);
      ok = ok && v.area >= prev - 2.0 * v.error - 1e-15 && v.area <= kSnowflakeArea + 1e-15;
      prev = v.area;
    }
    r.check("monotone and bounded", ok, "2001-point log grid on [1e-4, 1]");
  });

  r.guarded("gamma scaling below 1/27", [&] {
    double worst = 0.0, allowed = 0.0;
    for (double eps : {0.03, 0.02, 0.012}) {
      const auto lo = gamma_volume_quadrature(eps);
      const auto hi = gamma_volume_quadrature(3.0 * eps);
      const double d = std::abs(lo.area - hi.area / 9.0);
      worst = std::max(worst, d);
      allowed = std::max(allowed, lo.error + hi.error / 9.0 + 1e-9);
    }
    r.check("gamma scaling below 1/27", worst <= allowed, "max diff " + fmt(worst));
  });

  r.guarded("v < 0", [&] {
    bool ok = true;
    for (int i = 0; i < 50; ++i) ok = ok && uv_functions(i / 50.0, g).v < 0.0;
    r.check("v < 0", ok);
  });

  r.guarded("generator additivity", [&] {
    bool ok = true;
    for (double eps : {0.5, 0.1, 0.01}) {
      const SprayConfig c{2, 3, 1.0};
      double sum = 0.0;
      for (double b : c.component_base_lengths()) sum += snowflake_parallel_volume(eps, b, g).area;
      ok = ok && std::abs(generator_parallel_volume(c, eps, g).area - sum) <= 1e-14;
    }
    ok = ok && std::abs(generator_parallel_volume({1, 0, 1.0}, 1.0, g).area - 8.0 * kSqrt3 / 15.0) <= 1e-14;
    r.check("generator additivity", ok);
  });
}

void zeros_suite(std::vector<CheckResult>& out) {
  Recorder r("zeros", out);

  r.guarded("published zero values", [&] {
    struct Row {
      int k1, k2;
      std::vector<cplx> z;
    };
    const std::vector<Row> rows{
        {0, 0, {{-0.952455, 0.0}}},
        {0, 6, {{-0.928326, 0.0}, {-0.71134, 2.58082}, {-0.71134, -2.58082}}},
        {6, 6,
         {{-0.888243, 0.0}, {-0.839089, 1.34671}, {-0.839089, -1.34671}, {-0.666227, 2.8596}}}};
    double worst = 0.0;
    for (const auto& row : rows) {
      const auto zs = zero_set(row.k1, row.k2, ZeroKind::C);
      for (const cplx& ref : row.z) {
        double best = 1e300;
        for (const auto& z : zs.zeros) {
          // Im is only defined modulo the strip period
          for (int k = -1; k <= 1; ++k) best = std::min(best, std::abs(z.z + cplx(0, k * zs.period) - ref));
        }
        // the table rounds to 6 significant digits
        worst = std::max(worst, best);
      }
    }
    r.check("published zero values", worst <= 1e-5, "max distance " + fmt(worst));
  });

  r.guarded("residuals and root counts", [&] {
    bool ok = true;
    double worst = 0.0;
    for (int k1 = 0; k1 <= 6; ++k1) {
      for (int k2 = 0; k2 <= 6; ++k2) {
        for (ZeroKind kind : {ZeroKind::C, ZeroKind::P}) {
          const auto zs = zero_set(k1, k2, kind);
          ok = ok && static_cast<int>(zs.zeros.size()) == lattice_polynomial(k1, k2, kind).degree();
          for (const auto& z : zs.zeros) worst = std::max(worst, dirichlet_residual(k1, k2, kind, z.z));
        }
      }
    }
    ok = ok && zero_set(0, 0, ZeroKind::C).zeros.size() == 3 && zero_set(0, 6, ZeroKind::C).zeros.size() == 5 &&
         zero_set(6, 6, ZeroKind::C).zeros.size() == 5;
    r.check("residuals and root counts", ok && worst <= 1e-10, "max residual " + fmt(worst));
  });

  r.guarded("correspondence, 49 configs", [&] {
    bool ok = true;
    double worst = 0.0;
    for (int k1 = 0; k1 <= 6; ++k1) {
      for (int k2 = 0; k2 <= 6; ++k2) {
        const auto rep = correspondence_check(zero_set(k1, k2, ZeroKind::C), zero_set(k1, k2, ZeroKind::P));
        ok = ok && rep.bijective;
        worst = std::max(worst, rep.max_distance);
      }
    }
    r.check("correspondence, 49 configs", ok && worst <= 1e-9, "max distance " + fmt(worst));
  });

  r.guarded("dimension of (0,0)", [&] {
    const auto zs = zero_set(0, 0, ZeroKind::C);
    const double d = zs.dimension;
    const double s = build_ifs(0, 0).ratio_power_sum(d);
    r.check("dimension of (0,0)", d > 1.90 && d < 1.91 && std::abs(s - 1.0) <= 1e-10, "D = " + fmt(d));
  });

  r.guarded("negative root on Im = pi / ln3", [&] {
    const auto zs = zero_set(6, 6, ZeroKind::C);
    double best = 1e300;
    for (const auto& z : zs.zeros) best = std::min(best, std::abs(std::abs(z.z.imag()) - kPi / kLn3));
    r.check("negative root on Im = pi / ln3", best <= 1e-4, "offset " + fmt(best));
  });
}

// Square-generator spray counted copy by copy.
double brute_square_spray(const std::vector<int>& exponents, double side, double lambda, int level) {
  const double s = side * std::exp(-kLatticeConstant * level);
  if (2.0 * kPi * kPi / (s * s) > lambda) return 0.0;
  double total = static_cast<double>(square_generator_counting(s, lambda));
  for (int nu : exponents) total += brute_square_spray(exponents, side, lambda, level + nu);
  return total;
}

void expansion_suite(std::vector<CheckResult>& out) {
  Recorder r("expansion", out);
  const double a = kLatticeConstant;

  r.guarded("prefactors", [&] {
    struct Row {
      int k1, k2;
      double r2, rd;
    };
    const Row rows[] = {{0, 0, -1.0 / 22, -2.0 / 5}, {0, 6, -1.0 / 82, -10.0 / 13}, {6, 6, -1.0 / 142, -22.0 / 19}};
    bool ok = true;
    for (const auto& row : rows) {
      const auto c = volume_coefficients({row.k1, row.k2, 1.0}, 0.0);
      ok = ok && std::abs(c.r2_prefactor - row.r2) <= 1e-12 && std::abs(c.r_delta_prefactor - row.rd) <= 1e-12 &&
           std::abs(r2_prefactor_from_count(row.k1, row.k2) - row.r2) <= 1e-12 &&
           std::abs(r_delta_prefactor_from_histogram(row.k1, row.k2) - row.rd) <= 1e-12;
    }
    r.check("prefactors", ok);
  });

  r.guarded("weyl coefficient", [&] {
    const double ref = weyl_term({0, 0, 1.0});
    bool ok = std::abs(ref - 18.0 * kSqrt3 / 5.0 / (4.0 * kPi)) <= 1e-14 * ref;
    for (int k1 = 0; k1 <= 6; ++k1) {
      for (int k2 = 0; k2 <= 6; ++k2) ok = ok && std::abs(weyl_term({k1, k2, 1.0}) - ref) <= 1e-12 * ref;
    }
    ok = ok && std::abs(weyl_term({3, 4, 2.0}) - 4.0 * weyl_term({3, 4, 1.0})) <= 1e-12 * ref;
    r.check("weyl coefficient", ok, "W = " + fmt(ref));
  });

  r.guarded("positivity and realness", [&] {
    bool ok = true;
    double worst_imag = 0.0;
    for (auto [k1, k2] : {std::pair{0, 0}, std::pair{0, 6}, std::pair{6, 6}}) {
      for (int j = 0; j < 32; ++j) {
        const auto c = volume_coefficients({k1, k2, 1.0}, a * j / 32.0);
        for (int ell = 0; ell <= 12; ++ell) {
          const auto v = volume_expansion(c, ell);
          ok = ok && v.value >= 0.0;
          worst_imag = std::max(worst_imag, std::abs(v.imag_residue) / std::max(std::abs(v.value), 1e-300));
        }
      }
    }
    r.check("positivity and realness", ok && worst_imag <= 1e-10, "max |imag| / value " + fmt(worst_imag));
  });

  r.guarded("expansion equals lattice sum", [&] {
    double worst = 0.0, allowed = 1.0;
    ExpansionOptions opt;
    opt.alternating_poles = true;
    for (auto [k1, k2] : {std::pair{0, 0}, std::pair{2, 0}, std::pair{2, 5}, std::pair{6, 6}}) {
      for (double beta : {0.0, 0.3}) {
        const auto c = volume_coefficients({k1, k2, 1.0}, beta, opt);
        for (int ell = 4; ell <= 12; ++ell) {
          const auto v = volume_expansion(c, ell);
          const auto x = spray_parallel_volume_exact({k1, k2, 1.0}, std::exp(-(a * ell + beta)));
          const double d = std::abs(v.value - x.area);
          const double tol = v.error + x.error + 1e-12;
          worst = std::max(worst, d);
          allowed = std::min(allowed, tol - d);
        }
      }
    }
    r.check("expansion equals lattice sum", allowed >= 0.0, "max diff " + fmt(worst));
  });

  r.guarded("square spray counting", [&] {
    bool ok = true;
    const auto g = square_generator(1.0);
    for (auto [k1, k2] : {std::pair{0, 0}, std::pair{6, 6}}) {
      const SprayConfig cfg{k1, k2, 1.0};
      const auto e = map_exponents(build_ifs(k1, k2));
      for (double t = 2.0; t <= 12.0; t += 0.5) {
        const auto sc = spray_counting(g, cfg, t, 40);
        ok = ok && !sc.truncated && sc.count == brute_square_spray(e, 1.0, std::exp(t), 0);
      }
      // just above the eigenvalue 50 pi^2, away from the rounding boundary
      const double t = std::log(50.5 * kPi * kPi);
      ok = ok && spray_counting(g, cfg, t, 40).count == brute_square_spray(e, 1.0, std::exp(t), 0);
    }
    ok = ok && square_generator_counting(1.0, 2.01 * kPi * kPi) == 1 &&
         square_generator_counting(1.0, 5.01 * kPi * kPi) == 3;
    r.check("square spray counting", ok, "t in [2, 12] step 0.5 and t = log(50.5 pi^2)");
  });

  r.guarded("normalized remainder bounded", [&] {
    bool ok = true;
    std::string detail;
    const auto g = square_generator(1.0);
    for (auto [k1, k2] : {std::pair{0, 0}, std::pair{6, 6}}) {
      const SprayConfig cfg{k1, k2, 1.0};
      const double d = zero_set(k1, k2, ZeroKind::C).dimension;
      const double lead = g.weyl_coefficient / (1.0 - build_ifs(k1, k2).ratio_power_sum(2.0));
      double first = 0.0, second = 0.0;
      for (int i = 0; i <= 200; ++i) {
        const double t = 2.0 + 10.0 * i / 200.0;
        const double rem = std::abs(spray_counting(g, cfg, t, 40).count - lead * std::exp(t)) * std::exp(-t * d / 2.0);
        (t <= 7.0 ? first : second) = std::max(t <= 7.0 ? first : second, rem);
      }
      // bounded: no growth from the first half of the range to the second
      ok = ok && second <= 2.0 * first;
      detail += "(" + std::to_string(k1) + "," + std::to_string(k2) + "): " + fmt(first) + " -> " + fmt(second) + " ";
    }
    r.check("normalized remainder bounded", ok, detail);
  });

  r.guarded("published coefficient bounds within factor 3", [&] {
    bool ok = true;
    std::string detail;
    for (const auto& row : published_bounds()) {
      std::vector<double> mine;
      for (const auto& b : counting_bounds({row.k1, row.k2, 1.0})) {
        if (b.z.imag() >= -1e-12) mine.push_back(b.bound);
      }
      ok = ok && mine.size() == row.bounds.size();
      for (std::size_t i = 0; i < std::min(mine.size(), row.bounds.size()); ++i) {
        const double ratio = mine[i] / row.bounds[i];
        ok = ok && ratio <= 3.0 && ratio >= 1.0 / 3.0;
        detail += fmt(ratio) + " ";
      }
    }
    r.check("published coefficient bounds within factor 3", ok, "ratios " + detail);
  });
}

void oracle_suite(std::vector<CheckResult>& out, const ValidationOptions& opt) {
  Recorder r("oracle", out);
  OracleOptions o;
  o.budget = opt.budget;
  o.seed = opt.seed;
  o.depth_divisor = 200.0;

  r.guarded("snowflake closed form vs oracle", [&] {
    bool ok = true;
    std::string detail;
    for (double eps : {0.3, 0.2, 0.1, 0.05, 0.02, 0.01}) {
      const auto est = parallel_volume_estimate(eps, 1.0, o);
      const auto cf = snowflake_parallel_volume(eps);
      const double d = std::abs(est.value - cf.area);
      ok = ok && d <= est.total_bound() + cf.error + 1e-4 && est.total_bound() <= opt.tolerance * est.value;
      detail += fmt(d) + " ";
    }
    r.check("snowflake closed form vs oracle", ok, "diffs " + detail);
  });

  r.guarded("spray lattice sum vs oracle", [&] {
    OracleCache cache;
    bool ok = true;
    std::string detail;
    for (auto [k1, k2] : {std::pair{0, 0}, std::pair{6, 6}}) {
      const SprayConfig cfg{k1, k2, 1.0};
      const double eps = std::exp(-4.0 * kLatticeConstant);
      const auto est = spray_parallel_volume_estimate(cfg, eps, 12, o, &cache);
      const auto x = spray_parallel_volume_exact(cfg, eps);
      const double d = std::abs(est.value - x.area);
      ok = ok && d <= est.total_bound() + x.error + 1e-4;
      detail += fmt(d) + " ";
    }
    r.check("spray lattice sum vs oracle", ok, "diffs " + detail);
  });
}

}  // namespace

std::vector<std::string> validation_suites() { return {"ifs", "volume", "zeros", "expansion", "oracle"}; }

std::vector<CheckResult> run_validation(const std::string& suite, const ValidationOptions& opt) {
  if (!(opt.tolerance > 0.0)) throw DomainError("run_validation: tolerance must be positive");
  const auto names = validation_suites();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    throw DomainError("run_validation: unknown suite '" + suite + "'");
  }
  std::vector<CheckResult> out;
  auto want = [&](const char* s) { return suite == "all" || suite == s; };
  if (want("ifs")) ifs_suite(out);
  if (want("volume")) volume_suite(out);
  if (want("zeros")) zeros_suite(out);
  if (want("expansion")) expansion_suite(out);
  if (want("oracle")) oracle_suite(out, opt);
  return out;
}

const std::vector<PublishedBounds>& published_bounds() {
  static const std::vector<PublishedBounds> rows{
      {0, 0, {1.68e6}}, {0, 6, {1.81e6, 2.45e5}}, {6, 6, {1.68e6, 3.46e5, 2.92e5}}};
  return rows;
}

nlohmann::ordered_json to_json(const CheckResult& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["name"] = r.name;
  j["passed"] = r.passed;
  j["detail"] = r.detail;
  return j;
}

}  // namespace kochspray
