#include "kochspray/spectral_zeros.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "kochspray/constants.hpp"
#include "kochspray/errors.hpp"
#include "kochspray/ifs.hpp"

namespace kochspray {

namespace {

constexpr double kPi = std::numbers::pi;

// Representative of w modulo i*period with imaginary part in (-period/2, period/2].
cplx principal(cplx w, double period) {
  double im = std::remainder(w.imag(), period);
  if (im <= -0.5 * period) im += period;
  return {w.real(), im};
}

double fold(double im, double width) {
  double r = std::fmod(im, width);
  if (r < 0.0) r += width;
  if (r >= width) r -= width;
  return r;
}

}  // namespace

std::string to_string(ZeroKind k) { return k == ZeroKind::C ? "C" : "P"; }

ZeroKind parse_zero_kind(const std::string& s) {
  if (s == "C" || s == "c") return ZeroKind::C;
  if (s == "P" || s == "p") return ZeroKind::P;
  throw DomainError("unknown zero kind '" + s + "' (expected C or P)");
}

int LatticePolynomial::degree() const {
  for (int j = static_cast<int>(coefficients.size()) - 1; j >= 0; --j) {
    if (coefficients[j] != 0.0) return j;
  }
  return 0;
}

cplx LatticePolynomial::operator()(cplx x) const {
  cplx acc = 0.0;
  for (int j = degree(); j >= 0; --j) acc = acc * x + coefficients[j];
  return acc;
}

cplx LatticePolynomial::derivative(cplx x) const {
  cplx acc = 0.0;
  for (int j = degree(); j >= 1; --j) acc = acc * x + static_cast<double>(j) * coefficients[j];
  return acc;
}

LatticePolynomial lattice_polynomial(int k1, int k2, ZeroKind kind) {
  const LatticeIFS ifs = build_ifs(k1, k2);
  const auto hist = ifs.exponent_histogram();
  LatticePolynomial p;
  p.k1 = k1;
  p.k2 = k2;
  p.kind = kind;
  p.coefficients.assign(hist.size(), 0.0);
  for (std::size_t j = 0; j < hist.size(); ++j) p.coefficients[j] = hist[j];
  p.coefficients[0] -= 1.0;
  return p;
}

std::vector<cplx> polynomial_roots(const LatticePolynomial& p, double tol) {
  const int n = p.degree();
  if (n < 1) throw NumericError("polynomial_roots: constant polynomial");
  const double lead = p.coefficients[n];

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.coefficients[i] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericError("polynomial_roots: eigenvalue solver failed");
  std::vector<cplx> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()[i];

  // Aberth polishing.
  for (int iter = 0; iter < 100; ++iter) {
    double max_step = 0.0;
    for (int i = 0; i < n; ++i) {
      const cplx f = p(roots[i]);
      const cplx df = p.derivative(roots[i]);
      if (f == 0.0) continue;
      const cplx ratio = f / df;
      cplx repulsion = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) repulsion += 1.0 / (roots[i] - roots[j]);
      }
      const cplx step = ratio / (1.0 - ratio * repulsion);
      roots[i] -= step;
      max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(roots[i])));
    }
    if (max_step < 1e-16) break;
  }

  for (int i = 0; i < n; ++i) {
    // Snap real roots: a real polynomial's real roots come out with tiny imaginary noise.
    if (std::fabs(roots[i].imag()) < 1e-13 * std::max(1.0, std::abs(roots[i]))) {
      roots[i] = {roots[i].real(), 0.0};
    }
    // Relative to the size of the terms: |P(x)| cannot drop below ulp * sum |c_k x^k|.
    double scale = 0.0;
    for (std::size_t k = 0; k < p.coefficients.size(); ++k) {
      scale += std::fabs(p.coefficients[k]) * std::pow(std::abs(roots[i]), static_cast<double>(k));
    }
    const double res = std::abs(p(roots[i]));
    if (res > tol * std::max(1.0, scale)) {
      std::ostringstream msg;
      msg << "polynomial_roots: residual " << res << " exceeds " << tol << " at root "
          << roots[i];
      throw NumericError(msg.str());
    }
    if (std::abs(p.derivative(roots[i])) < 1e-8) {
      throw UnsupportedError("polynomial_roots: multiple root detected");
    }
    for (int j = 0; j < i; ++j) {
      if (std::abs(roots[i] - roots[j]) < 1e-8) {
        throw UnsupportedError("polynomial_roots: multiple root detected");
      }
    }
  }
  return roots;
}

double dirichlet_residual(int k1, int k2, ZeroKind kind, cplx z) {
  const LatticeIFS ifs = build_ifs(k1, k2);
  const double a = ifs.lattice_constant;
  cplx sum = 0.0;
  for (const auto& m : ifs.entries) {
    const double log_r = -a * m.lattice_exponent;
    sum += kind == ZeroKind::C ? std::exp(-2.0 * z * log_r) : std::exp((2.0 - z) * log_r);
  }
  return std::abs(sum - 1.0);
}

std::vector<cplx> ZeroSet::folded() const {
  std::vector<cplx> out;
  for (const auto& z : zeros) out.emplace_back(z.z.real(), fold(z.z.imag(), period));
  return out;
}

ZeroSet zero_set(int k1, int k2, ZeroKind kind, double tol) {
  if (!(tol > 0.0)) throw DomainError("zero_set: tol must be positive");
  const LatticePolynomial p = lattice_polynomial(k1, k2, kind);
  const auto roots = polynomial_roots(p, tol);
  const double a = kLatticeConstant;

  ZeroSet zs;
  zs.kind = kind;
  zs.k1 = k1;
  zs.k2 = k2;
  zs.period = kind == ZeroKind::C ? kPi / a : 2.0 * kPi / a;
  zs.strip_lower = -0.5 * zs.period;
  zs.strip_upper = 0.5 * zs.period;

  double x_star = 0.0;
  for (const cplx& x : roots) {
    if (x.imag() == 0.0 && x.real() > 0.0 && x.real() < 1.0) x_star = x.real();
  }
  if (x_star == 0.0) throw NumericError("zero_set: no positive real root in (0,1)");
  zs.dimension = -2.0 * std::log(x_star) / kLn3;

  for (const cplx& x : roots) {
    SpectralZero sz;
    sz.source_root = x;
    const cplx logx = std::log(x);  // principal branch, Im in (-pi, pi]
    sz.z = kind == ZeroKind::C ? logx / (2.0 * a) : 2.0 + logx / a;
    sz.z = principal(sz.z, zs.period);
    sz.is_conjugate_pair = x.imag() != 0.0;
    sz.residual = dirichlet_residual(k1, k2, kind, sz.z);
    zs.zeros.push_back(sz);
  }
  std::sort(zs.zeros.begin(), zs.zeros.end(), [](const SpectralZero& l, const SpectralZero& r) {
    if (l.z.real() != r.z.real()) return l.z.real() < r.z.real();
    return l.z.imag() < r.z.imag();
  });
  return zs;
}

CorrespondenceReport correspondence_check(const ZeroSet& zc, const ZeroSet& zp) {
  if (zc.kind != ZeroKind::C || zp.kind != ZeroKind::P) {
    throw DomainError("correspondence_check: expected a C set and a P set");
  }
  if (zc.k1 != zp.k1 || zc.k2 != zp.k2) {
    throw DomainError("correspondence_check: zero sets belong to different configurations");
  }
  CorrespondenceReport rep;
  if (zc.zeros.size() != zp.zeros.size()) {
    rep.message = "cardinalities differ";
    return rep;
  }
  std::vector<bool> used(zp.zeros.size(), false);
  for (const auto& c : zc.zeros) {
    const cplx image = 2.0 + 2.0 * c.z;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < zp.zeros.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(principal(image - zp.zeros[j].z, zp.period));
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    if (!(best < 1e-6)) {
      std::ostringstream msg;
      msg << "no match for z_C = " << c.z << " (closest distance " << best << ")";
      rep.message = msg.str();
      return rep;
    }
    used[best_j] = true;
    rep.pairs.emplace_back(c.z, zp.zeros[best_j].z);
    rep.max_distance = std::max(rep.max_distance, best);
  }
  rep.bijective = true;
  rep.message = "ok";
  return rep;
}

nlohmann::ordered_json to_json(const ZeroSet& zs) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(zs.kind);
  j["k1"] = zs.k1;
  j["k2"] = zs.k2;
  j["dimension"] = zs.dimension;
  j["period"] = zs.period;
  j["strip"] = {zs.strip_lower, zs.strip_upper};
  j["zeros"] = nlohmann::ordered_json::array();
  for (const auto& z : zs.zeros) {
    nlohmann::ordered_json e;
    e["re"] = z.z.real();
    e["im"] = z.z.imag();
    e["kind"] = to_string(zs.kind);
    e["residual"] = z.residual;
    e["conjugate_pair"] = z.is_conjugate_pair;
    e["source_root_re"] = z.source_root.real();
    e["source_root_im"] = z.source_root.imag();
    j["zeros"].push_back(std::move(e));
  }
  j["folded"] = nlohmann::ordered_json::array();
  for (const cplx& f : zs.folded()) j["folded"].push_back({{"re", f.real()}, {"im", f.imag()}});
  return j;
}

void write_csv(std::ostream& out, const ZeroSet& zs) {
  out << "re,im,kind,residual\n" << std::setprecision(17);
  for (const auto& z : zs.zeros) {
    out << z.z.real() << ',' << z.z.imag() << ',' << to_string(zs.kind) << ',' << z.residual
        << '\n';
  }
}

}  // namespace kochspray
