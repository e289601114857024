#include "kochspray/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "kochspray/constants.hpp"
#include "kochspray/errors.hpp"

namespace kochspray {

namespace {

constexpr double kPi = std::numbers::pi;

// sum_i log(r_i) r_i^{s}, with log r_i = -a nu_i.
cplx log_weighted_power_sum(const LatticeIFS& ifs, cplx s) {
  const double a = ifs.lattice_constant;
  cplx sum = 0.0;
  for (const auto& m : ifs.entries) {
    const double log_r = -a * m.lattice_exponent;
    sum += log_r * std::exp(s * log_r);
  }
  return sum;
}

cplx component_factor(const SprayConfig& config, cplx z) {
  const double a = kLatticeConstant;
  return 1.0 + static_cast<double>(config.k1) * std::exp(a * (z - 2.0)) +
         static_cast<double>(config.k2) * std::exp(2.0 * a * (z - 2.0));
}

void check_beta(double beta, double period, const char* who) {
  if (!(beta >= 0.0 && beta < period)) {
    std::ostringstream msg;
    msg << who << ": beta must lie in [0, " << period << "), got " << beta;
    throw DomainError(msg.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Counting side

int faber_krahn_ell0() {
  const double lambda1 = kPi * kBesselJ0FirstZero * kBesselJ0FirstZero / kSnowflakeArea;
  return static_cast<int>(std::floor(std::log(lambda1) / kLn3));
}

double remainder_envelope(const SprayConfig& config, const BoundConstants& c) {
  validate_k(config.k1, config.k2);
  const double m = std::max(c.c_minus, c.c_plus);
  const double d = kKochDimension;
  return m * (1.0 + std::pow(9.0, -d) * config.k1 + std::pow(9.0 * kSqrt3, -d) * config.k2);
}

double weyl_term(const SprayConfig& config) { return spray_volume(config) / (4.0 * kPi); }

CountingBound counting_bound(const SprayConfig& config, cplx z, double beta,
                             const BoundConstants& c) {
  const double a = kLatticeConstant;
  const double d = kKochDimension;
  check_beta(beta, 2.0 * a, "counting_bound");
  const double res = dirichlet_residual(config.k1, config.k2, ZeroKind::C, z);
  if (res > 1e-8) {
    std::ostringstream msg;
    msg << "counting_bound: z = " << z << " is not in Z_C (residual " << res << ")";
    throw DomainError(msg.str());
  }
  if (!(z.real() < -0.5 * d)) throw DomainError("counting_bound: requires Re z < -delta/2");

  const LatticeIFS ifs = build_ifs(config.k1, config.k2);
  CountingBound b;
  b.z = z;
  b.beta = beta;
  b.ell0 = c.ell0.value_or(faber_krahn_ell0());
  b.weyl_part = generator_volume(config) / (4.0 * kPi) * std::exp(beta) *
                std::abs(std::exp(2.0 * a * b.ell0 * (z + 1.0))) /
                std::abs(1.0 - std::exp(2.0 * a * (z + 1.0)));
  b.envelope_part = remainder_envelope(config, c) * std::exp(beta * d / 2.0) /
                    std::abs(1.0 - std::exp(2.0 * a * (z + d / 2.0)));
  b.denominator = std::abs(2.0 * log_weighted_power_sum(ifs, -2.0 * z));
  b.bound = 2.0 * a * (b.weyl_part + b.envelope_part) / b.denominator;
  return b;
}

CountingBound counting_bound_sup(const SprayConfig& config, cplx z, const BoundConstants& c) {
  const double a = kLatticeConstant;
  if (c.beta_grid < 1) throw DomainError("counting_bound_sup: beta_grid must be >= 1");
  CountingBound best;
  for (int i = 0; i < c.beta_grid; ++i) {
    const double beta = 2.0 * a * i / c.beta_grid;
    const CountingBound b = counting_bound(config, z, beta, c);
    if (i == 0 || b.bound > best.bound) best = b;
  }
  return best;
}

std::vector<CountingBound> counting_bounds(const SprayConfig& config, const BoundConstants& c) {
  const ZeroSet zs = zero_set(config.k1, config.k2, ZeroKind::C);
  std::vector<CountingBound> out;
  for (const auto& z : zs.zeros) {
    if (z.z.real() < -0.5 * kKochDimension) out.push_back(counting_bound_sup(config, z.z, c));
  }
  return out;
}

SprayCount spray_counting(const GeneratorCounting& g, const SprayConfig& config, double t,
                          int nu_max) {
  if (nu_max < 0) throw DomainError("spray_counting: nu_max must be >= 0");
  const double a = kLatticeConstant;
  const LatticeIFS ifs = build_ifs(config.k1, config.k2);
  // Highest level whose copies can have an eigenvalue below e^t.
  const double span = t - g.first_log_eigenvalue;
  const int needed = span < 0.0 ? -1 : static_cast<int>(std::floor(span / (2.0 * a)));
  const int top = std::max(needed, nu_max);
  const auto c = word_multiplicities(ifs, std::max(top, 0));

  SprayCount out;
  const int last = std::min(needed, nu_max);
  for (int nu = 0; nu <= last; ++nu) out.count += c.counts[nu] * g.count(t - 2.0 * a * nu);
  out.levels_used = last + 1;
  if (needed > nu_max) {
    out.truncated = true;
    for (int nu = nu_max + 1; nu <= needed; ++nu) {
      const double s = t - 2.0 * a * nu;
      out.tail_bound += c.counts[nu] * (g.weyl_coefficient * std::exp(s) +
                                        g.remainder_bound * std::exp(s * g.delta / 2.0));
    }
  }
  return out;
}

long long square_generator_counting(double side, double lambda) {
  if (!(side > 0.0)) throw DomainError("square_generator_counting: side must be positive");
  if (!(lambda > 0.0)) return 0;
  auto inside = [&](long long m, long long n) {
    return kPi * kPi * static_cast<double>(m * m + n * n) / (side * side) <= lambda;
  };
  const double r2 = lambda * side * side / (kPi * kPi);
  long long total = 0;
  for (long long m = 1; inside(m, 1); ++m) {
    long long n = static_cast<long long>(std::sqrt(std::max(0.0, r2 - static_cast<double>(m * m))));
    while (n > 0 && !inside(m, n)) --n;
    while (inside(m, n + 1)) ++n;
    total += n;
  }
  return total;
}

GeneratorCounting square_generator(double side) {
  if (!(side > 0.0)) throw DomainError("square_generator: side must be positive");
  GeneratorCounting g;
  g.count = [side](double t) {
    return static_cast<double>(square_generator_counting(side, std::exp(t)));
  };
  g.first_log_eigenvalue = std::log(2.0 * kPi * kPi / (side * side));
  g.weyl_coefficient = side * side / (4.0 * kPi);
  // Lattice points in a quarter disc of radius R miss its area by at most 2R + 1.
  g.remainder_bound = 2.0 * side / kPi + 1.0;
  g.delta = 1.0;
  return g;
}

// ---------------------------------------------------------------------------
// Volume side

double r2_prefactor_from_count(int k1, int k2) {
  validate_k(k1, k2);
  const double count = 12.0 + 5.0 * (k1 + k2);
  return 1.0 / (2.0 * (1.0 - count));
}

double r_delta_prefactor_from_histogram(int k1, int k2) {
  const LatticeIFS ifs = build_ifs(k1, k2);
  const auto h = ifs.exponent_histogram();
  double s = 0.0;
  for (std::size_t nu = 0; nu < h.size(); ++nu) s += h[nu] * std::ldexp(1.0, -static_cast<int>(nu));
  return (1.0 + k1 / 2.0 + k2 / 4.0) / (2.0 * (1.0 - s));
}

Rational r2_prefactor_exact(int k1, int k2) {
  validate_k(k1, k2);
  return make_rational(1, 2 * (1 - (12 + 5 * (k1 + k2))));
}

Rational r_delta_prefactor_exact(int k1, int k2) {
  const auto h = build_ifs(k1, k2).exponent_histogram();
  // sum_i 2^{-nu_i} = s / 32 with nu_i <= 5
  long long s = 0;
  for (std::size_t nu = 0; nu < h.size(); ++nu) s += static_cast<long long>(h[nu]) << (5 - nu);
  // (4 + 2 k1 + k2) / 4  over  2 (32 - s) / 32
  return make_rational(4LL * (4 + 2 * k1 + k2), 32 - s);
}

Rational make_rational(long long num, long long den) {
  if (den == 0) throw DomainError("make_rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  return {num / g, den / g};
}

std::string to_string(const Rational& r) {
  return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

cplx volume_transform_numerator(cplx z, double beta,
                                const ExpansionOptions& opt, double* error) {
  const double a = kLatticeConstant;
  const double d = kKochDimension;
  check_beta(beta, a, "volume_transform_numerator");
  const UVValues uv0 = uv_functions(beta / (2.0 * a), opt.gamma);
  const UVValues uv1 = uv_functions((a + beta) / (2.0 * a), opt.gamma);
  const GammaValue g3 = gamma_volume(std::exp(-beta) / (3.0 * kSqrt3), opt.gamma);
  const double e2b = std::exp(-2.0 * beta);
  const double edb = std::exp(-beta * (2.0 - d));

  const cplx t1 = std::exp(a * z) / (1.0 - std::exp(-a * z)) * kSnowflakeArea;
  const cplx t2 = std::exp(2.0 * a * z) / 3.0 *
                  (7.0 * kSqrt3 / 10.0 + std::sqrt(e2b - 0.25) +
                   2.0 * e2b * std::asin(0.5 * std::exp(beta)) - kPi * e2b / 3.0);
  const cplx w3 = std::exp(3.0 * a * z);
  const cplx t3 = w3 * (8.0 * kSqrt3 / 45.0 + kPi * e2b / 27.0 + 12.0 * g3.area);

  const cplx zd = z - 2.0 + d;
  const cplx z2 = z - 2.0;
  const cplx cu0 = edb * std::exp(4.0 * a * zd) / (1.0 - std::exp(2.0 * a * zd));
  const cplx cv0 = e2b * std::exp(4.0 * a * z2) / (1.0 - std::exp(2.0 * a * z2));
  const cplx cu1 = edb * std::exp(5.0 * a * zd) / (1.0 - std::exp(2.0 * a * zd));
  const cplx cv1 = e2b * std::exp(5.0 * a * z2) / (1.0 - std::exp(2.0 * a * z2));

  const cplx l = t1 + t2 + t3 + uv0.u * cu0 + uv0.v * cv0 + uv1.u_tilde * cu1 + uv1.v * cv1;
  if (error) {
    *error = std::abs(w3) * 12.0 * g3.error + std::abs(cu0) * uv0.u_error +
             std::abs(cv0) * uv0.v_error + std::abs(cu1) * uv1.u_tilde_error +
             std::abs(cv1) * uv1.v_error;
  }
  return l;
}

VolumeCoefficients volume_coefficients(const SprayConfig& config, double beta,
                                       const ExpansionOptions& opt) {
  const double a = kLatticeConstant;
  const double d = kKochDimension;
  check_beta(beta, a, "volume_coefficients");
  const LatticeIFS ifs = build_ifs(config.k1, config.k2);

  VolumeCoefficients vc;
  vc.k1 = config.k1;
  vc.k2 = config.k2;
  vc.beta = beta;
  vc.uv0 = uv_functions(beta / (2.0 * a), opt.gamma);
  vc.uv1 = uv_functions((a + beta) / (2.0 * a), opt.gamma);

  const double count = static_cast<double>(ifs.entries.size());
  vc.r2_prefactor = 1.0 / (2.0 * (1.0 - count));
  vc.component_factor = opt.displayed_r2 ? 1.0 : 1.0 + config.k1 + config.k2;
  const double e2b = std::exp(-2.0 * beta);
  vc.r2 = vc.component_factor * vc.r2_prefactor * e2b * (vc.uv0.v + vc.uv1.v);
  vc.r2_error = std::fabs(vc.component_factor * vc.r2_prefactor * e2b) *
                (vc.uv0.v_error + vc.uv1.v_error);

  vc.r_delta_prefactor = (1.0 + config.k1 / 2.0 + config.k2 / 4.0) /
                         (2.0 * (1.0 - ifs.ratio_power_sum(std::log(4.0) / kLn3)));
  const double edb = std::exp(-beta * (2.0 - d));
  vc.r_delta = vc.r_delta_prefactor * edb * (vc.uv0.u + vc.uv1.u_tilde);
  vc.r_delta_error =
      std::fabs(vc.r_delta_prefactor * edb) * (vc.uv0.u_error + vc.uv1.u_tilde_error);

  if (opt.alternating_poles) {
    // sum_i r_i^{2-z} at z = 2 + i pi/a is the signed histogram sum.
    double signed_count = 0.0;
    for (const auto& m : ifs.entries) signed_count += (m.lattice_exponent % 2 == 0) ? 1.0 : -1.0;
    const double comp = opt.displayed_r2 ? 1.0 : 1.0 - config.k1 + config.k2;
    const double f2 = comp * e2b / (2.0 * (1.0 - signed_count));
    vc.alternating = true;
    vc.r2_alt = f2 * (vc.uv0.v - vc.uv1.v);
    vc.r2_alt_error = std::fabs(f2) * (vc.uv0.v_error + vc.uv1.v_error);
    // With x = e^{a(z-2)} = -1/2, numerator 1 + k1 x + k2 x^2 and denominator
    // 1 - sum_i x^nu_i are (4 - 2k1 + k2)/4 and (4 - 2k1 + k2)/16. When both
    // vanish the ratio is the ratio of their x-derivatives.
    double ratio = 4.0;
    if (4 - 2 * config.k1 + config.k2 == 0) {
      const double x = -0.5;
      double dden = 0.0;
      for (const auto& m : ifs.entries) dden -= m.lattice_exponent * std::pow(x, m.lattice_exponent - 1);
      ratio = (config.k1 + 2.0 * config.k2 * x) / dden;
    }
    vc.r_delta_alt = 0.5 * ratio * edb * (vc.uv0.u - vc.uv1.u_tilde);
    vc.r_delta_alt_error = std::fabs(0.5 * ratio) * edb * (vc.uv0.u_error + vc.uv1.u_tilde_error);
  }

  const ZeroSet zp = zero_set(config.k1, config.k2, ZeroKind::P);
  for (const auto& z : zp.zeros) {
    if (std::abs(component_factor(config, z.z)) < 1e-9) continue;
    double lerr = 0.0;
    const cplx l = volume_transform_numerator(z.z, beta, opt, &lerr);
    const cplx factor = -a * component_factor(config, z.z) / log_weighted_power_sum(ifs, 2.0 - z.z);
    vc.poles.push_back({z.z, factor * l, std::abs(factor) * lerr, z.is_conjugate_pair});
  }
  return vc;
}

ExpansionValue volume_expansion(const VolumeCoefficients& c, int ell) {
  if (ell < 0) throw DomainError("volume_expansion: ell must be >= 0");
  const double a = kLatticeConstant;
  const double d = kKochDimension;
  ExpansionValue out;
  out.value = c.r2 * std::exp(-2.0 * a * ell) + c.r_delta * std::exp(-a * ell * (2.0 - d));
  out.error = c.r2_error * std::exp(-2.0 * a * ell) + c.r_delta_error * std::exp(-a * ell * (2.0 - d));
  if (c.alternating) {
    const double sign = (ell % 2 == 0) ? 1.0 : -1.0;
    out.value += sign * (c.r2_alt * std::exp(-2.0 * a * ell) +
                         c.r_delta_alt * std::exp(-a * ell * (2.0 - d)));
    out.error += c.r2_alt_error * std::exp(-2.0 * a * ell) +
                 c.r_delta_alt_error * std::exp(-a * ell * (2.0 - d));
  }
  cplx poles = 0.0;
  for (const auto& p : c.poles) {
    const cplx w = std::exp(-a * static_cast<double>(ell) * p.z);
    poles += p.value * w;
    out.error += p.error * std::abs(w);
  }
  out.value += poles.real();
  out.imag_residue = poles.imag();
  return out;
}

ExpansionValue volume_expansion(const SprayConfig& config, int ell, double beta,
                                const ExpansionOptions& opt) {
  return volume_expansion(volume_coefficients(config, beta, opt), ell);
}

VolumeValue spray_parallel_volume_exact(const SprayConfig& config, double eps,
                                        const GammaOptions& opt) {
  validate_k(config.k1, config.k2);
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError("spray_parallel_volume_exact: eps must be positive and finite");
  }
  const double a = kLatticeConstant;
  const double b0 = config.base_length;
  const double e = eps / b0;
  const LatticeIFS ifs = build_ifs(config.k1, config.k2);
  const double total_weight = 1.0 / (1.0 - ifs.ratio_power_sum(2.0));

  // Copies of base b are entirely within e of their boundary once b < 3e.
  int top = 0;
  for (int m : config.component_exponents()) {
    const double levels = (-std::log(3.0 * e) / a) - m;
    top = std::max(top, static_cast<int>(std::ceil(std::max(levels, 0.0))) + 1);
  }
  const auto c = word_multiplicities(ifs, top);

  VolumeValue out;
  for (int m : config.component_exponents()) {
    double partial_weight = 0.0;
    for (int nu = 0; nu <= top; ++nu) {
      const double b = std::exp(-a * (nu + m));
      if (b < 3.0 * e) break;
      const VolumeValue v = snowflake_parallel_volume(e, b, opt);
      const double w = c.counts[nu];
      out.area += w * v.area;
      out.error += w * v.error;
      partial_weight += w * std::exp(-2.0 * a * nu);
    }
    out.area += kSnowflakeArea * std::exp(-2.0 * a * m) * (total_weight - partial_weight);
  }
  return {out.area * b0 * b0, out.error * b0 * b0};
}

// ---------------------------------------------------------------------------

nlohmann::ordered_json to_json(const VolumeCoefficients& c) {
  nlohmann::ordered_json j;
  j["k1"] = c.k1;
  j["k2"] = c.k2;
  j["beta"] = c.beta;
  j["r2"] = {{"prefactor", c.r2_prefactor},
             {"component_factor", c.component_factor},
             {"value", c.r2},
             {"error", c.r2_error}};
  j["r_delta"] = {{"prefactor", c.r_delta_prefactor}, {"value", c.r_delta}, {"error", c.r_delta_error}};
  if (c.alternating) {
    j["r2_alternating"] = {{"value", c.r2_alt}, {"error", c.r2_alt_error}};
    j["r_delta_alternating"] = {{"value", c.r_delta_alt}, {"error", c.r_delta_alt_error}};
  }
  j["poles"] = nlohmann::ordered_json::array();
  for (const auto& p : c.poles) {
    j["poles"].push_back({{"z_re", p.z.real()},
                          {"z_im", p.z.imag()},
                          {"re", p.value.real()},
                          {"im", p.value.imag()},
                          {"error", p.error},
                          {"conjugate_pair", p.conjugate_pair}});
  }
  auto uvj = [](const UVValues& uv) {
    nlohmann::ordered_json o;
    o["u"] = std::isnan(uv.u) ? nlohmann::ordered_json() : nlohmann::ordered_json(uv.u);
    o["u_tilde"] = uv.u_tilde;
    o["v"] = uv.v;
    return o;
  };
  j["uv_t0"] = uvj(c.uv0);
  j["uv_t1"] = uvj(c.uv1);
  return j;
}

nlohmann::ordered_json to_json(const CountingBound& b) {
  nlohmann::ordered_json j;
  j["z_re"] = b.z.real();
  j["z_im"] = b.z.imag();
  j["bound"] = b.bound;
  j["beta"] = b.beta;
  j["weyl_part"] = b.weyl_part;
  j["envelope_part"] = b.envelope_part;
  j["denominator"] = b.denominator;
  j["ell0"] = b.ell0;
  return j;
}

}  // namespace kochspray
