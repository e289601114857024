#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "kochspray/constants.hpp"
#include "kochspray/errors.hpp"
#include "kochspray/expansion.hpp"
#include "kochspray/ifs.hpp"

using namespace kochspray;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<int> exponents(int k1, int k2) {
  std::vector<int> e;
  for (const auto& m : build_ifs(k1, k2).entries) e.push_back(m.lattice_exponent);
  return e;
}

// Spray volume summed copy by copy; a copy with base < 3 eps is swallowed
// whole together with everything generated inside it.
double brute_spray_volume(const std::vector<int>& e, double total_weight, double eps, double b) {
  if (b < 3 * eps) return kSnowflakeArea * b * b * total_weight;
  double v = snowflake_parallel_volume(eps, b).area;
  for (int nu : e) v += brute_spray_volume(e, total_weight, eps, b * std::exp(-kLatticeConstant * nu));
  return v;
}

double brute_square_spray(const std::vector<int>& e, double lambda, double side) {
  if (2 * kPi * kPi / (side * side) > lambda) return 0.0;
  double n = 0.0;
  for (long long m = 1; kPi * kPi * m * m / (side * side) <= lambda; ++m) {
    for (long long k = 1; kPi * kPi * (m * m + k * k) / (side * side) <= lambda; ++k) n += 1;
  }
  for (int nu : e) n += brute_square_spray(e, lambda, side * std::exp(-kLatticeConstant * nu));
  return n;
}

}  // namespace

TEST_CASE("weyl coefficient") {
  CHECK(weyl_term({0, 0, 1.0}) == doctest::Approx(18 * kSqrt3 / 5 / (4 * kPi)).epsilon(1e-12));
  for (int k1 = 0; k1 <= 6; ++k1) {
    for (int k2 = 0; k2 <= 6; ++k2) CHECK(weyl_term({k1, k2, 1.0}) == doctest::Approx(weyl_term({0, 0, 1.0})).epsilon(1e-12));
  }
  CHECK(weyl_term({2, 1, 2.0}) == doctest::Approx(4 * weyl_term({2, 1, 1.0})).epsilon(1e-14));
}

TEST_CASE("prefactors") {
  CHECK(r2_prefactor_from_count(0, 0) == doctest::Approx(-1.0 / 22).epsilon(1e-14));
  CHECK(r2_prefactor_from_count(0, 6) == doctest::Approx(-1.0 / 82).epsilon(1e-14));
  CHECK(r2_prefactor_from_count(6, 6) == doctest::Approx(-1.0 / 142).epsilon(1e-14));
  CHECK(r_delta_prefactor_from_histogram(0, 0) == doctest::Approx(-2.0 / 5).epsilon(1e-14));
  CHECK(r_delta_prefactor_from_histogram(0, 6) == doctest::Approx(-10.0 / 13).epsilon(1e-14));
  CHECK(r_delta_prefactor_from_histogram(6, 6) == doctest::Approx(-22.0 / 19).epsilon(1e-14));
  CHECK(to_string(r2_prefactor_exact(0, 0)) == "-1/22");
  CHECK(to_string(r2_prefactor_exact(6, 6)) == "-1/142");
  CHECK(to_string(r_delta_prefactor_exact(0, 6)) == "-10/13");
  CHECK(to_string(r_delta_prefactor_exact(6, 6)) == "-22/19");
  const auto c = volume_coefficients({6, 6, 1.0}, 0.0);
  CHECK(c.r2_prefactor == doctest::Approx(-1.0 / 142).epsilon(1e-14));
  CHECK(c.r_delta_prefactor == doctest::Approx(-22.0 / 19).epsilon(1e-14));
  CHECK(c.component_factor == 13.0);
}

TEST_CASE("R(2) as displayed") {
  ExpansionOptions displayed;
  displayed.displayed_r2 = true;
  const auto full = volume_coefficients({2, 3, 1.0}, 0.2);
  const auto shown = volume_coefficients({2, 3, 1.0}, 0.2, displayed);
  CHECK(full.r2 == doctest::Approx(6 * shown.r2).epsilon(1e-14));
  // (0,0) table entry: -(e^{-2 beta} / 22) [v(t0) + v(t1)]
  const double beta = 0.2;
  const auto c = volume_coefficients({0, 0, 1.0}, beta);
  CHECK(c.r2 == doctest::Approx(-std::exp(-2 * beta) / 22 * (c.uv0.v + c.uv1.v)).epsilon(1e-13));
}

TEST_CASE("expansion with the alternating poles equals the copy-by-copy lattice sum") {
  ExpansionOptions opt;
  opt.alternating_poles = true;
  // (2, 0): the factor 1 / (1 - sum_i r_i^{2-z}) cancels at 2 - delta + i pi/a
  for (auto [k1, k2] : {std::pair{0, 0}, std::pair{6, 6}, std::pair{1, 4}, std::pair{2, 0}}) {
    const SprayConfig cfg{k1, k2, 1.0};
    const auto e = exponents(k1, k2);
    const double tw = 1.0 / (1.0 - build_ifs(k1, k2).ratio_power_sum(2.0));
    for (double beta : {0.0, 0.4}) {
      const auto coeffs = volume_coefficients(cfg, beta, opt);
      for (int ell : {3, 5, 7}) {
        const double eps = std::exp(-(kLatticeConstant * ell + beta));
        double brute = 0.0;
        for (double b : cfg.component_base_lengths()) brute += b * b * brute_spray_volume(e, tw, eps / b, 1.0);
        const auto v = volume_expansion(coeffs, ell);
        CHECK(std::abs(v.value - brute) <= v.error + 1e-9);
        CHECK(std::abs(v.value - spray_parallel_volume_exact(cfg, eps).area) <= v.error + 1e-9);
      }
    }
  }
}

TEST_CASE("displayed expansion omits only the alternating terms") {
  ExpansionOptions opt;
  opt.alternating_poles = true;
  const SprayConfig cfg{0, 6, 1.0};
  const auto full = volume_coefficients(cfg, 0.3, opt);
  const auto shown = volume_coefficients(cfg, 0.3);
  CHECK_FALSE(shown.alternating);
  for (int ell : {4, 5}) {
    const double sign = ell % 2 == 0 ? 1.0 : -1.0;
    const double alt = sign * (full.r2_alt * std::exp(-2 * kLatticeConstant * ell) +
                               full.r_delta_alt * std::exp(-kLatticeConstant * ell * (2 - kKochDimension)));
    CHECK(volume_expansion(full, ell).value - volume_expansion(shown, ell).value == doctest::Approx(alt).epsilon(1e-9));
  }
  // v(t0) - v(t1) and u(t0) - u~(t1) by hand
  const double e2b = std::exp(-0.6);
  CHECK(full.r2_alt == doctest::Approx(7.0 * e2b * (full.uv0.v - full.uv1.v) / (2 * (1 - (6 - 36)))).epsilon(1e-12));
  CHECK(full.r_delta_alt == doctest::Approx(2 * std::exp(-0.3 * (2 - kKochDimension)) * (full.uv0.u - full.uv1.u_tilde)).epsilon(1e-12));
}

TEST_CASE("expansion is real and positive") {
  const auto c = volume_coefficients({0, 6, 1.0}, 0.1);
  for (int ell = 0; ell <= 12; ++ell) {
    const auto v = volume_expansion(c, ell);
    CHECK(v.value > 0.0);
    CHECK(std::abs(v.imag_residue) <= 1e-10 * v.value);
  }
  CHECK_THROWS_AS(volume_expansion(c, -1), DomainError);
  CHECK_THROWS_AS(volume_coefficients({0, 0, 1.0}, 0.6), DomainError);
}

TEST_CASE("square generator counting") {
  CHECK(square_generator_counting(1.0, 2.01 * kPi * kPi) == 1);
  CHECK(square_generator_counting(1.0, 2 * kPi * kPi * 0.999) == 0);
  CHECK(square_generator_counting(1.0, 5.01 * kPi * kPi) == 3);
  long long n = 0;
  for (int m = 1; m <= 7; ++m) {
    for (int k = 1; k <= 7; ++k) n += m * m + k * k <= 50;
  }
  CHECK(square_generator_counting(1.0, 50 * kPi * kPi) == n);
}

TEST_CASE("spray counting against copy enumeration") {
  const auto g = square_generator(1.0);
  CHECK(spray_counting(g, {0, 0, 1.0}, std::log(2 * kPi * kPi) - 0.01, 10).count == 0.0);
  for (auto [k1, k2] : {std::pair{0, 0}, std::pair{6, 6}, std::pair{3, 0}}) {
    const auto e = exponents(k1, k2);
    for (double t : {std::log(50 * kPi * kPi), 8.0, 10.5}) {
      const auto sc = spray_counting(g, {k1, k2, 1.0}, t, 30);
      CHECK_FALSE(sc.truncated);
      CHECK(sc.count == brute_square_spray(e, std::exp(t), 1.0));
    }
  }
  const auto tr = spray_counting(g, {0, 0, 1.0}, 12.0, 2);
  CHECK(tr.truncated);
  CHECK(tr.tail_bound > 0.0);
}

TEST_CASE("spray counting reproduces the generating function") {
  GeneratorCounting g;
  g.count = [](double t) { return t >= 0.0 ? std::exp(t) : 0.0; };
  g.first_log_eigenvalue = 0.0;
  g.weyl_coefficient = 1.0;
  const double t = 400.0;
  const auto sc = spray_counting(g, {0, 0, 1.0}, t, 400);
  // sum_nu c_nu 3^-nu -> 1 / (1 - sum r_i^2) = 9
  CHECK(sc.count * std::exp(-t) == doctest::Approx(9.0).epsilon(1e-3));
}

TEST_CASE("counting bounds") {
  const auto zs = zero_set(0, 0, ZeroKind::C);
  cplx real_zero;
  for (const auto& z : zs.zeros) {
    if (std::abs(z.z.imag()) < 1e-12 && z.z.real() < 0) real_zero = z.z;
  }
  // independent denominator
  cplx d = 0.0;
  for (int nu : {2, 3}) {
    const double lr = -kLatticeConstant * nu;
    d += 6.0 * 2.0 * lr * std::exp(-2.0 * real_zero * lr);
  }
  const auto b = counting_bound({0, 0, 1.0}, real_zero, 0.0);
  CHECK(b.denominator == doctest::Approx(std::abs(d)).epsilon(1e-12));
  CHECK(b.denominator == doctest::Approx(2.48).epsilon(0.01));
  CHECK(b.ell0 == faber_krahn_ell0());
  CHECK(std::isfinite(b.bound));
  const auto s = counting_bound_sup({0, 0, 1.0}, real_zero);
  CHECK(s.bound >= b.bound);
  CHECK_THROWS_AS(counting_bound({0, 0, 1.0}, {-0.9, 0.0}, 0.0), DomainError);
  BoundConstants c;
  c.ell0 = 5;
  CHECK(counting_bound({0, 0, 1.0}, real_zero, 0.0, c).ell0 == 5);
}

TEST_CASE("faber-krahn ell0") {
  const double lambda = kPi * kBesselJ0FirstZero * kBesselJ0FirstZero / kSnowflakeArea;
  CHECK(faber_krahn_ell0() == static_cast<int>(std::floor(std::log(lambda) / kLn3)));
}
