#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kochspray/constants.hpp"
#include "kochspray/errors.hpp"
#include "kochspray/spectral_zeros.hpp"

using namespace kochspray;

namespace {

// Distance from ref to the nearest element of zs, allowing for the period.
double nearest(const ZeroSet& zs, cplx ref) {
  double best = 1e300;
  for (const auto& z : zs.zeros) {
    for (int k = -1; k <= 1; ++k) best = std::min(best, std::abs(z.z + cplx(0, k * zs.period) - ref));
  }
  return best;
}

}  // namespace

TEST_CASE("lattice polynomial coefficients") {
  const auto p00 = lattice_polynomial(0, 0, ZeroKind::C);
  CHECK(p00.degree() == 3);
  CHECK(p00.coefficients[0] == -1);
  CHECK(p00.coefficients[2] == 6);
  CHECK(p00.coefficients[3] == 6);
  const auto p06 = lattice_polynomial(0, 6, ZeroKind::P);
  CHECK(p06.degree() == 5);
  CHECK(p06.coefficients[2] == 6);
  CHECK(p06.coefficients[3] == 0);
  CHECK(p06.coefficients[5] == 36);
  const auto p66 = lattice_polynomial(6, 6, ZeroKind::C);
  CHECK(p66.coefficients[2] == 0);
  CHECK(p66.coefficients[4] == 36);
  CHECK(p66.coefficients[5] == 36);
  // P(1) = number of maps - 1
  CHECK(p66(1.0).real() == doctest::Approx(71));
}

TEST_CASE("published zero values") {
  CHECK(nearest(zero_set(0, 0, ZeroKind::C), {-0.952455, 0}) <= 1e-5);
  const auto z06 = zero_set(0, 6, ZeroKind::C);
  CHECK(nearest(z06, {-0.928326, 0}) <= 1e-5);
  CHECK(nearest(z06, {-0.71134, 2.58082}) <= 1e-5);
  CHECK(nearest(z06, {-0.71134, -2.58082}) <= 1e-5);
  const auto z66 = zero_set(6, 6, ZeroKind::C);
  CHECK(nearest(z66, {-0.888243, 0}) <= 1e-5);
  CHECK(nearest(z66, {-0.839089, 1.34671}) <= 1e-5);
  CHECK(nearest(z66, {-0.839089, -1.34671}) <= 1e-5);
  CHECK(nearest(z66, {-0.666227, 2.8596}) <= 1e-5);
}

TEST_CASE("P zeros follow from C zeros") {
  CHECK(nearest(zero_set(0, 0, ZeroKind::P), {2 - 2 * 0.952455, 0}) <= 2e-5);
}

TEST_CASE("residuals and counts") {
  for (int k1 = 0; k1 <= 6; ++k1) {
    for (int k2 = 0; k2 <= 6; ++k2) {
      for (ZeroKind kind : {ZeroKind::C, ZeroKind::P}) {
        const auto zs = zero_set(k1, k2, kind);
        CHECK(static_cast<int>(zs.zeros.size()) == lattice_polynomial(k1, k2, kind).degree());
        for (const auto& z : zs.zeros) {
          // independent evaluation of the Dirichlet sum
          cplx s = 0.0;
          const int h[6] = {0, 0, 6 - k1, 6 - k2, 6 * k1, 6 * k2};
          for (int nu = 2; nu <= 5; ++nu) {
            const double lr = -kLatticeConstant * nu;
            s += static_cast<double>(h[nu]) * std::exp((kind == ZeroKind::C ? -2.0 * z.z : 2.0 - z.z) * lr);
          }
          CHECK(std::abs(s - 1.0) <= 1e-10);
          CHECK(z.residual <= 1e-10);
        }
      }
    }
  }
  CHECK(zero_set(0, 0, ZeroKind::C).zeros.size() == 3);
  CHECK(zero_set(0, 6, ZeroKind::C).zeros.size() == 5);
  CHECK(zero_set(6, 6, ZeroKind::C).zeros.size() == 5);
}

TEST_CASE("strips and periods") {
  const auto zc = zero_set(1, 2, ZeroKind::C);
  const auto zp = zero_set(1, 2, ZeroKind::P);
  CHECK(zc.period == doctest::Approx(std::numbers::pi / kLatticeConstant));
  CHECK(zp.period == doctest::Approx(2 * std::numbers::pi / kLatticeConstant));
  for (const auto& z : zc.zeros) {
    CHECK(z.z.imag() > zc.strip_lower);
    CHECK(z.z.imag() <= zc.strip_upper + 1e-12);
  }
  for (const cplx& f : zc.folded()) {
    CHECK(f.imag() >= 0.0);
    CHECK(f.imag() < zc.period);
  }
}

TEST_CASE("dimension and the Im = pi / ln3 zero") {
  const auto zs = zero_set(0, 0, ZeroKind::C);
  CHECK(zs.dimension > 1.90);
  CHECK(zs.dimension < 1.91);
  double s = 12 * 0.0;
  for (int nu : {2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3}) s += std::exp(-kLatticeConstant * nu * zs.dimension);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-10));

  bool found = false;
  for (const auto& z : zero_set(6, 6, ZeroKind::C).zeros) {
    found = found || std::abs(std::abs(z.z.imag()) - std::numbers::pi / kLn3) <= 1e-4;
  }
  CHECK(found);
}

TEST_CASE("conjugate pairs are flagged") {
  const auto zs = zero_set(0, 6, ZeroKind::C);
  int flagged = 0;
  for (const auto& z : zs.zeros) flagged += z.is_conjugate_pair;
  CHECK(flagged == 4);
}

TEST_CASE("correspondence") {
  for (auto [k1, k2] : {std::pair{0, 0}, std::pair{6, 6}, std::pair{2, 5}}) {
    const auto rep = correspondence_check(zero_set(k1, k2, ZeroKind::C), zero_set(k1, k2, ZeroKind::P));
    CHECK(rep.bijective);
    CHECK(rep.max_distance <= 1e-9);
    if (k1 == 6 && k2 == 6) CHECK(rep.pairs.size() == 5);
  }
  CHECK_THROWS_AS(correspondence_check(zero_set(0, 0, ZeroKind::C), zero_set(6, 6, ZeroKind::P)), DomainError);
}

TEST_CASE("zero kind parsing") {
  CHECK(parse_zero_kind("C") == ZeroKind::C);
  CHECK(parse_zero_kind("P") == ZeroKind::P);
  CHECK_THROWS_AS(parse_zero_kind("Q"), DomainError);
  const auto j = to_json(zero_set(0, 0, ZeroKind::C));
  CHECK(j["zeros"].size() == 3);
  CHECK(j["zeros"][0].contains("re"));
}
