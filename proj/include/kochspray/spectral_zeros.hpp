#pragma once

#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace kochspray {

using cplx = std::complex<double>;

enum class ZeroKind { C, P };

std::string to_string(ZeroKind k);
ZeroKind parse_zero_kind(const std::string& s);

// P(x) = (6-k1) x^2 + (6-k2) x^3 + 6 k1 x^4 + 6 k2 x^5 - 1.
// The same polynomial serves both kinds: x = e^{2az} for C and
// x = e^{a(z-2)} for P.
struct LatticePolynomial {
  int k1{0};
  int k2{0};
  ZeroKind kind{ZeroKind::C};
  std::vector<double> coefficients;  // coefficients[j] multiplies x^j

  int degree() const;
  cplx operator()(cplx x) const;
  cplx derivative(cplx x) const;
};

struct SpectralZero {
  cplx z;
  cplx source_root;
  bool is_conjugate_pair{false};  // z has a partner conj(z) in the set
  double residual{0.0};           // |Dirichlet sum - 1| evaluated at z
};

struct ZeroSet {
  ZeroKind kind{ZeroKind::C};
  int k1{0};
  int k2{0};
  std::vector<SpectralZero> zeros;  // principal representatives
  double strip_lower{0.0};          // principal strip (lower, upper]
  double strip_upper{0.0};
  double period{0.0};               // imaginary period of the set
  double dimension{0.0};            // D = -2 ln(x*) / ln 3

  // Representatives with Im z folded into [0, period).
  std::vector<cplx> folded() const;
};

LatticePolynomial lattice_polynomial(int k1, int k2, ZeroKind kind);

// Roots by companion-matrix eigenvalues, polished by Aberth iteration.
std::vector<cplx> polynomial_roots(const LatticePolynomial& p, double tol = 1e-12);

// Dirichlet-sum residual |sum_i r_i^{-2z} - 1| (C) or |sum_i r_i^{2-z} - 1| (P).
double dirichlet_residual(int k1, int k2, ZeroKind kind, cplx z);

ZeroSet zero_set(int k1, int k2, ZeroKind kind, double tol = 1e-12);

struct CorrespondenceReport {
  bool bijective{false};
  double max_distance{0.0};
  std::vector<std::pair<cplx, cplx>> pairs;  // (z_C, matched z_P)
  std::string message;
};

// Checks that z -> 2 + 2z maps Z_C onto Z_P modulo 2 pi i / a.
CorrespondenceReport correspondence_check(const ZeroSet& zc, const ZeroSet& zp);

nlohmann::ordered_json to_json(const ZeroSet& zs);
void write_csv(std::ostream& out, const ZeroSet& zs);

}  // namespace kochspray
