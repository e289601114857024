#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kochspray/ifs.hpp"
#include "kochspray/snowflake_volume.hpp"
#include "kochspray/spectral_zeros.hpp"

namespace kochspray {

// ---------------------------------------------------------------------------
// Counting side

struct BoundConstants {
  double c_minus{-1481.0};
  double c_plus{281.5e3};
  // Largest integer with N(2a l0) = 0; defaults to the Faber-Krahn estimate.
  std::optional<int> ell0;
  int beta_grid{64};
};

// floor(log_3(pi j_{0,1}^2 / vol(K))): Faber-Krahn lower bound on the first
// Dirichlet eigenvalue of the unit snowflake, converted to a lattice index.
int faber_krahn_ell0();

// max(C-, C+) scaled for the extra generator components.
double remainder_envelope(const SprayConfig& config, const BoundConstants& c = {});

double weyl_term(const SprayConfig& config);

struct CountingBound {
  cplx z;
  double bound{0.0};        // at the requested beta, or the sup over the grid
  double beta{0.0};         // beta attaining it
  double weyl_part{0.0};
  double envelope_part{0.0};
  double denominator{0.0};  // |sum_i 2 log(r_i) r_i^{-2z}|
  int ell0{0};
};

// Upper bound of |Q~_beta(z)| for z in Z_C with Re z < -delta/2, beta in [0, 2a).
CountingBound counting_bound(const SprayConfig& config, cplx z, double beta,
                             const BoundConstants& c = {});
// Supremum over a uniform grid of beta_grid points in [0, 2a).
CountingBound counting_bound_sup(const SprayConfig& config, cplx z, const BoundConstants& c = {});

// Zeros of Z_C with Re z < -delta/2 together with their sup bounds.
std::vector<CountingBound> counting_bounds(const SprayConfig& config, const BoundConstants& c = {});

// Generator counting function t -> N_D(G, e^t).
struct GeneratorCounting {
  std::function<double(double)> count;
  double first_log_eigenvalue{0.0};  // count(t) = 0 for t < this
  double weyl_coefficient{0.0};      // area / (4 pi)
  double remainder_bound{0.0};       // |count - weyl e^t| <= remainder_bound e^{t delta/2}
  double delta{0.0};
};

struct SprayCount {
  double count{0.0};
  bool truncated{false};
  double tail_bound{0.0};
  int levels_used{0};
};

// sum_nu c_nu g(t - 2 a nu) over nu <= nu_max.
SprayCount spray_counting(const GeneratorCounting& g, const SprayConfig& config, double t,
                          int nu_max);

// #{(m,n) >= 1 : pi^2 (m^2 + n^2) / s^2 <= lambda}.
long long square_generator_counting(double side, double lambda);

GeneratorCounting square_generator(double side);

// ---------------------------------------------------------------------------
// Volume side

struct ExpansionOptions {
  GammaOptions gamma{};
  // Use R(2) exactly as displayed, without the factor 1 + k1 + k2 from the
  // eps^2 terms of the extra components.
  bool displayed_r2{false};
  // Add the poles at 2 + i pi/a and 2 - delta + i pi/a. For integer ell they
  // contribute (-1)^ell terms that the displayed expansion leaves out;
  // with them the expansion equals the lattice sum of closed forms.
  bool alternating_poles{false};
};

struct PoleCoefficient {
  cplx z;
  cplx value;
  double error{0.0};
  bool conjugate_pair{false};
};

struct VolumeCoefficients {
  int k1{0};
  int k2{0};
  double beta{0.0};
  // R(2) = component_factor * r2_prefactor * e^{-2 beta} [v(t0) + v(t1)]
  double r2_prefactor{0.0};  // 1 / (2 (1 - #Sigma))
  double component_factor{1.0};
  double r2{0.0};
  double r2_error{0.0};
  // R(2 - delta) = r_delta_prefactor * e^{-beta (2 - delta)} [u(t0) + u~(t1)]
  double r_delta_prefactor{0.0};
  double r_delta{0.0};
  double r_delta_error{0.0};
  // Residues at 2 + i pi/a and 2 - delta + i pi/a (alternating_poles only):
  // (1 - k1 + k2) / (2 (1 - sum_i (-1)^nu_i)) e^{-2 beta} [v(t0) - v(t1)] and
  // 2 e^{-beta (2 - delta)} [u(t0) - u~(t1)] (another constant replaces 2
  // when 4 - 2 k1 + k2 = 0 and the factor 1/(1 - sum_i r_i^{2-z}) cancels).
  bool alternating{false};
  double r2_alt{0.0};
  double r2_alt_error{0.0};
  double r_delta_alt{0.0};
  double r_delta_alt_error{0.0};
  // One per element of Z_P, except where 1 + k1 e^{a(z-2)} + k2 e^{2a(z-2)}
  // vanishes and the pole cancels.
  std::vector<PoleCoefficient> poles;
  UVValues uv0;                        // at t0 = beta / 2a
  UVValues uv1;                        // at t1 = (a + beta) / 2a
};

// Prefactor of R(2 - delta) re-derived from the histogram:
// (1 + k1/2 + k2/4) / (2 (1 - sum_i 2^{-nu_i})).
double r_delta_prefactor_from_histogram(int k1, int k2);
// 1 / (2 (1 - #Sigma)).
double r2_prefactor_from_count(int k1, int k2);

struct Rational {
  long long num{0};
  long long den{1};
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};
Rational make_rational(long long num, long long den);
std::string to_string(const Rational& r);
// The two prefactors above in exact arithmetic.
Rational r2_prefactor_exact(int k1, int k2);
Rational r_delta_prefactor_exact(int k1, int k2);

// L(z) of the volume transform, term by term.
cplx volume_transform_numerator(cplx z, double beta,
                                const ExpansionOptions& opt = {}, double* error = nullptr);

VolumeCoefficients volume_coefficients(const SprayConfig& config, double beta,
                                       const ExpansionOptions& opt = {});

struct ExpansionValue {
  double value{0.0};
  double imag_residue{0.0};
  double error{0.0};
};

ExpansionValue volume_expansion(const VolumeCoefficients& coeffs, int ell);
ExpansionValue volume_expansion(const SprayConfig& config, int ell, double beta,
                                const ExpansionOptions& opt = {});

// vol(Omega_{-eps}) from the lattice sum over scaled generator copies,
// each evaluated with the closed form; copies with base <= 3 eps are full
// and summed exactly as a geometric tail.
VolumeValue spray_parallel_volume_exact(const SprayConfig& config, double eps,
                                        const GammaOptions& opt = {});

nlohmann::ordered_json to_json(const VolumeCoefficients& c);
nlohmann::ordered_json to_json(const CountingBound& b);

}  // namespace kochspray
