#include "kochspray/snowflake_volume.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "kochspray/constants.hpp"
#include "kochspray/errors.hpp"

namespace kochspray {

namespace {
constexpr double kPi = std::numbers::pi;
}

double fractional_alpha(double eps) {
  if (!(eps > 0.0)) throw DomainError("fractional_alpha: eps must be positive");
  const double x = -std::log(eps) / kLn3;
  const double r = std::round(x);
  if (std::fabs(x - r) < 1e-12) return 0.0;
  return x - std::floor(x);
}

UVValues uv_functions(double t, const GammaOptions& opt) {
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("uv_functions: t must lie in [0,1)");
  const GammaValue g2 = gamma_volume(std::pow(3.0, -t - 2.0), opt);
  const GammaValue g1 = gamma_volume(std::pow(3.0, -t - 1.0), opt);
  const double p94 = std::pow(9.0 / 4.0, t);
  const double p14 = std::pow(0.25, t);

  UVValues r;
  if (t < 0.5) {
    r.u = p94 * (21.0 * kSqrt3 / 40.0 + 0.75 * std::sqrt(std::pow(3.0, -2.0 * t) - 0.25) +
                 81.0 * g2.area) +
          p14 * (1.5 * std::asin(0.5 * std::pow(3.0, t)) - kPi / 6.0);
    r.u_error = p94 * 81.0 * g2.error;
  } else {
    r.u = std::numeric_limits<double>::quiet_NaN();
    r.u_error = std::numeric_limits<double>::quiet_NaN();
  }
  r.u_tilde = p94 * (2.0 * kSqrt3 / 5.0 + 27.0 * g1.area + 81.0 * g2.area) + p14 * kPi / 3.0;
  r.u_tilde_error = p94 * (27.0 * g1.error + 81.0 * g2.error);
  r.v = -kPi / 3.0 - 324.0 * std::pow(9.0, t) * g2.area;
  r.v_error = 324.0 * std::pow(9.0, t) * g2.error;
  return r;
}

int snowflake_volume_case(double eps) {
  if (!(eps > 0.0)) throw DomainError("snowflake_volume_case: eps must be positive");
  if (eps > kBreakCase1) return 1;
  if (eps > kBreakCase2) return 2;
  if (eps > kBreakCase3) return 3;
  return fractional_alpha(eps) < 0.5 ? 4 : 5;
}

VolumeValue snowflake_parallel_volume(double eps, double base_length, const GammaOptions& opt) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError("snowflake_parallel_volume: eps must be positive and finite");
  }
  if (!(base_length > 0.0)) throw DomainError("snowflake_parallel_volume: base length must be positive");
  const double e = eps / base_length;
  const double b2 = base_length * base_length;
  const double e2 = e * e;

  VolumeValue out;
  switch (snowflake_volume_case(e)) {
    case 1:
      out = {kSnowflakeArea, 0.0};
      break;
    case 2:
      out = {7.0 * kSqrt3 / 30.0 + std::sqrt(e2 - 1.0 / 36.0) +
                 6.0 * e2 * std::asin(1.0 / (6.0 * e)) - kPi * e2,
             0.0};
      break;
    case 3: {
      const GammaValue g = gamma_volume(e, opt);
      out = {8.0 * kSqrt3 / 45.0 + kPi * e2 + 12.0 * g.area, 12.0 * g.error};
      break;
    }
    default: {
      const double t = fractional_alpha(e);
      const UVValues uv = uv_functions(t, opt);
      const double s = std::pow(e, 2.0 - kKochDimension);
      if (t < 0.5) {
        out = {uv.u * s + uv.v * e2, uv.u_error * s + uv.v_error * e2};
      } else {
        out = {uv.u_tilde * s + uv.v * e2, uv.u_tilde_error * s + uv.v_error * e2};
      }
      break;
    }
  }
  return {b2 * out.area, b2 * out.error};
}

VolumeValue generator_parallel_volume(const SprayConfig& config, double eps,
                                      const GammaOptions& opt) {
  validate_k(config.k1, config.k2);
  VolumeValue sum;
  for (double b : config.component_base_lengths()) {
    const VolumeValue v = snowflake_parallel_volume(eps, b * config.base_length, opt);
    sum.area += v.area;
    sum.error += v.error;
  }
  return sum;
}

}  // namespace kochspray
