#pragma once

#include "kochspray/gamma_kernel.hpp"
#include "kochspray/ifs.hpp"

namespace kochspray {

struct VolumeValue {
  double area{0.0};
  double error{0.0};
};

struct UVValues {
  double u{0.0};
  double u_tilde{0.0};
  double v{0.0};
  double u_error{0.0};
  double u_tilde_error{0.0};
  double v_error{0.0};
};

// alpha(eps) = fractional part of -log(eps)/log(3). Arguments within 1e-12
// of an integer are snapped so exact powers of 3 give alpha = 0.
double fractional_alpha(double eps);

// u, u~ and v on [0,1). u is only defined on [0, 1/2) (its square root and
// arcsin leave their domains beyond), so u = NaN for t >= 1/2.
UVValues uv_functions(double t, const GammaOptions& opt = {});

// Which of the five closed-form cases applies to eps (base length 1).
int snowflake_volume_case(double eps);

// b^2 vol(K_{-eps/b}) for the snowflake of base length b.
VolumeValue snowflake_parallel_volume(double eps, double base_length = 1.0,
                                      const GammaOptions& opt = {});

// Sum over the 1 + k1 + k2 generator components.
VolumeValue generator_parallel_volume(const SprayConfig& config, double eps,
                                      const GammaOptions& opt = {});

}  // namespace kochspray
