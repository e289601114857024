#pragma once

#include <cmath>
#include <numbers>

namespace kochspray {

inline const double kSqrt3 = std::sqrt(3.0);
inline const double kLn3 = std::log(3.0);

// Lattice constant: every contraction ratio is an integer power of e^{-a}.
inline const double kLatticeConstant = 0.5 * kLn3;

// Hausdorff (= Minkowski) dimension of the Koch curve, log 4 / log 3.
inline const double kKochDimension = std::log(4.0) / kLn3;

// Area of the filled Koch snowflake with base length 1.
inline const double kSnowflakeArea = 2.0 * kSqrt3 / 5.0;

// Area of the equilateral triangle Gamma (side sqrt(3)/9).
inline const double kGammaArea = kSqrt3 / 108.0;

// Piecewise breakpoints of the inner parallel volume of the unit snowflake.
inline const double kBreakCase1 = 1.0 / 3.0;
inline const double kBreakCase2 = kSqrt3 / 9.0;
inline const double kBreakCase3 = 1.0 / 9.0;

// First positive zero of the Bessel function J_0.
inline constexpr double kBesselJ0FirstZero = 2.404825557695772768621631879;

}  // namespace kochspray
