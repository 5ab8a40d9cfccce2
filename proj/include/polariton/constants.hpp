#pragma once

#include <numbers>

namespace polariton::constants {

inline constexpr double pi = std::numbers::pi;

// CODATA 2018 SI values. eps0 is derived from mu0 and c so c^2 mu0 eps0 = 1 holds to rounding.
inline constexpr double c = 299792458.0;             // m/s
inline constexpr double mu0 = 1.25663706212e-6;      // H/m
inline constexpr double eps0 = 1.0 / (mu0 * c * c);  // F/m
inline constexpr double hbar = 1.054571817e-34;      // J s

} // namespace polariton::constants
