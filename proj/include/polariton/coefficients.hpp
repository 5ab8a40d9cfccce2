#pragma once

// c-number coefficients multiplying the annihilation operator of one plane-wave mode in the
// positive-frequency parts of D, E and B, for three labelings:
//
//   discrete   modes in a box of volume V,            D ~ sqrt(eps0 hbar omega v_g n^3 / 2c) / sqrt(V)
//   per_beta   continuum density in beta, area A,     same with V -> A (operators b(beta))
//   per_omega  continuum density in omega, area A,    D ~ sqrt(eps0 hbar omega n^3 / 2c) / sqrt(A)
//
// E and B follow from E = eta D and B = (n/c) E for a transverse plane wave.

#include "polariton/constants.hpp"
#include "polariton/dispersion.hpp"
#include "polariton/error.hpp"

#include <cmath>
#include <string_view>

namespace polariton {

enum class Labeling { discrete, per_beta, per_omega };

constexpr std::string_view labeling_name(Labeling l) noexcept
{
    switch (l) {
    case Labeling::discrete: return "discrete";
    case Labeling::per_beta: return "per_beta";
    case Labeling::per_omega: return "per_omega";
    }
    return "unknown";
}

struct FieldCoefficients
{
    double omega = 0.0;
    double c_D = 0.0;  // C/m^2 (times m^1/2 or (s/rad)^1/2 per continuum labeling)
    double c_E = 0.0;  // V/m
    double c_B = 0.0;  // T
    Labeling labeling = Labeling::discrete;
    double extent = 0.0;  // V (m^3) for discrete, A (m^2) otherwise
};

namespace detail {

inline FieldCoefficients assemble_coefficients(double omega, const DispersionModel &model, double extent,
                                               Labeling labeling, bool include_group_velocity)
{
    if (!(extent > 0.0))
        fail(Errc::invalid_argument, "quantization volume or area must be positive");
    const double n = refractive_index(model, omega);
    const double velocity = include_group_velocity ? group_velocity(model, omega) : 1.0;
    FieldCoefficients f;
    f.omega = omega;
    f.labeling = labeling;
    f.extent = extent;
    f.c_D = std::sqrt(constants::eps0 * constants::hbar * omega * velocity * n * n * n / (2.0 * constants::c * extent));
    f.c_E = std::sqrt(constants::hbar * omega * velocity / (2.0 * constants::eps0 * n * constants::c * extent));
    f.c_B = n / constants::c * f.c_E;
    return f;
}

} // namespace detail

inline FieldCoefficients field_coefficients_discrete(double omega, const DispersionModel &model, double volume)
{
    return detail::assemble_coefficients(omega, model, volume, Labeling::discrete, true);
}

// Per-beta kernels: the discrete coefficients at V = A L times sqrt(L); no L remains.
inline FieldCoefficients field_coefficients_beta(double omega, const DispersionModel &model, double area)
{
    return detail::assemble_coefficients(omega, model, area, Labeling::per_beta, true);
}

// Per-omega kernels: the per-beta kernels divided by sqrt(v_g); the group velocity drops out.
inline FieldCoefficients field_coefficients_omega(double omega, const DispersionModel &model, double area)
{
    model.require_in_window(omega);
    return detail::assemble_coefficients(omega, model, area, Labeling::per_omega, false);
}

// Time-averaged Poynting flux of one photon in a plane-wave mode, assembled from the four cross
// products E(-) x B(+), B(-) x E(+), E(+) x B(-), B(+) x E(-). The normally ordered pair contributes
// N each, the anti-normally ordered pair N + 1; the vacuum part (N = 0) is subtracted.
inline double poynting_per_photon_assembled(double omega, const DispersionModel &model, double volume,
                                            double n_photons = 1.0)
{
    const FieldCoefficients f = field_coefficients_discrete(omega, model, volume);
    auto four_terms = [&](double occupation) {
        const double term = 0.5 / constants::mu0 * f.c_E * f.c_B;
        return term * occupation + term * occupation + term * (occupation + 1.0) + term * (occupation + 1.0);
    };
    return four_terms(n_photons) - four_terms(0.0);
}

} // namespace polariton
