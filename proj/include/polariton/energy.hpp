#pragma once

// Energy density and flux of stationary, incoherent light in a transparent dispersive medium.
//
// Spectral integrals carry the 1/2pi of the measure d-bar omega = d omega / 2 pi, and I_A is in
// J s / m^3 so that the integral of I_A eps over d-bar omega is an energy density in J/m^3.
// Quadrature is the trapezoid rule on the spectrum's own grid.

#include "polariton/constants.hpp"
#include "polariton/dispersion.hpp"
#include "polariton/error.hpp"
#include "polariton/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

namespace polariton {

struct SpectralDensity
{
    std::vector<std::pair<double, double>> samples;  // (omega rad/s, I_A J s/m^3), ascending in omega

    void validate() const
    {
        if (samples.size() < 2)
            fail(Errc::invalid_argument, "spectrum needs at least two samples");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!(samples[i].second >= 0.0)) {
                std::ostringstream os;
                os << "I_A = " << samples[i].second << " < 0 at omega = " << samples[i].first;
                fail(Errc::negative_spectrum, os.str());
            }
            if (i > 0 && !(samples[i].first > samples[i - 1].first))
                fail(Errc::invalid_argument, "spectrum frequencies must be strictly increasing");
        }
    }
};

struct SpectralSample
{
    double omega = 0.0;
    double density = 0.0;  // I_A eps R, J/m^3 per unit d-bar omega
    double flux = 0.0;     // I_A eps v_p, W/m^2 per unit d-bar omega
    double v_g = 0.0;
};

struct EnergyReport
{
    double W_E = 0.0;
    double W_B = 0.0;
    double W_total = 0.0;          // W_E + W_B
    double W_velocity_form = 0.0;  // integral of I_A eps v_p / v_g
    double W_eta_form = 0.0;       // inverse-permittivity chain
    double S_z = 0.0;
    std::vector<SpectralSample> per_frequency;

    double split_vs_velocity_form = 0.0;  // relative differences between the three totals
    double velocity_vs_eta_form = 0.0;
    double max_flux_identity_error = 0.0; // max |flux / (density v_g) - 1|
};

// Tolerance for agreement between the equivalent density formulations.
inline double energy_form_tolerance(const DispersionModel &model)
{
    return model.is_analytic() ? 1e-12 : velocity_ratio_tolerance(model);
}

namespace detail {

inline bool near_diagonal(double omega, double omega_p)
{
    return std::abs(omega - omega_p) < 1e-9 * std::max(std::abs(omega), std::abs(omega_p));
}

inline double relative_difference(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

// Trapezoid over d-bar omega of values sampled on the spectrum grid.
inline double integrate_dbar(const SpectralDensity &spec, const std::vector<double> &f)
{
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
        sum += 0.5 * (f[i] + f[i + 1]) * (spec.samples[i + 1].first - spec.samples[i].first);
    return sum / (2.0 * constants::pi);
}

inline void require_support(const DispersionModel &model, const SpectralDensity &spec)
{
    spec.validate();
    for (const auto &[omega, intensity] : spec.samples)
        model.require_in_window(omega);
}

} // namespace detail

// Electric-energy kernel [omega eps(omega) - omega' eps(omega')] / (omega - omega'); on the diagonal
// its limit d(omega eps)/d omega = eps + omega d eps / d omega.
inline double bg_kernel_eps(const DispersionModel &model, double omega, double omega_p)
{
    model.require_in_window(omega);
    model.require_in_window(omega_p);
    if (detail::near_diagonal(omega, omega_p))
        return permittivity(model, omega) + omega * d_eps_domega(model, omega);
    return (omega * permittivity(model, omega) - omega_p * permittivity(model, omega_p)) / (omega - omega_p);
}

// Inverse-permittivity kernel [omega' eta(omega) - omega eta(omega')] / (omega' - omega); on the
// diagonal eta - omega d eta / d omega.
inline double bg_kernel_eta(const DispersionModel &model, double omega, double omega_p)
{
    model.require_in_window(omega);
    model.require_in_window(omega_p);
    if (detail::near_diagonal(omega, omega_p))
        return inverse_permittivity(model, omega) - omega * d_eta_domega(model, omega);
    return (omega_p * inverse_permittivity(model, omega) - omega * inverse_permittivity(model, omega_p))
           / (omega_p - omega);
}

// Ensemble-averaged energy density and flux of stationary light with spectrum I_A.
// Throws FormMismatch if the split (W_E + W_B), velocity and inverse-permittivity totals disagree.
inline EnergyReport stationary_energy_density(const DispersionModel &model, const SpectralDensity &spec)
{
    detail::require_support(model, spec);
    const std::size_t n = spec.samples.size();
    std::vector<double> we(n), wb(n), wv(n), weta(n), s(n);
    std::vector<SpectralSample> per(n);

    parallel_for(n, [&](std::size_t i) {
        const auto [omega, intensity] = spec.samples[i];
        const double eps = permittivity(model, omega);
        const double eta = inverse_permittivity(model, omega);
        const double r = velocity_ratio_R(model, omega);
        const double v_p = phase_velocity(model, omega);
        const double v_g = v_p / r;

        we[i] = 0.5 * intensity * bg_kernel_eps(model, omega, omega);
        // B-part: eps / (c^2 mu0 eps0) with c^2 mu0 eps0 = 1.
        wb[i] = 0.5 * intensity * eps;
        wv[i] = intensity * eps * r;
        weta[i] = 0.5 * intensity * (1.0 / eta + bg_kernel_eta(model, omega, omega) / (eta * eta));
        s[i] = intensity * eps * v_p;
        per[i] = {omega, wv[i], s[i], v_g};
    });

    EnergyReport rep;
    rep.W_E = detail::integrate_dbar(spec, we);
    rep.W_B = detail::integrate_dbar(spec, wb);
    rep.W_total = rep.W_E + rep.W_B;
    rep.W_velocity_form = detail::integrate_dbar(spec, wv);
    rep.W_eta_form = detail::integrate_dbar(spec, weta);
    rep.S_z = detail::integrate_dbar(spec, s);
    rep.per_frequency = std::move(per);

    rep.split_vs_velocity_form = detail::relative_difference(rep.W_total, rep.W_velocity_form);
    rep.velocity_vs_eta_form = detail::relative_difference(rep.W_velocity_form, rep.W_eta_form);
    for (const auto &p : rep.per_frequency)
        if (p.density > 0.0)
            rep.max_flux_identity_error =
                std::max(rep.max_flux_identity_error, std::abs(p.flux / (p.density * p.v_g) - 1.0));

    const double tol = energy_form_tolerance(model);
    if (!(rep.split_vs_velocity_form <= tol) || !(rep.velocity_vs_eta_form <= tol)) {
        std::ostringstream os;
        os << "energy-density forms disagree: split vs velocity " << rep.split_vs_velocity_form
           << ", velocity vs inverse-permittivity " << rep.velocity_vs_eta_form;
        fail(Errc::form_mismatch, os.str());
    }
    return rep;
}

// Total density through the inverse-permittivity chain alone:
// (1/2) I_A [1/eta + (eta - omega d eta / d omega) / eta^2].
inline double stationary_energy_density_eta(const DispersionModel &model, const SpectralDensity &spec)
{
    detail::require_support(model, spec);
    std::vector<double> f(spec.samples.size());
    parallel_for(f.size(), [&](std::size_t i) {
        const auto [omega, intensity] = spec.samples[i];
        const double eta = inverse_permittivity(model, omega);
        f[i] = 0.5 * intensity * (1.0 / eta + bg_kernel_eta(model, omega, omega) / (eta * eta));
    });
    return detail::integrate_dbar(spec, f);
}

// <S_z> = integral of I_A eps v_p over d-bar omega, W/m^2.
inline double poynting_flux(const DispersionModel &model, const SpectralDensity &spec)
{
    detail::require_support(model, spec);
    std::vector<double> f(spec.samples.size());
    parallel_for(f.size(), [&](std::size_t i) {
        const auto [omega, intensity] = spec.samples[i];
        f[i] = intensity * permittivity(model, omega) * phase_velocity(model, omega);
    });
    return detail::integrate_dbar(spec, f);
}

// Flux of n_photons quanta of one plane-wave mode in volume V, vacuum contribution dropped.
inline double photon_flux_per_mode(double omega, const DispersionModel &model, double volume, double n_photons)
{
    if (!(volume > 0.0))
        fail(Errc::invalid_argument, "quantization volume must be positive");
    if (!(n_photons >= 0.0))
        fail(Errc::invalid_argument, "photon number must be non-negative");
    const double v_g = group_velocity(model, omega);
    return n_photons * constants::hbar * omega * v_g / volume;
}

} // namespace polariton
