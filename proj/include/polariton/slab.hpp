#pragma once

// Infinite-barrier planar slab of thickness D: closed-form propagation constants, cutoffs,
// transverse fields and zigzag-ray velocities.
//
// Transverse index m uses k_x = m pi / D. m = 0 is the bulk reference line beta = k(omega);
// guided fields start at m = 1. Odd m are cosines and even m are sines, which is the assignment
// that vanishes at x = +-D/2.

#include "polariton/constants.hpp"
#include "polariton/dispersion.hpp"
#include "polariton/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

namespace polariton {

struct SlabGuide
{
    double thickness = 0.0;  // D, m
    DispersionModel model;

    SlabGuide() = default;
    SlabGuide(double d, DispersionModel m) : thickness(d), model(std::move(m))
    {
        if (!(thickness > 0.0))
            fail(Errc::invalid_argument, "slab thickness must be positive");
    }

    double transverse_wavenumber(int m) const { return static_cast<double>(m) * constants::pi / thickness; }
};

enum class Parity { even, odd };

struct SlabMode
{
    int m = 0;
    double k_x = 0.0;    // rad/m
    Parity parity = Parity::even;
    double theta = 0.0;  // zigzag angle, rad
    double kappa = 0.0;  // bulk wavenumber k(omega), rad/m
    double beta = 0.0;   // rad/m
};

struct SlabVelocities
{
    double v_g = 0.0;
    double v_p = 0.0;
    double theta = 0.0;
};

struct DispersionCurve
{
    int m = 0;
    std::vector<std::pair<double, double>> samples;  // (omega, beta)
};

namespace detail {

inline void require_mode_index(int m)
{
    if (m < 0)
        fail(Errc::invalid_argument, "transverse mode index must be non-negative");
}

// k^2 - k_x^2 for mode m at omega.
inline double slab_radicand(const SlabGuide &g, int m, double omega)
{
    const double k = propagation_constant(g.model, omega);
    const double kx = g.transverse_wavenumber(m);
    return k * k - kx * kx;
}

} // namespace detail

inline double slab_beta(const SlabGuide &guide, int m, double omega)
{
    detail::require_mode_index(m);
    const double k = propagation_constant(guide.model, omega);
    if (m == 0)
        return k;
    const double kx = guide.transverse_wavenumber(m);
    const double radicand = k * k - kx * kx;
    // Exactly at cutoff the radicand is zero up to rounding of k; report beta = 0 there.
    if (std::abs(radicand) <= 1e-12 * kx * kx)
        return 0.0;
    if (radicand < 0.0) {
        std::ostringstream os;
        os << "mode " << m << " below cutoff at omega = " << omega;
        fail(Errc::below_cutoff, os.str());
    }
    return std::sqrt(radicand);
}

inline SlabMode slab_mode(const SlabGuide &guide, int m, double omega)
{
    SlabMode mode;
    mode.m = m;
    mode.beta = slab_beta(guide, m, omega);
    mode.k_x = guide.transverse_wavenumber(m);
    mode.parity = (m % 2 == 1) ? Parity::even : Parity::odd;
    mode.kappa = propagation_constant(guide.model, omega);
    mode.theta = std::acos(std::clamp(mode.beta / mode.kappa, -1.0, 1.0));
    return mode;
}

// Cutoff by bisection on k(omega) - k_x over [lo, hi], which must bracket the sign change.
inline double slab_cutoff_bisect(const SlabGuide &guide, int m, double lo, double hi)
{
    auto f = [&](double w) {
        return propagation_constant(guide.model, w) - guide.transverse_wavenumber(m);
    };
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo > 0.0 || f_hi < 0.0) {
        std::ostringstream os;
        os << "mode " << m << " has no cutoff inside [" << lo << ", " << hi << "]";
        fail(Errc::no_cutoff_in_window, os.str());
    }
    const auto r = boost::math::tools::bisect(f, lo, hi, boost::math::tools::eps_tolerance<double>(52));
    return 0.5 * (r.first + r.second);
}

// Bisection over the model window; unbounded windows are bracketed by doubling.
inline double slab_cutoff_bisect(const SlabGuide &guide, int m)
{
    detail::require_mode_index(m);
    if (m == 0)
        fail(Errc::no_cutoff_in_window, "m = 0 is the bulk line and has no cutoff");
    const auto &win = guide.model.window();
    double lo = win.lo > 0.0 ? win.lo : 1.0;
    double hi = win.hi;
    if (!std::isfinite(hi)) {
        hi = 2.0 * lo;
        while (propagation_constant(guide.model, hi) < guide.transverse_wavenumber(m)) {
            lo = hi;
            hi *= 2.0;
            if (!std::isfinite(hi))
                fail(Errc::no_cutoff_in_window, "could not bracket the cutoff");
        }
    }
    return slab_cutoff_bisect(guide, m, lo, hi);
}

// Smallest omega with beta_m(omega) = 0.
inline double slab_cutoff(const SlabGuide &guide, int m)
{
    detail::require_mode_index(m);
    if (m == 0)
        fail(Errc::no_cutoff_in_window, "m = 0 is the bulk line and has no cutoff");
    if (const auto *c = std::get_if<ConstantIndex>(&guide.model.variant())) {
        const double n = c->n * guide.model.scale();
        const double omega_c = m * constants::pi * constants::c / (n * guide.thickness);
        if (!guide.model.window().contains(omega_c))
            fail(Errc::no_cutoff_in_window, "closed-form cutoff lies outside the model window");
        return omega_c;
    }
    return slab_cutoff_bisect(guide, m);
}

// Transverse field with unit amplitude; the quantization code fixes the normalization.
inline double slab_mode_field(const SlabGuide &guide, int m, double x)
{
    detail::require_mode_index(m);
    if (m == 0)
        fail(Errc::invalid_argument, "m = 0 is the bulk reference line and carries no transverse field");
    if (std::abs(x) > 0.5 * guide.thickness * (1.0 + 1e-15))
        fail(Errc::outside_slab, "x outside the slab");
    const double arg = guide.transverse_wavenumber(m) * x;
    return (m % 2 == 1) ? std::cos(arg) : std::sin(arg);
}

// v_g = (c/n) cos(theta) and v_p = c / (n cos(theta)) for band-constant n. With material dispersion
// the same zigzag factor multiplies the bulk velocities, v_g = v_g,bulk cos(theta), v_p = omega/beta.
inline SlabVelocities slab_velocities(const SlabGuide &guide, int m, double omega)
{
    const double beta = slab_beta(guide, m, omega);
    if (!(beta > 0.0)) {
        std::ostringstream os;
        os << "mode " << m << " carries no energy at cutoff omega = " << omega;
        fail(Errc::below_cutoff, os.str());
    }
    SlabVelocities v;
    const double k = propagation_constant(guide.model, omega);
    const double cos_theta = (m == 0) ? 1.0 : beta / k;
    v.theta = (m == 0) ? 0.0 : std::acos(std::min(cos_theta, 1.0));
    v.v_g = group_velocity(guide.model, omega) * cos_theta;
    v.v_p = phase_velocity(guide.model, omega) / cos_theta;
    return v;
}

// Wide-guide limit: bulk material velocities.
inline std::pair<double, double> material_dispersion_velocities(const DispersionModel &model, double omega)
{
    return {group_velocity(model, omega), phase_velocity(model, omega)};
}

// Samples (omega, beta_m) on the grid; frequencies below cutoff or outside the window are omitted.
inline DispersionCurve dispersion_curve(const SlabGuide &guide, int m, const std::vector<double> &omega_grid)
{
    detail::require_mode_index(m);
    DispersionCurve curve;
    curve.m = m;
    double previous = -1.0;
    for (double omega : omega_grid) {
        if (!(omega > previous))
            fail(Errc::invalid_argument, "frequency grid must be ascending");
        previous = omega;
        if (!(omega > 0.0) || !guide.model.window().contains(omega))
            continue;
        if (m > 0 && detail::slab_radicand(guide, m, omega) < -1e-12 * std::pow(guide.transverse_wavenumber(m), 2))
            continue;
        curve.samples.emplace_back(omega, slab_beta(guide, m, omega));
    }
    return curve;
}

} // namespace polariton
