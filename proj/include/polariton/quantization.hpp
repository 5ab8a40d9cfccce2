#pragma once

// Dispersion-weighted mode normalization and the overlap integrals built on it.
//
// Modes are displacement-field shapes u_j(x) with D_j = i sqrt(eps0 hbar omega_j / 2) u_j; the
// factor i is a phase convention and is applied only where complex amplitudes are formed. For the
// scalar (TE) transverse problem the solver returns the electric profile w, so u is proportional to
// n^2(x, omega_j) w (D = eps E). Transverse integrals are per unit cross-section of the remaining
// coordinates, so in 1D u carries units m^-1/2.

#include "polariton/constants.hpp"
#include "polariton/dispersion.hpp"
#include "polariton/error.hpp"
#include "polariton/fd_modes.hpp"
#include "polariton/profile.hpp"
#include "polariton/slab.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <vector>

namespace polariton {

struct BandSpec
{
    int label = 0;
    double center = 0.0;  // omega-bar, rad/s
    double lo = 0.0;      // omega range of the band, rad/s
    double hi = 0.0;

    bool contains(double omega) const noexcept { return omega >= lo && omega <= hi; }
    bool operator==(const BandSpec &o) const noexcept
    {
        return label == o.label && center == o.center && lo == o.lo && hi == o.hi;
    }
};

inline void validate_bands(const std::vector<BandSpec> &bands)
{
    for (std::size_t i = 0; i < bands.size(); ++i) {
        const auto &b = bands[i];
        if (!(b.lo < b.hi) || !b.contains(b.center))
            fail(Errc::invalid_argument, "band range must be ordered and contain its center");
        for (std::size_t j = 0; j < i; ++j) {
            const auto &o = bands[j];
            if (o.label == b.label)
                fail(Errc::invalid_argument, "band labels must be unique");
            if (b.lo <= o.hi && o.lo <= b.hi) {
                std::ostringstream os;
                os << "bands " << o.label << " and " << b.label << " overlap";
                fail(Errc::invalid_argument, os.str());
            }
        }
    }
}

// rho(x) = eps0 eta(x, omega-bar) R(x, omega-bar), dimensionless.
struct WeightFunction
{
    double center = 0.0;
    TransverseGrid grid;
    std::vector<double> values;
};

inline WeightFunction weight_function(const IndexProfile &profile, double omega_bar)
{
    WeightFunction w;
    w.center = omega_bar;
    w.grid = profile.grid();
    w.values = profile.sample(omega_bar, [](const DispersionModel &m, double om) {
        return constants::eps0 * inverse_permittivity(m, om) * velocity_ratio_R(m, om);
    });
    return w;
}

// The same weight written as eps0 (eta - (omega/2) d eta / d omega).
inline WeightFunction weight_function_eta_form(const IndexProfile &profile, double omega_bar)
{
    WeightFunction w;
    w.center = omega_bar;
    w.grid = profile.grid();
    w.values = profile.sample(omega_bar, [](const DispersionModel &m, double om) {
        return constants::eps0 * (inverse_permittivity(m, om) - 0.5 * om * d_eta_domega(m, om));
    });
    return w;
}

struct NormalizedMode
{
    double omega = 0.0;
    double beta = 0.0;
    std::size_t rank = 0;
    TransverseGrid grid;
    std::vector<double> u;       // normalized displacement shape
    std::vector<double> weight;  // rho used for the normalization
    std::optional<BandSpec> band;
    double M = 0.0;              // normalization constant, fixed to hbar omega
    double norm_residual = 0.0;  // |sum(rho u^2) cell - 1|
};

namespace detail {

inline double weighted_sum(const std::vector<double> &rho, const std::vector<double> &a, const std::vector<double> &b,
                           double cell)
{
    double s = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p)
        s += rho[p] * a[p] * b[p];
    return s * cell;
}

inline NormalizedMode finish_normalization(NormalizedMode m)
{
    const double cell = m.grid.cell();
    const double norm = weighted_sum(m.weight, m.u, m.u, cell);
    if (!(norm > 0.0) || !std::isfinite(norm))
        fail(Errc::zero_norm, "mode has zero or non-finite weighted norm");
    const double scale = 1.0 / std::sqrt(norm);
    for (double &x : m.u)
        x *= scale;
    m.norm_residual = std::abs(weighted_sum(m.weight, m.u, m.u, cell) - 1.0);
    m.M = constants::hbar * m.omega;
    return m;
}

inline double eta_R(const DispersionModel &m, double omega)
{
    return inverse_permittivity(m, omega) * velocity_ratio_R(m, omega);
}

} // namespace detail

// Scales the mode so that the integral of eps0 eta R u^2 is 1. Without a band the weight is taken
// at the mode's own frequency; with a band it is the band weight rho at the band center.
inline NormalizedMode normalize_mode(const DiscreteMode &mode, const IndexProfile &profile,
                                     const std::optional<BandSpec> &band = std::nullopt)
{
    if (!(mode.grid == profile.grid()))
        fail(Errc::grid_mismatch, "mode was not solved on this profile's grid");
    if (band && !band->contains(mode.omega)) {
        std::ostringstream os;
        os << "mode frequency " << mode.omega << " outside band " << band->label;
        fail(Errc::band_mismatch, os.str());
    }
    NormalizedMode out;
    out.omega = mode.omega;
    out.beta = mode.beta;
    out.rank = mode.rank;
    out.grid = mode.grid;
    out.band = band;
    const std::vector<double> n2 = profile.index_squared(mode.omega);
    out.u.resize(mode.field.size());
    for (std::size_t p = 0; p < out.u.size(); ++p)
        out.u[p] = n2[p] * mode.field[p];
    out.weight = weight_function(profile, band ? band->center : mode.omega).values;
    return detail::finish_normalization(std::move(out));
}

// Re-normalizing an already normalized mode is a no-op up to rounding.
inline NormalizedMode normalize_mode(const NormalizedMode &mode)
{
    return detail::finish_normalization(mode);
}

struct SlabNormalization
{
    double amplitude = 0.0;  // A, m^-1/2
    double weight = 0.0;     // rho = eps0 eta R, uniform
};

// Analytic normalization of slab field A cos/sin(k_x x): rho A^2 D / 2 = 1.
inline SlabNormalization normalize_slab_mode(const SlabGuide &guide, int m, double omega)
{
    if (m < 1)
        fail(Errc::invalid_argument, "slab fields start at m = 1");
    SlabNormalization s;
    s.weight = constants::eps0 * detail::eta_R(guide.model, omega);
    s.amplitude = std::sqrt(2.0 / (s.weight * guide.thickness));
    return s;
}

// The normalized slab mode sampled on a 1D profile grid that spans the slab.
inline NormalizedMode sample_slab_mode(const SlabGuide &guide, int m, double omega, const TransverseGrid &grid)
{
    if (grid.dimension() != 1 || std::abs(grid.width_x() - guide.thickness) > 1e-12 * guide.thickness)
        fail(Errc::grid_mismatch, "grid does not span the slab");
    const SlabNormalization s = normalize_slab_mode(guide, m, omega);
    NormalizedMode out;
    out.omega = omega;
    out.beta = slab_beta(guide, m, omega);
    out.rank = static_cast<std::size_t>(m - 1);
    out.grid = grid;
    out.u.resize(grid.nx);
    out.weight.assign(grid.nx, s.weight);
    for (std::size_t i = 0; i < grid.nx; ++i)
        out.u[i] = s.amplitude * slab_mode_field(guide, m, grid.x(i));
    out.M = constants::hbar * omega;
    out.norm_residual = std::abs(detail::weighted_sum(out.weight, out.u, out.u, grid.cell()) - 1.0);
    return out;
}

// Plane-wave amplitude in a homogeneous medium: u = e exp(i k r) / sqrt(eps0 eta R V).
inline double plane_wave_amplitude(const DispersionModel &model, double omega, double volume)
{
    if (!(volume > 0.0))
        fail(Errc::invalid_argument, "quantization volume must be positive");
    return 1.0 / std::sqrt(constants::eps0 * detail::eta_R(model, omega) * volume);
}

// |D_j| = sqrt(eps0 hbar omega_j / 2) u_j (the phase i is implied).
inline std::vector<double> displacement_field(const NormalizedMode &mode)
{
    const double a = std::sqrt(0.5 * constants::eps0 * constants::hbar * mode.omega);
    std::vector<double> d(mode.u.size());
    for (std::size_t p = 0; p < d.size(); ++p)
        d[p] = a * mode.u[p];
    return d;
}

// (omega_l/omega_j) eta(omega_j) + [omega_j eta(omega_l) - omega_l eta(omega_j)] / (omega_j - omega_l),
// with the coincident-frequency limit 2 eta R.
inline double bracket_kernel(const DispersionModel &model, double omega_j, double omega_l)
{
    const double eta_j = inverse_permittivity(model, omega_j);
    if (std::abs(omega_j - omega_l) < 1e-9 * std::max(omega_j, omega_l))
        return 2.0 * eta_j - omega_j * d_eta_domega(model, omega_j);
    const double eta_l = inverse_permittivity(model, omega_l);
    return (omega_l / omega_j) * eta_j + (omega_j * eta_l - omega_l * eta_j) / (omega_j - omega_l);
}

struct BracketResult
{
    double value = 0.0;     // integral of D_l D_j K(x), J/m^(3-d) (d = transverse dimension)
    double relative = 0.0;  // |value| / sqrt(diag_j diag_l)
    double diag_j = 0.0;    // the same integral with l = j (equals M_j for a normalized mode)
    double diag_l = 0.0;
};

namespace detail {

inline double bracket_integral(const NormalizedMode &a, const NormalizedMode &b, const IndexProfile &profile)
{
    const std::vector<double> k = profile.sample(a.omega, [&](const DispersionModel &m, double om) {
        return bracket_kernel(m, om, b.omega);
    });
    return weighted_sum(k, displacement_field(b), displacement_field(a), a.grid.cell());
}

} // namespace detail

// The dispersive quasi-orthogonality integral between modes j and l; zero for distinct exact
// eigenmodes of the same structure.
inline BracketResult nonorthogonality_bracket(const NormalizedMode &mode_j, const NormalizedMode &mode_l,
                                              const IndexProfile &profile)
{
    if (!(mode_j.grid == mode_l.grid) || !(mode_j.grid == profile.grid()))
        fail(Errc::grid_mismatch, "modes and profile must share one grid");
    BracketResult r;
    r.value = detail::bracket_integral(mode_j, mode_l, profile);
    r.diag_j = detail::bracket_integral(mode_j, mode_j, profile);
    r.diag_l = detail::bracket_integral(mode_l, mode_l, profile);
    r.relative = std::abs(r.value) / std::sqrt(std::abs(r.diag_j * r.diag_l));
    return r;
}

// Integral of rho u_l u_j with the shared band weight.
inline double plain_weighted_overlap(const NormalizedMode &mode_j, const NormalizedMode &mode_l,
                                     const IndexProfile &profile)
{
    if (!mode_j.band || !mode_l.band || !(*mode_j.band == *mode_l.band))
        fail(Errc::band_mismatch, "overlap requires both modes normalized in the same band");
    if (!(mode_j.grid == mode_l.grid) || !(mode_j.grid == profile.grid()))
        fail(Errc::grid_mismatch, "modes and profile must share one grid");
    const WeightFunction rho = weight_function(profile, mode_j.band->center);
    return detail::weighted_sum(rho.values, mode_l.u, mode_j.u, profile.grid().cell());
}

// D(x, t) = sum_j alpha_j exp(-i omega_j t) D_j(x).
inline std::vector<std::complex<double>> superpose(const std::vector<NormalizedMode> &modes,
                                                   const std::vector<std::complex<double>> &alpha, double t)
{
    if (modes.empty() || modes.size() != alpha.size())
        fail(Errc::invalid_argument, "need one amplitude per mode");
    const std::complex<double> i(0.0, 1.0);
    std::vector<std::complex<double>> d(modes.front().u.size(), 0.0);
    for (std::size_t j = 0; j < modes.size(); ++j) {
        if (!(modes[j].grid == modes.front().grid))
            fail(Errc::grid_mismatch, "modes must share one grid");
        const std::vector<double> dj = displacement_field(modes[j]);
        const std::complex<double> a = alpha[j] * std::exp(-i * modes[j].omega * t) * i;
        for (std::size_t p = 0; p < d.size(); ++p)
            d[p] += a * dj[p];
    }
    return d;
}

// (2 / hbar omega_l) integral of eta R D_l* D, using the weight mode_l was normalized with.
// Recovers alpha_l exp(-i omega_l t) up to the residual nonorthogonality.
inline std::complex<double> approx_project(const std::vector<std::complex<double>> &snapshot,
                                           const NormalizedMode &mode_l)
{
    if (snapshot.size() != mode_l.u.size())
        fail(Errc::grid_mismatch, "snapshot and mode sizes differ");
    const std::vector<double> dl = displacement_field(mode_l);
    std::complex<double> s = 0.0;
    for (std::size_t p = 0; p < dl.size(); ++p)
        s += (mode_l.weight[p] / constants::eps0) * dl[p] * snapshot[p];
    s *= mode_l.grid.cell();
    // D_l* carries the conjugated phase -i.
    return std::complex<double>(0.0, -1.0) * s * (2.0 / (constants::hbar * mode_l.omega));
}

// Classical mode amplitude with quadratures alpha = (Q + iP) / sqrt(2 hbar).
struct ModeAmplitude
{
    double Q = 0.0;
    double P = 0.0;

    static ModeAmplitude from_alpha(std::complex<double> alpha)
    {
        const double s = std::sqrt(2.0 * constants::hbar);
        return {s * alpha.real(), s * alpha.imag()};
    }
    std::complex<double> alpha() const { return std::complex<double>(Q, P) / std::sqrt(2.0 * constants::hbar); }
    // hbar omega |alpha|^2 = omega (Q^2 + P^2) / 2.
    double energy(double omega) const { return 0.5 * omega * (Q * Q + P * P); }
};

struct EnergyBookkeeping
{
    double hamiltonian = 0.0;   // sum_j hbar omega_j |alpha_j|^2
    double diagonal = 0.0;      // diagonal of the field-energy double sum, by grid quadrature
    double off_diagonal = 0.0;  // magnitude of the summed off-diagonal terms
};

// Field energy of sum_j alpha_j D_j at time t split into mode-diagonal and cross terms. Each (j, l)
// term is (1/2) alpha_j alpha_l* exp(-i(omega_j - omega_l) t) times the bracket integral, with the
// magnetic part eliminated through the mode equations. Negative-frequency partners double the
// positive-frequency sum.
inline EnergyBookkeeping mode_energy_bookkeeping(const std::vector<NormalizedMode> &modes,
                                                 const std::vector<std::complex<double>> &alpha,
                                                 const IndexProfile &profile, double t = 0.0)
{
    if (modes.size() != alpha.size())
        fail(Errc::invalid_argument, "need one amplitude per mode");
    EnergyBookkeeping e;
    std::complex<double> cross = 0.0;
    const std::complex<double> i(0.0, 1.0);
    for (std::size_t j = 0; j < modes.size(); ++j) {
        e.hamiltonian += constants::hbar * modes[j].omega * std::norm(alpha[j]);
        for (std::size_t l = 0; l < modes.size(); ++l) {
            const double integral = detail::bracket_integral(modes[j], modes[l], profile);
            const std::complex<double> term =
                alpha[j] * std::conj(alpha[l]) * std::exp(-i * (modes[j].omega - modes[l].omega) * t) * integral;
            if (j == l)
                e.diagonal += term.real();
            else
                cross += term;
        }
    }
    e.off_diagonal = std::abs(cross);
    return e;
}

} // namespace polariton
