#pragma once

// Magnetic mode functions of a TE guided mode by discrete curl on the transverse grid.
//
// The mode is u(x) y-hat exp(i beta z). Then
//     u~ = (c / i omega) curl[eps0 eta u]  =  x-hat (-c beta / omega) f  +  z-hat (-i c / omega) f',
// with f = eps0 eta u, and the inverse relation u = (i c / omega) curl u~ has y-component
//     (i c / omega) (i beta u~_x - d u~_z / dx).

#include "polariton/constants.hpp"
#include "polariton/error.hpp"
#include "polariton/profile.hpp"
#include "polariton/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

namespace polariton {

// dirichlet: the field vanishes one spacing beyond the outermost samples (guided modes).
// open: no boundary information, one-sided differences at the ends (plane waves).
enum class FieldBoundary { dirichlet, open };

struct MagneticMode
{
    double omega = 0.0;
    double beta = 0.0;
    TransverseGrid grid;
    std::vector<std::complex<double>> ux;  // x component
    std::vector<std::complex<double>> uz;  // z component
};

namespace detail {

// Second-order first derivative of samples with spacing h.
template <class T>
std::vector<T> derivative(const std::vector<T> &f, double h, FieldBoundary bc)
{
    const std::size_t n = f.size();
    if (n < 3)
        fail(Errc::invalid_argument, "derivative needs at least three samples");
    std::vector<T> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    if (bc == FieldBoundary::dirichlet) {
        d[0] = f[1] / (2.0 * h);
        d[n - 1] = -f[n - 2] / (2.0 * h);
    } else {
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    }
    return d;
}

inline void require_curl_resolution(const IndexProfile &profile, double omega)
{
    const double lambda = 2.0 * constants::pi * constants::c / (profile.max_index(omega) * omega);
    if (profile.grid().h > lambda / 50.0) {
        std::ostringstream os;
        os << "grid spacing " << profile.grid().h << " m exceeds lambda/50 = " << lambda / 50.0 << " m";
        fail(Errc::grid_too_coarse, os.str());
    }
}

} // namespace detail

inline MagneticMode magnetic_mode(const NormalizedMode &mode, const IndexProfile &profile,
                                  FieldBoundary bc = FieldBoundary::dirichlet)
{
    const TransverseGrid &g = profile.grid();
    if (g.dimension() != 1)
        fail(Errc::invalid_argument, "discrete curl is implemented for one transverse dimension");
    if (!(mode.grid == g))
        fail(Errc::grid_mismatch, "mode was not sampled on this profile's grid");
    detail::require_curl_resolution(profile, mode.omega);

    const std::vector<double> eta = profile.sample(mode.omega, [](const DispersionModel &m, double om) {
        return constants::eps0 * inverse_permittivity(m, om);
    });
    std::vector<double> f(mode.u.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = eta[i] * mode.u[i];
    const std::vector<double> df = detail::derivative(f, g.h, bc);

    MagneticMode b;
    b.omega = mode.omega;
    b.beta = mode.beta;
    b.grid = g;
    b.ux.resize(f.size());
    b.uz.resize(f.size());
    const double k = constants::c / mode.omega;
    for (std::size_t i = 0; i < f.size(); ++i) {
        b.ux[i] = -k * mode.beta * f[i];
        b.uz[i] = std::complex<double>(0.0, -k * df[i]);
    }
    return b;
}

// u = (i c / omega) curl u~, evaluated with one-sided differences at the ends.
inline std::vector<std::complex<double>> electric_from_magnetic(const MagneticMode &b)
{
    const std::vector<std::complex<double>> duz = detail::derivative(b.uz, b.grid.h, FieldBoundary::open);
    const std::complex<double> i(0.0, 1.0);
    std::vector<std::complex<double>> u(b.ux.size());
    for (std::size_t p = 0; p < u.size(); ++p)
        u[p] = i * (constants::c / b.omega) * (i * b.beta * b.ux[p] - duz[p]);
    return u;
}

// max |u_roundtrip - u| / max |u|.
inline double curl_roundtrip_error(const NormalizedMode &mode, const IndexProfile &profile,
                                   FieldBoundary bc = FieldBoundary::dirichlet)
{
    const std::vector<std::complex<double>> back = electric_from_magnetic(magnetic_mode(mode, profile, bc));
    double err = 0.0, peak = 0.0;
    for (std::size_t p = 0; p < back.size(); ++p) {
        err = std::max(err, std::abs(back[p] - mode.u[p]));
        peak = std::max(peak, std::abs(mode.u[p]));
    }
    return err / peak;
}

} // namespace polariton
