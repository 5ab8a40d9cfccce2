#pragma once

// Discrete-to-continuum bookkeeping for modes in a periodic box of length L, beta_j = 2 pi j / L.
//
//   Kronecker to Dirac:  sum_j (d beta / 2 pi) * [L delta_jj'] = 1 for every j'  (a_j = b(beta) / sqrt(L))
//   Riemann sums:        sum_j d beta f(beta_j) -> integral f d beta with error O(1/L)
//   omega relabeling:    d beta = d omega / v_g, checked by differentiating the root-solved map
//                        beta -> omega(beta) and comparing with the group velocity.
//
// All quantities are c-numbers; no operator algebra is simulated.

#include "polariton/constants.hpp"
#include "polariton/error.hpp"
#include "polariton/slab.hpp"

#include <boost/math/differentiation/finite_difference.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

namespace polariton {

struct ContinuumReport
{
    double length = 0.0;            // L, m
    double delta_beta = 0.0;        // 2 pi / L, rad/m
    double kronecker_sum = 0.0;     // should be 1
    double kronecker_error = 0.0;   // max over j' of |sum - 1|
    double riemann_sum = 0.0;       // left Riemann sum of the test function
    double riemann_exact = 0.0;     // its integral over [beta_0, beta_last]
    double riemann_error = 0.0;     // |sum - exact| / |exact|
    double jacobian_max_error = 0.0;    // max_j |(d omega / d beta) / v_g - 1|
    double relabeled_sum_error = 0.0;   // uniform-beta sum vs sum of (d beta / d omega) d omega weights
    std::vector<double> omega;      // omega(beta_j)
};

// Spacing check: the grid must be uniform with spacing 2 pi / L.
inline void require_periodic_grid(double length, const std::vector<double> &beta_grid)
{
    if (!(length > 0.0))
        fail(Errc::invalid_argument, "box length must be positive");
    if (beta_grid.size() < 3)
        fail(Errc::invalid_argument, "beta grid needs at least three points");
    const double d = 2.0 * constants::pi / length;
    for (std::size_t j = 1; j < beta_grid.size(); ++j) {
        if (std::abs((beta_grid[j] - beta_grid[j - 1]) - d) > 1e-9 * d) {
            std::ostringstream os;
            os << "beta grid spacing at index " << j << " is not 2 pi / L";
            fail(Errc::grid_not_uniform, os.str());
        }
    }
}

// beta_j = 2 pi j / L for j in [j_first, j_first + count).
inline std::vector<double> periodic_beta_grid(double length, std::int64_t j_first, std::size_t count)
{
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = 2.0 * constants::pi * static_cast<double>(j_first + static_cast<std::int64_t>(i)) / length;
    return g;
}

// Frequency of slab mode m at propagation constant beta, by bracketed root finding on beta_m(omega).
inline double slab_omega_of_beta(const SlabGuide &guide, int m, double beta, double lo, double hi)
{
    auto f = [&](double w) {
        const double k = propagation_constant(guide.model, w);
        const double kx = guide.transverse_wavenumber(m);
        return k * k - kx * kx - beta * beta;
    };
    if (!(f(lo) < 0.0) || !(f(hi) > 0.0)) {
        std::ostringstream os;
        os << "beta = " << beta << " not bracketed by [" << lo << ", " << hi << "]";
        fail(Errc::invalid_argument, os.str());
    }
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(53), iters);
    return 0.5 * (r.first + r.second);
}

// Runs the three bookkeeping checks for mode m of the slab on the given periodic beta grid.
// The test function is f(beta) = exp(-(beta - beta_0) / span), nonzero at both ends so the
// first-order Riemann error is visible.
inline ContinuumReport continuum_commutator_check(double length, const std::vector<double> &beta_grid,
                                                  const SlabGuide &guide, int m)
{
    require_periodic_grid(length, beta_grid);
    ContinuumReport rep;
    rep.length = length;
    rep.delta_beta = 2.0 * constants::pi / length;
    const double db = rep.delta_beta;

    // Discretized 2 pi delta(beta - beta') on the grid is (2 pi / d beta) delta_jj' = L delta_jj'.
    rep.kronecker_error = 0.0;
    for (std::size_t jp = 0; jp < beta_grid.size(); ++jp) {
        double s = 0.0;
        for (std::size_t j = 0; j < beta_grid.size(); ++j)
            s += (db / (2.0 * constants::pi)) * (j == jp ? length : 0.0);
        rep.kronecker_error = std::max(rep.kronecker_error, std::abs(s - 1.0));
        if (jp == 0)
            rep.kronecker_sum = s;
    }

    const double b0 = beta_grid.front();
    const double b1 = beta_grid.back();
    const double span = b1 - b0;
    auto test = [&](double b) { return std::exp(-(b - b0) / span); };
    double riemann = 0.0;
    for (std::size_t j = 0; j + 1 < beta_grid.size(); ++j)
        riemann += db * test(beta_grid[j]);
    rep.riemann_sum = riemann;
    rep.riemann_exact = span * (1.0 - std::exp(-1.0));
    rep.riemann_error = std::abs(riemann - rep.riemann_exact) / rep.riemann_exact;

    // omega(beta): bracket between the cutoff (or 0 for the bulk line) and a frequency where the
    // bulk wavenumber alone exceeds sqrt(beta^2 + k_x^2).
    const double kx = guide.transverse_wavenumber(m);
    const auto &win = guide.model.window();
    auto omega_of = [&](double beta) {
        double lo = win.lo > 0.0 ? win.lo : 1.0;
        if (m > 0 && propagation_constant(guide.model, lo) < kx)
            lo = slab_cutoff(guide, m);
        double hi = std::isfinite(win.hi) ? win.hi : 2.0 * lo;
        const double target = std::sqrt(beta * beta + kx * kx);
        while (propagation_constant(guide.model, hi) <= target) {
            if (std::isfinite(win.hi))
                fail(Errc::out_of_window, "beta grid reaches beyond the model window");
            hi *= 2.0;
        }
        return slab_omega_of_beta(guide, m, beta, lo, hi);
    };

    rep.omega.resize(beta_grid.size());
    double uniform = 0.0, relabeled = 0.0;
    for (std::size_t j = 0; j < beta_grid.size(); ++j) {
        const double beta = beta_grid[j];
        rep.omega[j] = omega_of(beta);
        // Eighth-order difference in a variable scaled to the curvature length of omega(beta).
        const double scale = 0.2 * (kx > 0.0 ? std::min(beta, kx) : beta);
        auto local = [&](double t) { return omega_of(beta + t * scale); };
        const double domega_dbeta =
            boost::math::differentiation::finite_difference_derivative<decltype(local), double, 8>(local, 0.0) / scale;
        const double v_g = slab_velocities(guide, m, rep.omega[j]).v_g;
        rep.jacobian_max_error = std::max(rep.jacobian_max_error, std::abs(domega_dbeta / v_g - 1.0));
        // Same measure written as d omega / v_g with d omega = (d omega / d beta) d beta.
        const double f = test(beta);
        uniform += db * f;
        relabeled += (1.0 / v_g) * (domega_dbeta * db) * f;
    }
    rep.relabeled_sum_error = std::abs(relabeled - uniform) / std::abs(uniform);
    return rep;
}

} // namespace polariton
