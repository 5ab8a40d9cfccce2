#pragma once

// Scalar transverse modes of a structured guide by second-order finite differences:
//
//     lap_h w + omega^2 n^2(x, omega) / c^2 w = beta^2 w,   w = 0 on the walls,
//
// and the self-consistent frequency omega_m(beta) when n depends on omega.

#include "polariton/constants.hpp"
#include "polariton/eigen_solver.hpp"
#include "polariton/error.hpp"
#include "polariton/profile.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

namespace polariton {

struct DiscreteMode
{
    std::size_t rank = 0;     // 0 = largest beta^2
    double omega = 0.0;       // rad/s
    double beta_squared = 0.0;
    double beta = 0.0;        // sqrt(beta^2) when guided, else 0
    bool guided = false;
    std::vector<double> field;  // sum(field^2) * cell = 1, first significant sample positive
    double residual = 0.0;      // ||(A - beta^2) w|| / (k_max^2 ||w||)
    TransverseGrid grid;
};

struct FdOptions
{
    std::size_t dense_limit = 2000;  // direct LAPACK solve up to this many unknowns
    LanczosOptions lanczos;
};

namespace detail {

inline std::vector<double> potential(const IndexProfile &profile, double omega)
{
    std::vector<double> v = profile.index_squared(omega);
    const double scale = omega * omega / (constants::c * constants::c);
    for (double &x : v)
        x *= scale;
    return v;
}

inline Eigen::SparseMatrix<double> helmholtz_operator(const TransverseGrid &g, const std::vector<double> &k2)
{
    const double inv_h2 = 1.0 / (g.h * g.h);
    const auto n = static_cast<Eigen::Index>(g.size());
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(g.size() * 5);
    const bool two_d = g.dimension() == 2;
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            const auto p = static_cast<Eigen::Index>(g.index(i, j));
            const double diag = (two_d ? -4.0 : -2.0) * inv_h2 + k2[static_cast<std::size_t>(p)];
            t.emplace_back(p, p, diag);
            if (i > 0)
                t.emplace_back(p, p - 1, inv_h2);
            if (i + 1 < g.nx)
                t.emplace_back(p, p + 1, inv_h2);
            if (two_d && j > 0)
                t.emplace_back(p, p - static_cast<Eigen::Index>(g.nx), inv_h2);
            if (two_d && j + 1 < g.ny)
                t.emplace_back(p, p + static_cast<Eigen::Index>(g.nx), inv_h2);
        }
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

inline void fix_sign(std::vector<double> &w)
{
    double peak = 0.0;
    for (double x : w)
        peak = std::max(peak, std::abs(x));
    for (double x : w) {
        if (std::abs(x) > 1e-6 * peak) {
            if (x < 0.0)
                for (double &y : w)
                    y = -y;
            return;
        }
    }
}

} // namespace detail

inline double discrete_residual(const Eigen::SparseMatrix<double> &a, const std::vector<double> &w, double lambda,
                                double scale)
{
    const Eigen::Map<const Eigen::VectorXd> v(w.data(), static_cast<Eigen::Index>(w.size()));
    return (a * v - lambda * v).norm() / (scale * v.norm());
}

// The `count` largest-beta^2 modes at fixed omega, orthonormal in the plain L2 sense.
inline std::vector<DiscreteMode> fd_transverse_modes(const IndexProfile &profile, double omega, std::size_t count,
                                                     const FdOptions &opt = {})
{
    if (count == 0)
        fail(Errc::invalid_argument, "mode count must be at least 1");
    const TransverseGrid &g = profile.grid();
    if (count > g.size())
        fail(Errc::invalid_argument, "more modes requested than grid unknowns");

    const std::vector<double> k2 = detail::potential(profile, omega);
    const double k2_max = *std::max_element(k2.begin(), k2.end());
    const Eigen::SparseMatrix<double> a = detail::helmholtz_operator(g, k2);

    Eigenpairs pairs;
    if (g.size() <= opt.dense_limit) {
        if (g.dimension() == 1) {
            const double inv_h2 = 1.0 / (g.h * g.h);
            std::vector<double> diag(g.size()), off(g.size(), inv_h2);
            for (std::size_t i = 0; i < g.size(); ++i)
                diag[i] = -2.0 * inv_h2 + k2[i];
            pairs = top_eigenpairs_tridiagonal(std::move(diag), std::move(off), count);
        } else {
            pairs = top_eigenpairs_dense(Eigen::MatrixXd(a), count);
        }
    } else {
        // lambda_max(A) < max k^2 because the Dirichlet Laplacian is negative definite.
        pairs = top_eigenpairs_lanczos(a, count, k2_max, opt.lanczos);
    }

    std::vector<DiscreteMode> modes;
    const double norm = 1.0 / std::sqrt(g.cell());
    for (std::size_t r = 0; r < count; ++r) {
        DiscreteMode m;
        m.rank = r;
        m.omega = omega;
        m.grid = g;
        m.beta_squared = pairs.values[r];
        m.guided = m.beta_squared > 0.0;
        m.beta = m.guided ? std::sqrt(m.beta_squared) : 0.0;
        m.field = std::move(pairs.vectors[r]);
        // Scaled by the larger of k^2 and |beta^2| so deeply evanescent ranks are judged on their own magnitude.
        m.residual = discrete_residual(a, m.field, m.beta_squared, std::max(k2_max, std::abs(m.beta_squared)));
        if (!(m.residual < 1e-8)) {
            std::ostringstream os;
            os << "mode " << r << " residual " << m.residual << " exceeds 1e-8";
            fail(Errc::solver_failure, os.str());
        }
        for (double &x : m.field)
            x *= norm;
        detail::fix_sign(m.field);
        modes.push_back(std::move(m));
    }
    if (std::none_of(modes.begin(), modes.end(), [](const DiscreteMode &m) { return m.guided; }))
        fail(Errc::no_guided_modes, "no mode with beta^2 > 0 at this frequency");
    return modes;
}

// Interior sign changes of a 1D field; samples below tol * max|w| are skipped.
inline std::size_t sign_changes(const std::vector<double> &w, double tol = 1e-9)
{
    double peak = 0.0;
    for (double x : w)
        peak = std::max(peak, std::abs(x));
    std::size_t changes = 0;
    int last = 0;
    for (double x : w) {
        if (std::abs(x) <= tol * peak)
            continue;
        const int s = x > 0.0 ? 1 : -1;
        if (last != 0 && s != last)
            ++changes;
        last = s;
    }
    return changes;
}

struct SecantResult
{
    double omega = 0.0;
    std::size_t iterations = 0;
};

// Secant iteration in s = omega^2 for g(omega) = 0. The first step uses the supplied slope dg/ds.
// g is exactly linear in omega^2 for a dispersionless uniform medium, so that case lands in one step.
template <class G>
SecantResult secant_squared_frequency(G &&g, double omega0, double slope0, const FrequencyWindow &window,
                                      double rel_tol = 1e-10, std::size_t max_iterations = 100)
{
    auto check = [&](double omega) {
        if (!(omega > 0.0) || !std::isfinite(omega) || !window.contains(omega)) {
            std::ostringstream os;
            os << "self-consistent iteration left the window at omega = " << omega;
            fail(Errc::window_exit, os.str());
        }
    };
    check(omega0);
    double s0 = omega0 * omega0;
    double g0 = g(omega0);
    if (!(slope0 != 0.0) || !std::isfinite(slope0))
        fail(Errc::no_convergence, "initial slope is zero or not finite");
    double s1 = s0 - g0 / slope0;

    for (std::size_t it = 1; it <= max_iterations; ++it) {
        if (!(s1 > 0.0))
            fail(Errc::window_exit, "self-consistent iteration produced omega^2 <= 0");
        const double omega1 = std::sqrt(s1);
        check(omega1);
        const double g1 = g(omega1);
        const double omega_prev = std::sqrt(s0);
        if (std::abs(omega1 - omega_prev) < rel_tol * omega_prev)
            return {omega1, it};
        const double denom = g1 - g0;
        if (!(denom != 0.0) || !std::isfinite(denom)) {
            std::ostringstream os;
            os << "secant step undefined (flat residual) at iteration " << it;
            fail(Errc::no_convergence, os.str());
        }
        const double s2 = s1 - g1 * (s1 - s0) / denom;
        s0 = s1;
        g0 = g1;
        s1 = s2;
    }
    std::ostringstream os;
    os << "no convergence after " << max_iterations << " iterations";
    fail(Errc::no_convergence, os.str());
}

struct SelfConsistentMode
{
    double omega = 0.0;
    DiscreteMode mode;
    std::size_t iterations = 0;
};

// Frequency omega at which the rank-m mode has propagation constant beta, starting from omega0.
inline SelfConsistentMode self_consistent_omega(const IndexProfile &profile, double beta, std::size_t rank,
                                                double omega0, const FdOptions &opt = {})
{
    if (!(beta > 0.0))
        fail(Errc::invalid_argument, "target beta must be positive");
    DiscreteMode last;
    auto solve = [&](double omega) {
        auto modes = fd_transverse_modes(profile, omega, rank + 1, opt);
        last = std::move(modes[rank]);
        return last.beta_squared - beta * beta;
    };

    if (!(omega0 > 0.0) || !profile.window().contains(omega0))
        fail(Errc::window_exit, "initial guess outside the profile window");
    (void)solve(omega0);
    // d(beta^2)/d(omega^2) with the index frozen: sum n^2 w^2 cell / c^2 (w is L2-normalized).
    const std::vector<double> n2 = profile.index_squared(omega0);
    double slope = 0.0;
    for (std::size_t p = 0; p < n2.size(); ++p)
        slope += n2[p] * last.field[p] * last.field[p];
    slope *= profile.grid().cell() / (constants::c * constants::c);

    const SecantResult r = secant_squared_frequency(solve, omega0, slope, profile.window());
    if (last.omega != r.omega)
        (void)solve(r.omega);
    return {r.omega, std::move(last), r.iterations};
}

} // namespace polariton
