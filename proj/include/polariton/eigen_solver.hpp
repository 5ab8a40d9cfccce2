#pragma once

// Top-k (algebraically largest) eigenpairs of real symmetric operators.
//
//  * tridiagonal / dense: LAPACK dstevr / dsyevr restricted to the wanted index range;
//  * sparse: shift-invert block Lanczos with full reorthogonalization and explicit restarts.
//    The shift sigma must bound the spectrum from above so (sigma I - A) is positive definite.

#include "polariton/error.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <sstream>
#include <vector>

namespace polariton {

struct Eigenpairs
{
    std::vector<double> values;                // descending
    std::vector<std::vector<double>> vectors;  // unit 2-norm, same order as values
};

struct LanczosOptions
{
    double tolerance = 1e-10;      // relative Ritz residual in the shift-inverted operator
    std::size_t guard_vectors = 2; // extra block columns beyond the requested count
    std::size_t block_steps = 16;  // Krylov blocks per cycle
    std::size_t max_restarts = 40;
    unsigned seed = 20191126u;
};

inline Eigenpairs top_eigenpairs_tridiagonal(std::vector<double> diag, std::vector<double> offdiag, std::size_t k)
{
    const auto n = static_cast<lapack_int>(diag.size());
    if (n == 0 || k == 0)
        fail(Errc::invalid_argument, "empty eigenproblem");
    k = std::min<std::size_t>(k, diag.size());
    offdiag.resize(diag.size(), 0.0);

    const lapack_int il = n - static_cast<lapack_int>(k) + 1;
    lapack_int found = 0;
    std::vector<double> w(diag.size());
    std::vector<double> z(diag.size() * k);
    std::vector<lapack_int> support(2 * k);
    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), offdiag.data(), 0.0, 0.0,
                                           il, n, 0.0, &found, w.data(), z.data(), n, support.data());
    if (info != 0 || found != static_cast<lapack_int>(k)) {
        std::ostringstream os;
        os << "dstevr failed (info = " << info << ", found " << found << " of " << k << ")";
        fail(Errc::solver_failure, os.str());
    }

    Eigenpairs out;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t col = k - 1 - i;  // LAPACK returns ascending order
        out.values.push_back(w[col]);
        out.vectors.emplace_back(z.begin() + static_cast<std::ptrdiff_t>(col * diag.size()),
                                 z.begin() + static_cast<std::ptrdiff_t>((col + 1) * diag.size()));
    }
    return out;
}

inline Eigenpairs top_eigenpairs_dense(Eigen::MatrixXd a, std::size_t k)
{
    const auto n = static_cast<lapack_int>(a.rows());
    if (n == 0 || a.cols() != a.rows())
        fail(Errc::invalid_argument, "dense eigenproblem must be square and non-empty");
    k = std::min<std::size_t>(k, static_cast<std::size_t>(n));

    const lapack_int il = n - static_cast<lapack_int>(k) + 1;
    lapack_int found = 0;
    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) * k);
    std::vector<lapack_int> support(2 * k);
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, il, n, 0.0,
                                           &found, w.data(), z.data(), n, support.data());
    if (info != 0 || found != static_cast<lapack_int>(k))
        fail(Errc::solver_failure, "dsyevr failed");

    Eigenpairs out;
    const auto nn = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t col = k - 1 - i;
        out.values.push_back(w[col]);
        out.vectors.emplace_back(z.begin() + static_cast<std::ptrdiff_t>(col * nn),
                                 z.begin() + static_cast<std::ptrdiff_t>((col + 1) * nn));
    }
    return out;
}

namespace detail {

// Orthogonalize column j of basis against columns [0, j) twice; returns the remaining norm.
inline double orthogonalize_column(Eigen::MatrixXd &basis, Eigen::Index j)
{
    const double before = basis.col(j).norm();
    for (int pass = 0; pass < 2; ++pass) {
        if (j > 0) {
            const Eigen::VectorXd coeff = basis.leftCols(j).transpose() * basis.col(j);
            basis.col(j) -= basis.leftCols(j) * coeff;
        }
    }
    const double after = basis.col(j).norm();
    return before > 0.0 ? after / before : 0.0;
}

} // namespace detail

// Largest k eigenpairs of symmetric A, given sigma > lambda_max(A).
inline Eigenpairs top_eigenpairs_lanczos(const Eigen::SparseMatrix<double> &a, std::size_t k, double sigma,
                                         const LanczosOptions &opt = {})
{
    const Eigen::Index n = a.rows();
    if (n == 0 || a.cols() != n)
        fail(Errc::invalid_argument, "sparse eigenproblem must be square and non-empty");
    k = std::min<std::size_t>(k, static_cast<std::size_t>(n));

    Eigen::SparseMatrix<double> shifted = -a;
    for (Eigen::Index i = 0; i < n; ++i)
        shifted.coeffRef(i, i) += sigma;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(shifted);
    if (factor.info() != Eigen::Success)
        fail(Errc::solver_failure, "factorization of the shifted operator failed");
    if ((factor.vectorD().array() <= 0.0).any())
        fail(Errc::solver_failure, "shift does not bound the spectrum from above");

    const auto block = static_cast<Eigen::Index>(std::min<std::size_t>(k + opt.guard_vectors, n));
    const Eigen::Index max_dim = std::min<Eigen::Index>(n, block * static_cast<Eigen::Index>(opt.block_steps));

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss;
    auto random_column = [&](Eigen::MatrixXd &m, Eigen::Index j) {
        for (Eigen::Index i = 0; i < n; ++i)
            m(i, j) = gauss(rng);
    };

    Eigen::MatrixXd start(n, block);
    for (Eigen::Index j = 0; j < block; ++j)
        random_column(start, j);

    for (std::size_t cycle = 0; cycle <= opt.max_restarts; ++cycle) {
        Eigen::MatrixXd basis(n, max_dim);
        Eigen::MatrixXd image(n, max_dim);
        Eigen::Index dim = 0;

        auto append = [&](const Eigen::VectorXd &v) {
            basis.col(dim) = v;
            double keep = detail::orthogonalize_column(basis, dim);
            int retries = 0;
            while (keep < 1e-8 && retries++ < 3) {
                random_column(basis, dim);
                keep = detail::orthogonalize_column(basis, dim);
            }
            if (keep < 1e-8)
                return false;
            basis.col(dim).normalize();
            ++dim;
            return true;
        };

        for (Eigen::Index j = 0; j < block && dim < max_dim; ++j)
            append(start.col(j));

        Eigen::Index applied = 0;
        while (applied < dim) {
            const Eigen::Index first = applied;
            const Eigen::Index last = dim;
            image.middleCols(first, last - first) = factor.solve(basis.middleCols(first, last - first));
            applied = last;
            for (Eigen::Index j = first; j < last && dim < max_dim; ++j)
                if (!append(image.col(j)))
                    break;
        }

        const Eigen::MatrixXd q = basis.leftCols(dim);
        const Eigen::MatrixXd w = image.leftCols(dim);
        Eigen::MatrixXd t = q.transpose() * w;
        t = 0.5 * (t + t.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(t);
        if (ritz.info() != Eigen::Success)
            fail(Errc::solver_failure, "Rayleigh-Ritz step failed");

        // Eigen sorts ascending; the wanted Ritz values of (sigma - A)^-1 are the largest.
        bool converged = true;
        Eigen::MatrixXd top(n, block);
        std::vector<double> theta;
        for (Eigen::Index i = 0; i < block; ++i) {
            const Eigen::Index col = dim - 1 - i;
            const Eigen::VectorXd s = ritz.eigenvectors().col(col);
            const double th = ritz.eigenvalues()(col);
            const Eigen::VectorXd y = q * s;
            top.col(i) = y;
            if (i < static_cast<Eigen::Index>(k)) {
                const double res = (w * s - th * y).norm();
                theta.push_back(th);
                if (!(th > 0.0) || !(res <= opt.tolerance * th))
                    converged = false;
            }
        }

        if (converged || dim == n) {
            Eigenpairs out;
            for (std::size_t i = 0; i < k; ++i) {
                Eigen::VectorXd y = top.col(static_cast<Eigen::Index>(i)).normalized();
                const double rq = y.dot(a * y);  // Rayleigh quotient on A itself
                out.values.push_back(rq);
                out.vectors.emplace_back(y.data(), y.data() + n);
            }
            // Rayleigh quotients can cross for near-degenerate pairs; keep descending order.
            std::vector<std::size_t> order(k);
            for (std::size_t i = 0; i < k; ++i)
                order[i] = i;
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t i, std::size_t j) { return out.values[i] > out.values[j]; });
            Eigenpairs sorted;
            for (std::size_t i : order) {
                sorted.values.push_back(out.values[i]);
                sorted.vectors.push_back(std::move(out.vectors[i]));
            }
            return sorted;
        }
        start = top;
    }

    std::ostringstream os;
    os << "block Lanczos not converged after " << opt.max_restarts << " restarts";
    fail(Errc::solver_failure, os.str());
}

} // namespace polariton
