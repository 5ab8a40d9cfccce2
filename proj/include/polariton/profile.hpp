#pragma once

// Transverse index profiles: a uniform grid of interior sample points (Dirichlet walls one spacing
// beyond the outermost samples) and a dispersion model attached to every point.

#include "polariton/dispersion.hpp"
#include "polariton/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <vector>

namespace polariton {

struct TransverseGrid
{
    std::size_t nx = 0;
    std::size_t ny = 1;  // 1 for one transverse dimension
    double h = 0.0;      // uniform spacing, m
    double x0 = 0.0;     // coordinate of the first interior sample
    double y0 = 0.0;

    int dimension() const noexcept { return ny > 1 ? 2 : 1; }
    std::size_t size() const noexcept { return nx * ny; }
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * nx + i; }
    double x(std::size_t i) const noexcept { return x0 + static_cast<double>(i) * h; }
    double y(std::size_t j) const noexcept { return y0 + static_cast<double>(j) * h; }
    // Quadrature weight of one sample (trapezoid with zero boundary values).
    double cell() const noexcept { return dimension() == 2 ? h * h : h; }
    double width_x() const noexcept { return static_cast<double>(nx + 1) * h; }
    double width_y() const noexcept { return dimension() == 2 ? static_cast<double>(ny + 1) * h : 0.0; }

    bool operator==(const TransverseGrid &o) const noexcept
    {
        return nx == o.nx && ny == o.ny && h == o.h && x0 == o.x0 && y0 == o.y0;
    }
};

struct Region1D
{
    double x_min = 0.0;
    double x_max = 0.0;
    DispersionModel model;
};

struct Region2D
{
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    DispersionModel model;
};

class IndexProfile
{
public:
    static constexpr std::size_t min_points_per_dimension = 64;

    IndexProfile(TransverseGrid grid, std::vector<DispersionModel> models, std::vector<std::uint32_t> region_of)
        : grid_(grid), models_(std::move(models)), region_of_(std::move(region_of))
    {
        if (!(grid_.h > 0.0))
            fail(Errc::invalid_argument, "grid spacing must be positive");
        if (grid_.nx < min_points_per_dimension || (grid_.ny > 1 && grid_.ny < min_points_per_dimension)) {
            std::ostringstream os;
            os << "profile needs at least " << min_points_per_dimension << " interior points per dimension";
            fail(Errc::invalid_argument, os.str());
        }
        if (region_of_.size() != grid_.size())
            fail(Errc::invalid_argument, "region map does not match the grid");
        if (models_.empty())
            fail(Errc::invalid_argument, "profile has no models");
        for (auto r : region_of_)
            if (r >= models_.size())
                fail(Errc::invalid_argument, "region index out of range");

        window_ = models_.front().window();
        for (const auto &m : models_) {
            window_.lo = std::max(window_.lo, m.window().lo);
            window_.hi = std::min(window_.hi, m.window().hi);
        }
        if (!(window_.hi > window_.lo))
            fail(Errc::invalid_argument, "profile models share no common validity window");
    }

    // Walls at +-width/2; `points` counts every grid node including the two walls.
    static IndexProfile uniform_1d(double width, std::size_t points, DispersionModel model)
    {
        return layered_1d(width, points, std::move(model), {});
    }

    // Later regions override earlier ones; points outside every region take the background.
    static IndexProfile layered_1d(double width, std::size_t points, DispersionModel background,
                                   const std::vector<Region1D> &regions)
    {
        if (!(width > 0.0) || points < 3)
            fail(Errc::invalid_argument, "1D profile needs positive width and at least 3 nodes");
        TransverseGrid g;
        g.nx = points - 2;
        g.h = width / static_cast<double>(points - 1);
        g.x0 = -0.5 * width + g.h;
        std::vector<DispersionModel> models{std::move(background)};
        std::vector<std::uint32_t> map(g.size(), 0);
        for (const auto &r : regions) {
            models.push_back(r.model);
            const auto id = static_cast<std::uint32_t>(models.size() - 1);
            for (std::size_t i = 0; i < g.nx; ++i)
                if (g.x(i) >= r.x_min && g.x(i) <= r.x_max)
                    map[i] = id;
        }
        return IndexProfile(g, std::move(models), std::move(map));
    }

    static IndexProfile layered_2d(double width_x, double width_y, std::size_t points_x, std::size_t points_y,
                                   DispersionModel background, const std::vector<Region2D> &regions)
    {
        if (!(width_x > 0.0) || !(width_y > 0.0) || points_x < 3 || points_y < 3)
            fail(Errc::invalid_argument, "2D profile needs positive extents and at least 3 nodes per side");
        TransverseGrid g;
        g.nx = points_x - 2;
        g.ny = points_y - 2;
        g.h = width_x / static_cast<double>(points_x - 1);
        const double hy = width_y / static_cast<double>(points_y - 1);
        if (std::abs(hy - g.h) > 1e-12 * g.h)
            fail(Errc::grid_not_uniform, "2D profile spacing must be equal in x and y");
        g.x0 = -0.5 * width_x + g.h;
        g.y0 = -0.5 * width_y + g.h;
        std::vector<DispersionModel> models{std::move(background)};
        std::vector<std::uint32_t> map(g.size(), 0);
        for (const auto &r : regions) {
            models.push_back(r.model);
            const auto id = static_cast<std::uint32_t>(models.size() - 1);
            for (std::size_t j = 0; j < g.ny; ++j)
                for (std::size_t i = 0; i < g.nx; ++i)
                    if (g.x(i) >= r.x_min && g.x(i) <= r.x_max && g.y(j) >= r.y_min && g.y(j) <= r.y_max)
                        map[g.index(i, j)] = id;
        }
        return IndexProfile(g, std::move(models), std::move(map));
    }

    const TransverseGrid &grid() const noexcept { return grid_; }
    const std::vector<DispersionModel> &models() const noexcept { return models_; }
    const std::vector<std::uint32_t> &region_map() const noexcept { return region_of_; }
    const DispersionModel &model_at(std::size_t p) const { return models_.at(region_of_.at(p)); }
    const FrequencyWindow &window() const noexcept { return window_; }

    bool is_dispersionless() const noexcept
    {
        return std::all_of(models_.begin(), models_.end(), [](const auto &m) { return m.is_dispersionless(); });
    }

    // Evaluates f(model, omega) once per region and scatters it onto the grid.
    template <class F>
    std::vector<double> sample(double omega, F &&f) const
    {
        if (!(omega > 0.0) || !window_.contains(omega)) {
            std::ostringstream os;
            os << "omega = " << omega << " outside the profile's common window";
            fail(Errc::out_of_window, os.str());
        }
        std::vector<double> per_region(models_.size());
        for (std::size_t r = 0; r < models_.size(); ++r)
            per_region[r] = f(models_[r], omega);
        std::vector<double> out(region_of_.size());
        for (std::size_t p = 0; p < out.size(); ++p)
            out[p] = per_region[region_of_[p]];
        return out;
    }

    std::vector<double> index_squared(double omega) const
    {
        return sample(omega, [](const DispersionModel &m, double w) { return m.index_squared(w); });
    }

    double max_index(double omega) const
    {
        double best = 0.0;
        for (const auto &m : models_)
            best = std::max(best, m.index(omega));
        return best;
    }

private:
    TransverseGrid grid_;
    std::vector<DispersionModel> models_;
    std::vector<std::uint32_t> region_of_;
    FrequencyWindow window_;
};

} // namespace polariton
