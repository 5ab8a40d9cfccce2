#include "polariton/slab.hpp"

#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace polariton;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SlabGuide fig_slab() { return SlabGuide(5e-6, DispersionModel::constant(1.5)); }

} // namespace

TEST_CASE("bulk line and guided propagation constants", "[slab]")
{
    const auto g = fig_slab();
    CHECK_THAT(slab_beta(g, 0, 7e14), WithinRel(1.5 * 7e14 / constants::c, 1e-15));
    const double k = 1.5e15 / constants::c;
    for (int m = 1; m <= 4; ++m) {
        const double kx = m * constants::pi / 5e-6;
        CHECK_THAT(slab_beta(g, m, 1e15), WithinRel(std::sqrt(k * k - kx * kx), 1e-14));
    }
}

TEST_CASE("cutoff frequencies", "[slab]")
{
    const auto g = fig_slab();
    // pi c / (1.5 * 5 um), evaluated to 30 digits.
    const double wc1 = 125576771153923.552;
    CHECK_THAT(slab_cutoff(g, 1), WithinRel(wc1, 1e-14));
    CHECK_THAT(slab_cutoff_bisect(g, 1), WithinRel(wc1, 1e-9));
    CHECK_THAT(slab_cutoff_bisect(g, 2), WithinRel(2.0 * wc1, 1e-9));
    for (int m = 1; m <= 4; ++m)
        CHECK_THAT(slab_cutoff_bisect(g, m), WithinRel(m * wc1, 1e-9));
    CHECK_THAT(slab_beta(g, 1, wc1), WithinAbs(0.0, 1e-3));
    CHECK(testing::error_code_of([&] { (void)slab_beta(g, 1, 0.99 * wc1); }) == Errc::below_cutoff);
    CHECK(testing::error_code_of([&] { (void)slab_cutoff(g, 0); }) == Errc::no_cutoff_in_window);
}

TEST_CASE("transverse fields vanish on the barriers", "[slab]")
{
    const auto g = fig_slab();
    for (int m = 1; m <= 5; ++m) {
        CHECK_THAT(slab_mode_field(g, m, 2.5e-6), WithinAbs(0.0, 1e-14));
        CHECK_THAT(slab_mode_field(g, m, -2.5e-6), WithinAbs(0.0, 1e-14));
    }
    CHECK(slab_mode_field(g, 1, 0.0) == 1.0);  // fundamental: cos, maximum on axis
    CHECK_THAT(slab_mode_field(g, 2, 0.0), WithinAbs(0.0, 1e-300));
    CHECK(testing::error_code_of([&] { (void)slab_mode_field(g, 1, 3e-6); }) == Errc::outside_slab);

    // Integral of the field squared over the slab is D/2 (midpoint rule, 20000 cells).
    for (int m = 1; m <= 4; ++m) {
        const int n = 20000;
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = -2.5e-6 + (i + 0.5) * 5e-6 / n;
            s += std::pow(slab_mode_field(g, m, x), 2);
        }
        CHECK_THAT(s * 5e-6 / n, WithinRel(2.5e-6, 1e-8));
    }
}

TEST_CASE("slab velocities", "[slab]")
{
    const auto g = fig_slab();
    double last = constants::c;
    for (int m = 0; m <= 4; ++m) {
        const SlabVelocities v = slab_velocities(g, m, 1e15);
        CHECK_THAT(v.v_g * v.v_p, WithinRel(constants::c * constants::c / 2.25, 1e-12));
        CHECK(v.v_g < last);
        CHECK(v.v_p >= constants::c / 1.5);
        last = v.v_g;
    }
    // Slope of the dispersion curve is the group velocity.
    const double w = 6e14, h = 1e-6 * w;
    const double slope = (slab_beta(g, 2, w + h) - slab_beta(g, 2, w - h)) / (2 * h);
    CHECK_THAT(1.0 / slope, WithinRel(slab_velocities(g, 2, w).v_g, 1e-7));
}

TEST_CASE("wide slab approaches the material velocities", "[slab]")
{
    const auto model = DispersionModel::sellmeier({{1.0, 1e-14}}, {1e14, 5e15});
    const double w = 2e15;
    const double lambda = 2 * constants::pi * constants::c / (refractive_index(model, w) * w);
    const SlabGuide wide(100 * lambda, model);
    const SlabVelocities v = slab_velocities(wide, 1, w);
    const auto [vg, vp] = material_dispersion_velocities(model, w);
    CHECK_THAT(v.v_g, WithinRel(vg, 1e-2));
    CHECK_THAT(v.v_p, WithinRel(vp, 1e-2));
    // With dispersion the slope is still 1/v_g.
    const double h = 1e-6 * w;
    const double slope = (slab_beta(wide, 3, w + h) - slab_beta(wide, 3, w - h)) / (2 * h);
    CHECK_THAT(1.0 / slope, WithinRel(slab_velocities(wide, 3, w).v_g, 1e-7));
}

TEST_CASE("dispersion curves skip sub-cutoff frequencies", "[slab]")
{
    const auto g = fig_slab();
    std::vector<double> grid;
    for (int i = 1; i <= 100; ++i)
        grid.push_back(1e13 * i);
    const auto c2 = dispersion_curve(g, 2, grid);
    REQUIRE_FALSE(c2.samples.empty());
    CHECK(c2.samples.front().first > slab_cutoff(g, 2));
    CHECK(dispersion_curve(g, 0, grid).samples.size() == grid.size());
    for (std::size_t i = 1; i < c2.samples.size(); ++i)
        CHECK(c2.samples[i].second > c2.samples[i - 1].second);
}
