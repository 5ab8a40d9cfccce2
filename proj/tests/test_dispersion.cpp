#include "polariton/dispersion.hpp"

#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace polariton;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

DispersionModel glass()
{
    return DispersionModel::sellmeier({{1.0, 1e-14}}, {1e14, 5e15});
}

} // namespace

TEST_CASE("constant index and vacuum", "[dispersion]")
{
    const auto m = DispersionModel::constant(1.5);
    CHECK(refractive_index(m, 3e14) == 1.5);
    CHECK_THAT(permittivity(m, 3e14), WithinRel(2.25 * constants::eps0, 1e-15));
    CHECK(velocity_ratio_R(m, 3e14) == 1.0);
    CHECK(m.is_dispersionless());

    const auto v = DispersionModel::vacuum();
    CHECK(phase_velocity(v, 1e15) == constants::c);
    CHECK(group_velocity(v, 1e15) == constants::c);
}

TEST_CASE("one-term Sellmeier against high-precision values", "[dispersion]")
{
    // Frozen from a 30-digit evaluation of n^2 = 1 + lambda^2 / (lambda^2 - 1e-14 m^2) at omega = 2e15 rad/s.
    const auto m = glass();
    CHECK_THAT(refractive_index(m, 2e15), WithinRel(1.41823906412898691, 1e-14));
    CHECK_THAT(velocity_ratio_R(m, 2e15), WithinRel(1.00573333891478249, 1e-12));
    CHECK_THAT(group_velocity(m, 2e15), WithinRel(210178560.248841775, 1e-12));
    CHECK_FALSE(m.is_dispersionless());
}

TEST_CASE("permittivity times inverse permittivity is one", "[dispersion]")
{
    const auto m = glass();
    for (double w = 2e14; w < 5e15; w *= 1.3)
        CHECK_THAT(permittivity(m, w) * inverse_permittivity(m, w), WithinAbs(1.0, 4.5e-16));
}

TEST_CASE("four velocity-ratio forms agree at random frequencies", "[dispersion]")
{
    const auto m = glass();
    std::mt19937_64 rng(20261014);
    std::uniform_real_distribution<double> u(1.01e14, 4.99e15);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i)
        worst = std::max(worst, velocity_ratio_forms(m, u(rng)).max_pairwise_relative_spread());
    CHECK(worst < 1e-10);
}

TEST_CASE("inverse group velocity equals dk/domega", "[dispersion]")
{
    const auto m = glass();
    for (double w : {3e14, 1e15, 2.5e15, 4e15}) {
        const double h = 1e-5 * w;
        const double dk = (propagation_constant(m, w + h) - propagation_constant(m, w - h)) / (2 * h);
        CHECK_THAT(1.0 / group_velocity(m, w), WithinRel(dk, 1e-6));
    }
}

TEST_CASE("tabulated model interpolates and tracks its analytic source", "[dispersion]")
{
    const auto ref = glass();
    std::vector<std::pair<double, double>> s;
    for (double w = 2e14; w <= 4.8e15; w += 2e13)
        s.emplace_back(w, refractive_index(ref, w));
    const auto tab = DispersionModel::tabulated(s);
    CHECK_FALSE(tab.is_analytic());
    CHECK_THAT(refractive_index(tab, 2.01e15), WithinRel(refractive_index(ref, 2.01e15), 1e-8));
    CHECK_THAT(velocity_ratio_R(tab, 2.01e15), WithinRel(velocity_ratio_R(ref, 2.01e15), 1e-5));
    CHECK(velocity_ratio_forms(tab, 2.01e15).max_pairwise_relative_spread() < velocity_ratio_tolerance(tab));
}

TEST_CASE("linear model and scaling", "[dispersion]")
{
    const auto lin = DispersionModel::linear(1.5, 1e15, 1e-16, {5e14, 2e15});
    CHECK_THAT(refractive_index(lin, 1.2e15), WithinRel(1.5 + 1e-16 * 2e14, 1e-14));
    CHECK_THAT(velocity_ratio_R(lin, 1.2e15), WithinRel(1.0 + 1.2e15 * 1e-16 / (1.5 + 2e-2), 1e-10));
    const auto sc = glass().scaled(1.1);
    CHECK_THAT(refractive_index(sc, 1e15), WithinRel(1.1 * refractive_index(glass(), 1e15), 1e-15));
}

TEST_CASE("dispersion error contract", "[dispersion]")
{
    const auto m = glass();
    CHECK(testing::error_code_of([&] { (void)refractive_index(m, 6e15); }) == Errc::out_of_window);
    CHECK(testing::error_code_of([] { (void)DispersionModel::constant(-1.0); }) == Errc::non_physical);
    CHECK(testing::error_code_of([] { (void)DispersionModel::tabulated({{1e14, 1.5}}); }) == Errc::invalid_argument);
    CHECK(testing::error_code_of([] { (void)DispersionModel::sellmeier({{1.0, 1e-14}}, {1e14, 3e16}); }) == Errc::non_physical);
    CHECK(testing::error_code_of([&] { (void)d_eta_domega(m, 1e14); }) == Errc::out_of_window);
}
