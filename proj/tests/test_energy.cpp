#include "polariton/energy.hpp"

#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace polariton;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

DispersionModel glass()
{
    return DispersionModel::sellmeier({{1.0, 1e-14}}, {1e14, 5e15});
}

SpectralDensity gaussian(double w0, double sigma, double peak, int count = 401)
{
    SpectralDensity s;
    for (int i = 0; i < count; ++i) {
        const double t = -5.0 + 10.0 * i / (count - 1);
        s.samples.emplace_back(w0 + t * sigma, peak * std::exp(-0.5 * t * t));
    }
    return s;
}

} // namespace

TEST_CASE("flat spectrum in a constant medium has a closed-form density", "[energy]")
{
    const auto m = DispersionModel::constant(1.5);
    SpectralDensity s;
    s.samples = {{1e15, 2e-20}, {2e15, 2e-20}};
    const EnergyReport r = stationary_energy_density(m, s);
    const double expected = 2e-20 * 2.25 * constants::eps0 * 1e15 / (2.0 * constants::pi);
    CHECK_THAT(r.W_velocity_form, WithinRel(expected, 1e-14));
    CHECK_THAT(r.W_total, WithinRel(expected, 1e-14));
    CHECK_THAT(r.S_z, WithinRel(expected * constants::c / 1.5, 1e-14));
    CHECK(r.W_E == r.W_B);
}

TEST_CASE("Sellmeier Gaussian: the three density forms and the flux identity", "[energy]")
{
    const auto m = glass();
    const auto s = gaussian(2e15, 1e14, 1e-20);
    const EnergyReport r = stationary_energy_density(m, s);
    CHECK(r.split_vs_velocity_form < 1e-12);
    CHECK(r.velocity_vs_eta_form < 1e-12);
    CHECK(r.max_flux_identity_error < 1e-10);
    CHECK_THAT(stationary_energy_density_eta(m, s), WithinRel(r.W_velocity_form, 1e-12));
    CHECK_THAT(poynting_flux(m, s), WithinRel(r.S_z, 1e-14));
    CHECK(r.W_E > r.W_B);  // normal dispersion stores extra electric (polarization) energy
    for (const auto &p : r.per_frequency)
        CHECK_THAT(p.flux, WithinRel(p.density * p.v_g, 1e-10));
}

TEST_CASE("kernels reduce to their diagonal limits", "[energy]")
{
    const auto m = glass();
    const double w = 1.7e15, dw = 1e-5 * w;
    CHECK_THAT(bg_kernel_eps(m, w, w + dw), WithinRel(bg_kernel_eps(m, w, w), 1e-4));
    CHECK_THAT(bg_kernel_eta(m, w, w + dw), WithinRel(bg_kernel_eta(m, w, w), 1e-4));
    const auto c = DispersionModel::constant(2.0);
    CHECK_THAT(bg_kernel_eps(c, w, 2 * w), WithinRel(permittivity(c, w), 1e-15));
    CHECK_THAT(bg_kernel_eta(c, w, 2 * w), WithinRel(inverse_permittivity(c, w), 1e-15));
}

TEST_CASE("photon flux per mode", "[energy]")
{
    // hbar omega c / V for one photon in vacuum at 1e15 rad/s, V = 1e-18 m^3.
    CHECK_THAT(photon_flux_per_mode(1e15, DispersionModel::vacuum(), 1e-18, 1.0), WithinRel(31615267.7155956186, 1e-12));
    const auto m = glass();
    CHECK_THAT(photon_flux_per_mode(2e15, m, 1e-18, 3.0),
               WithinRel(3.0 * constants::hbar * 2e15 * group_velocity(m, 2e15) / 1e-18, 1e-14));
}

TEST_CASE("spectral density validation", "[energy]")
{
    const auto m = glass();
    SpectralDensity one;
    one.samples = {{1e15, 1.0}};
    CHECK(testing::error_code_of([&] { (void)stationary_energy_density(m, one); }) == Errc::invalid_argument);
    SpectralDensity neg;
    neg.samples = {{1e15, 1.0}, {1.1e15, -1.0}};
    CHECK(testing::error_code_of([&] { (void)stationary_energy_density(m, neg); }) == Errc::negative_spectrum);
    SpectralDensity outside;
    outside.samples = {{4.9e15, 1.0}, {5.5e15, 1.0}};
    CHECK(testing::error_code_of([&] { (void)stationary_energy_density(m, outside); }) == Errc::out_of_window);
}
