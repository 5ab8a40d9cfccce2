#include "polariton/coefficients.hpp"
#include "polariton/energy.hpp"

#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace polariton;
using Catch::Matchers::WithinRel;

namespace {

DispersionModel glass() { return DispersionModel::sellmeier({{1.0, 1e-14}}, {1e14, 5e15}); }

} // namespace

TEST_CASE("vacuum coefficients", "[coefficients]")
{
    const auto f = field_coefficients_discrete(1e15, DispersionModel::vacuum(), 1e-18);
    // sqrt(hbar omega / (2 eps0 V)) at omega = 1e15 rad/s, V = 1e-18 m^3, to 30 digits.
    CHECK_THAT(f.c_E, WithinRel(77170.0386262631205, 1e-15));
    CHECK_THAT(f.c_B, WithinRel(f.c_E / constants::c, 1e-15));
    CHECK_THAT(f.c_D, WithinRel(constants::eps0 * f.c_E, 1e-15));
    CHECK(f.labeling == Labeling::discrete);
    CHECK(labeling_name(Labeling::per_omega) == "per_omega");
}

TEST_CASE("displacement and electric coefficients are related by the permittivity", "[coefficients]")
{
    const auto g = glass();
    for (double w : {5e14, 1e15, 2e15, 4e15}) {
        for (const auto &f : {field_coefficients_discrete(w, g, 1e-18), field_coefficients_beta(w, g, 1e-12),
                              field_coefficients_omega(w, g, 1e-12)}) {
            CHECK_THAT(f.c_D, WithinRel(permittivity(g, w) * f.c_E, 1e-12));
            CHECK_THAT(f.c_B, WithinRel(refractive_index(g, w) / constants::c * f.c_E, 1e-14));
        }
        CHECK_THAT(field_coefficients_beta(w, g, 1e-12).c_E / field_coefficients_omega(w, g, 1e-12).c_E,
                   WithinRel(std::sqrt(group_velocity(g, w)), 1e-12));
    }
}

TEST_CASE("per-omega kernel is blind to dn/domega at fixed n", "[coefficients]")
{
    const FrequencyWindow win{5e14, 2e15};
    const auto flat = DispersionModel::linear(1.5, 1e15, 0.0, win);
    const auto steep = DispersionModel::linear(1.5, 1e15, 2e-16, win);
    const auto wf = field_coefficients_omega(1e15, flat, 1e-12), ws = field_coefficients_omega(1e15, steep, 1e-12);
    CHECK(wf.c_E == ws.c_E);
    CHECK(wf.c_D == ws.c_D);
    const auto bf = field_coefficients_beta(1e15, flat, 1e-12), bs = field_coefficients_beta(1e15, steep, 1e-12);
    // v_g changes by the factor 1 / R = 1 / (1 + 0.2 / 1.5), so the per-beta kernel shrinks by sqrt of it.
    CHECK_THAT(bs.c_E / bf.c_E, WithinRel(std::sqrt(1.0 / (1.0 + 0.2 / 1.5)), 1e-10));
}

TEST_CASE("assembled photon flux matches the energy-module value", "[coefficients]")
{
    const double v = 1e-18;
    for (const auto &m : {DispersionModel::vacuum(), DispersionModel::constant(1.5), glass()}) {
        for (double w : {3e14, 1e15, 3e15}) {
            CHECK_THAT(poynting_per_photon_assembled(w, m, v), WithinRel(photon_flux_per_mode(w, m, v, 1.0), 1e-12));
            CHECK_THAT(poynting_per_photon_assembled(w, m, v, 4.0),
                       WithinRel(photon_flux_per_mode(w, m, v, 4.0), 1e-12));
        }
    }
    CHECK(testing::error_code_of([] { (void)field_coefficients_discrete(1e15, DispersionModel::vacuum(), 0.0); }) ==
          Errc::invalid_argument);
}
