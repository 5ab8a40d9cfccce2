#pragma once

// Scalar material dispersion n(omega) and the frequency-local quantities built on it:
// permittivity, inverse permittivity, phase/group velocity and their ratio R = v_p / v_g.
//
// All frequencies are angular (rad/s) and every model carries an explicit validity window.
// Evaluating outside the window is an error, never an extrapolation.

#include "polariton/constants.hpp"
#include "polariton/error.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace polariton {

struct FrequencyWindow
{
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double omega) const noexcept { return omega >= lo && omega <= hi; }
    bool strictly_contains(double omega) const noexcept { return omega > lo && omega < hi; }
};

struct ConstantIndex
{
    double n = 1.0;
};

struct SellmeierTerm
{
    double b = 0.0;           // dimensionless oscillator strength
    double lambda2_m2 = 0.0;  // resonance wavelength squared
};

// n^2(lambda) = 1 + sum_i B_i lambda^2 / (lambda^2 - lambda_i^2), lambda = 2 pi c / omega.
struct SellmeierIndex
{
    std::vector<SellmeierTerm> terms;
};

// Natural cubic spline through (omega, n) samples.
struct TabulatedIndex
{
    std::vector<std::pair<double, double>> samples;
};

// n(omega) = n0 + slope * (omega - omega0). A first-order local expansion, used to dial the
// dispersion strength at a fixed index value.
struct LinearIndex
{
    double n0 = 1.0;
    double omega0 = 0.0;
    double slope = 0.0;  // s/rad
};

namespace detail {

struct SplineDeleter
{
    void operator()(gsl_spline *s) const noexcept { gsl_spline_free(s); }
};

inline double fd_step(double omega) { return std::max(1e-6 * omega, 1e6); }

} // namespace detail

class DispersionModel
{
public:
    using Variant = std::variant<ConstantIndex, SellmeierIndex, TabulatedIndex, LinearIndex>;

    DispersionModel() : DispersionModel(ConstantIndex{1.0}, FrequencyWindow{}) {}

    static DispersionModel vacuum() { return constant(1.0); }

    static DispersionModel constant(double n, FrequencyWindow window = {})
    {
        if (!(n > 0.0))
            fail(Errc::non_physical, "constant index must be positive");
        return DispersionModel(ConstantIndex{n}, window);
    }

    static DispersionModel sellmeier(std::vector<SellmeierTerm> terms, FrequencyWindow window)
    {
        if (terms.empty())
            fail(Errc::invalid_argument, "Sellmeier model needs at least one term");
        if (!(window.lo > 0.0) || !(window.hi > window.lo) || !std::isfinite(window.hi))
            fail(Errc::invalid_argument, "Sellmeier model needs a finite window with 0 < lo < hi");
        DispersionModel m(SellmeierIndex{std::move(terms)}, window);
        // The window must not contain a resonance and n^2 must stay positive on it.
        for (const auto &t : std::get<SellmeierIndex>(m.model_).terms) {
            if (!(t.lambda2_m2 > 0.0))
                continue;
            const double omega_pole = 2.0 * constants::pi * constants::c / std::sqrt(t.lambda2_m2);
            if (window.contains(omega_pole))
                fail(Errc::non_physical, "Sellmeier resonance inside the validity window");
        }
        for (double w : {window.lo, 0.5 * (window.lo + window.hi), window.hi})
            (void)m.index(w);
        return m;
    }

    static DispersionModel tabulated(std::vector<std::pair<double, double>> samples)
    {
        if (samples.size() < 4)
            fail(Errc::invalid_argument, "tabulated model needs at least 4 samples");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!(samples[i].second > 0.0))
                fail(Errc::non_physical, "tabulated index must be positive");
            if (i > 0 && !(samples[i].first > samples[i - 1].first))
                fail(Errc::invalid_argument, "tabulated samples must be strictly increasing in omega");
        }
        if (!(samples.front().first > 0.0))
            fail(Errc::invalid_argument, "tabulated frequencies must be positive");

        std::vector<double> w, n;
        for (const auto &[om, idx] : samples) {
            w.push_back(om);
            n.push_back(idx);
        }
        gsl_set_error_handler_off();
        std::shared_ptr<gsl_spline> spline(gsl_spline_alloc(gsl_interp_cspline, w.size()),
                                           detail::SplineDeleter{});
        if (!spline || gsl_spline_init(spline.get(), w.data(), n.data(), w.size()) != GSL_SUCCESS)
            fail(Errc::invalid_argument, "could not build spline for tabulated model");

        FrequencyWindow window{samples.front().first, samples.back().first};
        DispersionModel m(TabulatedIndex{std::move(samples)}, window);
        m.spline_ = std::move(spline);
        return m;
    }

    static DispersionModel linear(double n0, double omega0, double slope, FrequencyWindow window)
    {
        if (!(window.lo > 0.0) || !(window.hi > window.lo) || !std::isfinite(window.hi))
            fail(Errc::invalid_argument, "linear model needs a finite window with 0 < lo < hi");
        DispersionModel m(LinearIndex{n0, omega0, slope}, window);
        (void)m.index(window.lo);
        (void)m.index(window.hi);
        return m;
    }

    // Same dispersion shape with n multiplied by factor (index proportional to density).
    DispersionModel scaled(double factor) const
    {
        if (!(factor > 0.0))
            fail(Errc::non_physical, "index scale factor must be positive");
        DispersionModel m = *this;
        m.scale_ *= factor;
        return m;
    }

    const Variant &variant() const noexcept { return model_; }
    const FrequencyWindow &window() const noexcept { return window_; }
    double scale() const noexcept { return scale_; }

    bool is_dispersionless() const noexcept
    {
        if (std::holds_alternative<ConstantIndex>(model_))
            return true;
        if (const auto *lin = std::get_if<LinearIndex>(&model_))
            return lin->slope == 0.0;
        return false;
    }

    // Closed-form derivatives available (everything but tabulated data).
    bool is_analytic() const noexcept { return !std::holds_alternative<TabulatedIndex>(model_); }

    void require_in_window(double omega) const
    {
        if (!(omega > 0.0) || !window_.contains(omega)) {
            std::ostringstream os;
            os << "omega = " << omega << " rad/s outside [" << window_.lo << ", " << window_.hi << "]";
            fail(Errc::out_of_window, os.str());
        }
    }

    double index_squared(double omega) const
    {
        require_in_window(omega);
        const double n2 = scale_ * scale_ * base_index_squared(omega);
        if (!(n2 > 0.0) || !std::isfinite(n2)) {
            std::ostringstream os;
            os << "n^2 = " << n2 << " at omega = " << omega;
            fail(Errc::non_physical, os.str());
        }
        return n2;
    }

    double index(double omega) const
    {
        const double n2 = index_squared(omega);
        if (const auto *c = std::get_if<ConstantIndex>(&model_))
            return scale_ * c->n;
        if (const auto *lin = std::get_if<LinearIndex>(&model_))
            return scale_ * (lin->n0 + lin->slope * (omega - lin->omega0));
        if (std::holds_alternative<TabulatedIndex>(model_))
            return scale_ * gsl_spline_eval(spline_.get(), omega, nullptr);
        return std::sqrt(n2);
    }

    // d(n^2)/d(omega). Closed form for analytic models, central difference for tabulated data.
    double d_index_squared(double omega) const
    {
        if (std::holds_alternative<TabulatedIndex>(model_))
            return central_difference(omega, [this](double w) { return index_squared(w); });
        require_in_window(omega);
        const double s2 = scale_ * scale_;
        return std::visit(
            [&](const auto &m) -> double {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, ConstantIndex>) {
                    return 0.0;
                } else if constexpr (std::is_same_v<T, LinearIndex>) {
                    return s2 * 2.0 * (m.n0 + m.slope * (omega - m.omega0)) * m.slope;
                } else if constexpr (std::is_same_v<T, SellmeierIndex>) {
                    // d(n^2)/dlambda * dlambda/domega with dlambda/domega = -lambda/omega.
                    const double lambda = 2.0 * constants::pi * constants::c / omega;
                    const double l2 = lambda * lambda;
                    double sum = 0.0;
                    for (const auto &t : m.terms) {
                        const double den = l2 - t.lambda2_m2;
                        sum += t.b * 2.0 * l2 * t.lambda2_m2 / (den * den);
                    }
                    return s2 * sum / omega;
                } else {
                    return 0.0;
                }
            },
            model_);
    }

    // Central difference with the model's relative step; the stencil must stay inside the window.
    template <class F>
    double central_difference(double omega, F &&f) const
    {
        const double h = detail::fd_step(omega);
        if (!window_.contains(omega - h) || !window_.contains(omega + h) || !(omega - h > 0.0)) {
            std::ostringstream os;
            os << "difference stencil omega +- " << h << " leaves the window at omega = " << omega;
            fail(Errc::out_of_window, os.str());
        }
        return (f(omega + h) - f(omega - h)) / (2.0 * h);
    }

private:
    DispersionModel(Variant v, FrequencyWindow w) : model_(std::move(v)), window_(w) {}

    double base_index_squared(double omega) const
    {
        return std::visit(
            [&](const auto &m) -> double {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, ConstantIndex>) {
                    return m.n * m.n;
                } else if constexpr (std::is_same_v<T, LinearIndex>) {
                    const double n = m.n0 + m.slope * (omega - m.omega0);
                    return n > 0.0 ? n * n : -1.0;
                } else if constexpr (std::is_same_v<T, SellmeierIndex>) {
                    const double lambda = 2.0 * constants::pi * constants::c / omega;
                    const double l2 = lambda * lambda;
                    double n2 = 1.0;
                    for (const auto &t : m.terms)
                        n2 += t.b * l2 / (l2 - t.lambda2_m2);
                    return n2;
                } else {
                    const double n = gsl_spline_eval(spline_.get(), omega, nullptr);
                    return n > 0.0 ? n * n : -1.0;
                }
            },
            model_);
    }

    Variant model_;
    FrequencyWindow window_;
    double scale_ = 1.0;
    std::shared_ptr<const gsl_spline> spline_;
};

inline double refractive_index(const DispersionModel &model, double omega) { return model.index(omega); }

inline double permittivity(const DispersionModel &model, double omega)
{
    return constants::eps0 * model.index_squared(omega);
}

inline double inverse_permittivity(const DispersionModel &model, double omega)
{
    return 1.0 / permittivity(model, omega);
}

// d(eps)/d(omega), F/(m rad/s).
inline double d_eps_domega(const DispersionModel &model, double omega)
{
    return constants::eps0 * model.d_index_squared(omega);
}

// d(eta)/d(omega). Zero for constant models, chain rule through n^2 for analytic ones.
inline double d_eta_domega(const DispersionModel &model, double omega)
{
    if (!model.window().strictly_contains(omega) || !(omega > 0.0)) {
        std::ostringstream os;
        os << "omega = " << omega << " not strictly inside the window";
        fail(Errc::out_of_window, os.str());
    }
    if (std::holds_alternative<ConstantIndex>(model.variant()))
        return 0.0;
    if (!model.is_analytic())
        return model.central_difference(omega, [&](double w) { return inverse_permittivity(model, w); });
    const double n2 = model.index_squared(omega);
    return -model.d_index_squared(omega) / (constants::eps0 * n2 * n2);
}

// The four algebraically equivalent expressions for R = v_p / v_g.
struct VelocityRatioForms
{
    double from_eta;            // (1/2 eta) (2 eta - omega d eta/d omega)
    double from_inverse_n2;     // 1 - (omega/2) n^2 d(1/n^2)/d omega
    double from_dn;             // 1 + (omega/n) dn/d omega
    double from_d_omega_n;      // (1/n) d(omega n)/d omega

    double max_pairwise_relative_spread() const
    {
        const double f[4] = {from_eta, from_inverse_n2, from_dn, from_d_omega_n};
        double worst = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                worst = std::max(worst, std::abs(f[i] - f[j]) / std::max(std::abs(f[i]), std::abs(f[j])));
        return worst;
    }
};

inline double velocity_ratio_tolerance(const DispersionModel &model)
{
    return model.is_analytic() ? 1e-10 : 1e-5;
}

inline VelocityRatioForms velocity_ratio_forms(const DispersionModel &model, double omega)
{
    if (!model.window().strictly_contains(omega) || !(omega > 0.0)) {
        std::ostringstream os;
        os << "omega = " << omega << " not strictly inside the window";
        fail(Errc::out_of_window, os.str());
    }
    if (std::holds_alternative<ConstantIndex>(model.variant()))
        return {1.0, 1.0, 1.0, 1.0};

    const double n = model.index(omega);
    const double n2 = model.index_squared(omega);
    const double eta = inverse_permittivity(model, omega);

    double deta, dinv_n2, dn, domega_n;
    if (model.is_analytic()) {
        const double dn2 = model.d_index_squared(omega);
        deta = d_eta_domega(model, omega);
        dinv_n2 = -dn2 / (n2 * n2);
        dn = dn2 / (2.0 * n);
        domega_n = n + omega * dn;
    } else {
        // Each form differentiates its own function so a broken derivative shows up as a spread.
        deta = model.central_difference(omega, [&](double w) { return inverse_permittivity(model, w); });
        dinv_n2 = model.central_difference(omega, [&](double w) { return 1.0 / model.index_squared(w); });
        dn = model.central_difference(omega, [&](double w) { return model.index(w); });
        domega_n = model.central_difference(omega, [&](double w) { return w * model.index(w); });
    }

    return {
        (2.0 * eta - omega * deta) / (2.0 * eta),
        1.0 - 0.5 * omega * n2 * dinv_n2,
        1.0 + omega / n * dn,
        domega_n / n,
    };
}

// R(omega) = v_p / v_g. Evaluates all four forms and refuses to answer if they disagree.
inline double velocity_ratio_R(const DispersionModel &model, double omega)
{
    const VelocityRatioForms forms = velocity_ratio_forms(model, omega);
    const double spread = forms.max_pairwise_relative_spread();
    if (!(spread <= velocity_ratio_tolerance(model))) {
        std::ostringstream os;
        os << "velocity-ratio forms disagree by " << spread << " at omega = " << omega;
        fail(Errc::form_mismatch, os.str());
    }
    return forms.from_d_omega_n;
}

inline double phase_velocity(const DispersionModel &model, double omega)
{
    return constants::c / model.index(omega);
}

inline double group_velocity(const DispersionModel &model, double omega)
{
    return phase_velocity(model, omega) / velocity_ratio_R(model, omega);
}

inline double propagation_constant(const DispersionModel &model, double omega)
{
    return omega * model.index(omega) / constants::c;
}

} // namespace polariton
