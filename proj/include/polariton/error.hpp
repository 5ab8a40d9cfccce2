#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polariton {

enum class Errc {
    out_of_window,
    non_physical,
    form_mismatch,
    below_cutoff,
    no_cutoff_in_window,
    outside_slab,
    solver_failure,
    no_guided_modes,
    no_convergence,
    window_exit,
    negative_spectrum,
    zero_norm,
    grid_mismatch,
    band_mismatch,
    grid_not_uniform,
    grid_too_coarse,
    invalid_argument,
    config_error,
};

constexpr std::string_view errc_name(Errc e) noexcept
{
    switch (e) {
    case Errc::out_of_window: return "OutOfWindow";
    case Errc::non_physical: return "NonPhysical";
    case Errc::form_mismatch: return "FormMismatch";
    case Errc::below_cutoff: return "BelowCutoff";
    case Errc::no_cutoff_in_window: return "NoCutoffInWindow";
    case Errc::outside_slab: return "OutsideSlab";
    case Errc::solver_failure: return "SolverFailure";
    case Errc::no_guided_modes: return "NoGuidedModes";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::window_exit: return "WindowExit";
    case Errc::negative_spectrum: return "NegativeSpectrum";
    case Errc::zero_norm: return "ZeroNorm";
    case Errc::grid_mismatch: return "GridMismatch";
    case Errc::band_mismatch: return "BandMismatch";
    case Errc::grid_not_uniform: return "GridNotUniform";
    case Errc::grid_too_coarse: return "GridTooCoarse";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::config_error: return "ConfigError";
    }
    return "Unknown";
}

// Every failure in the library surfaces as this exception; code() says which contract broke.
class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string &what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string &what) { throw Error(code, what); }

} // namespace polariton
