#pragma once

// Shared helpers for the unit tests.

#include "polariton/error.hpp"

#include <optional>

namespace testing {

// Error code thrown by f, or nullopt if it returns normally.
template <class F>
std::optional<polariton::Errc> error_code_of(F &&f)
{
    try {
        f();
    } catch (const polariton::Error &e) {
        return e.code();
    }
    return std::nullopt;
}

} // namespace testing
