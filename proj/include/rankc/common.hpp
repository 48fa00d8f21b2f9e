#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rankc {

// Exit codes shared by the CLI and the error taxonomy below.
enum class ExitStatus : int {
    Success = 0,
    PropertyRefuted = 1,  // a checked property is false (not an error)
    Usage = 2,
    BudgetExceeded = 3,
    MalformedInput = 4,
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated internal invariant; any sighting is a bug, not a user mistake.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace rankc
