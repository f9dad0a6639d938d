#pragma once
#include <stdexcept>
#include <string>

namespace sunfact {

// Exit-code mapping in the CLI: ConfigError -> 2, CapError -> 3, InternalError -> 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Projection onto a sector with zero weight (e.g. some f_i = 0 empties it).
struct EmptySectorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sunfact
