#pragma once

#include <stdexcept>
#include <string>

namespace rotwalk {

// Exit-code-bearing error categories used across the library and the CLI.

struct InvalidParameterError : std::invalid_argument {
    explicit InvalidParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// The Ostrowski expansion terminated (some beta_n == 0): the cocycle is a
// coboundary. Orbits carry this as a flag; operations that cannot proceed on
// a terminated expansion throw this instead.
struct CoboundaryError : std::domain_error {
    explicit CoboundaryError(const std::string& msg) : std::domain_error(msg) {}
};

struct HorizonError : std::runtime_error {
    explicit HorizonError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rotwalk
