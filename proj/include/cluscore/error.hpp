#pragma once

#include <stdexcept>
#include <string>

namespace cluscore {

// Domain error carrying a human-readable diagnostic. CSV/file errors embed
// row/column locations in the message.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid user-supplied configuration (maps to CLI exit code 2).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace cluscore
