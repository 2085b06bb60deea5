#pragma once

#include <stdexcept>
#include <string>

namespace coherent {

/// Invalid parameters: bad grid sizes, states that do not fit the grid,
/// quadratures too coarse for the requested guarantee.
class ConfigurationError : public std::invalid_argument {
public:
    explicit ConfigurationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Valid objects combined incorrectly (grid mismatch, unnormalized input).
class UsageError : public std::logic_error {
public:
    explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace coherent
