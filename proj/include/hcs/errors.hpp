#pragma once

#include <stdexcept>
#include <string>

namespace hcs {

// Bad config files or inconsistent run settings; CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure (divergence, impossible solve); CLI exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem and format failures; CLI exit code 4.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hcs
