#pragma once

#include <stdexcept>
#include <string>

namespace anisonet {

// Error classes map 1:1 to the CLI exit codes (config 2, io 3, numerical 4).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace anisonet
