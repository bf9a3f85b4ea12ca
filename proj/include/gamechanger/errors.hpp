#pragma once

#include <stdexcept>
#include <string>

namespace gamechanger {

// Error taxonomy mirrored by the CLI exit codes: validation 1, oracle
// disagreement 2, I/O 3.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct OracleError : std::runtime_error {
    explicit OracleError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace gamechanger
