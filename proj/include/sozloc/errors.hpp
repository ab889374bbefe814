#pragma once

#include <stdexcept>
#include <string>

namespace sozloc {

// Bad arguments / misuse of the API or CLI. Maps to exit code 1.
struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Broken or missing input data (files, manifests, formats). Maps to exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (singular systems, non-finite values). Maps to exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sozloc
