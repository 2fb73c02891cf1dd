#pragma once

#include <stdexcept>
#include <string>

namespace sonarblob {

// Exit-code mapping for the CLI: parameter 1, I/O 2, numerical 3.
struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sonarblob
