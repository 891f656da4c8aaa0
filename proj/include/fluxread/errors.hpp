#pragma once

#include <stdexcept>
#include <string>

namespace fluxread {

// Bad user input or inconsistent parameters (CLI exit code 2).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Integrator blow-up, solver non-convergence, conservation breach (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fluxread
