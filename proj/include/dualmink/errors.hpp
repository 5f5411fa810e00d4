#pragma once

#include <stdexcept>
#include <string>

namespace dualmink {

// Error categories aligned with the CLI exit-code contract:
// input validation -> 2, unmet solvability condition -> 3, numerical failure -> 4.

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dualmink
