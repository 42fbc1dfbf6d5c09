#pragma once

#include <stdexcept>
#include <string>

namespace asqg {

// Input/validation failures. The CLI maps these to exit code 2;
// every other exception maps to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dimension/shape violations inside the numeric core.
struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace asqg
