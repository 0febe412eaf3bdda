#pragma once

#include <stdexcept>
#include <string>

namespace ecgrr {

// Degenerate but syntactically valid input (e.g. an all-constant ECG trace).
struct DegenerateInputError : std::runtime_error {
    explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

// File / format / architecture problems when reading datasets or models.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values encountered during numeric computation.
struct NumericFailure : std::runtime_error {
    explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ecgrr
