#pragma once

#include <stdexcept>
#include <string>

namespace qpart {

/// Bad configuration, parameters, or arguments. CLI exit status 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric precondition failed (resonant denominator, missing checkpoints, ...).
/// CLI exit status 2.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File format or filesystem failure. CLI exit status 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qpart
