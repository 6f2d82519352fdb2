#pragma once

#include <stdexcept>
#include <string>

namespace rcmkf {

/// Bad dimensions, unknown identifiers, out-of-range parameters.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Range and angles are undefined (target at the sensor origin).
class UndefinedGeometry : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A covariance that must be invertible or positive semidefinite is not.
class DegenerateCovariance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rcmkf
