#pragma once

#include <stdexcept>
#include <string>

namespace h3geo {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid mathematical input (point off the quadric, |p| >= 1, coincident
// boundary points, inconsistent genus/area data, ...).
struct DomainError : Error {
    using Error::Error;
};

// Configuration that cannot hold (rank-deficient circle data, tangency,
// non-transversal quotient fixtures).
struct DegenerateError : Error {
    using Error::Error;
};

// Target object does not fit inside a sampler window (margin included).
struct WindowError : Error {
    using Error::Error;
};

// Calibration did not reach the requested relative standard error, or a
// calibration fixture is missing/unreadable.
struct CalibrationError : Error {
    using Error::Error;
};

// Config file cannot be parsed or fails schema validation.
struct ConfigError : Error {
    using Error::Error;
};

// Runtime numerical failure: integrator step rejection, chart exit, shooting
// non-convergence beyond budget, orbit enumeration instability.
struct NumericalError : Error {
    using Error::Error;
};

} // namespace h3geo
