#pragma once

#include <stdexcept>
#include <string>

namespace cr {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a raising operator would create a mode above the target cutoff.
struct CutoffExceededError : Error {
    using Error::Error;
};

// Table is incompatible with the state or operation (wrong family or cutoff).
struct TableMismatchError : Error {
    using Error::Error;
};

// A projected table would exceed the configured entry cap.
struct ResourceError : Error {
    using Error::Error;
};

// Quadrature value changed too much when the node count was doubled.
struct QuadratureError : Error {
    using Error::Error;
};

struct MalformedFileError : Error {
    using Error::Error;
};

struct VersionMismatchError : Error {
    using Error::Error;
};

struct ChecksumMismatchError : Error {
    using Error::Error;
};

// Adaptive integrator cannot reach the requested tolerance.
struct StepUnderflowError : Error {
    using Error::Error;
};

// The (C, xi) chart of the reduced planar system breaks down at A=0 or B=0.
struct SingularChartError : Error {
    using Error::Error;
};

struct InsufficientDataError : Error {
    using Error::Error;
};

struct ParameterRangeError : Error {
    using Error::Error;
};

}  // namespace cr
