#pragma once

#include <stdexcept>
#include <string>

namespace strichartz {

// Root of the library's exception hierarchy. Everything thrown on purpose
// derives from this so callers (the CLI in particular) can map failures to
// exit codes.
class LabError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public LabError {
public:
    using LabError::LabError;
};

// A grid is too coarse for the oscillation it has to carry.
class ResolutionError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// Two objects that must share a grid do not.
class GridMismatchError : public LabError {
public:
    using LabError::LabError;
};

// An iterative or adaptive procedure hit its cap without meeting tolerance.
class ConvergenceError : public LabError {
public:
    using LabError::LabError;
};

}  // namespace strichartz
