#pragma once

#include <stdexcept>
#include <string>

namespace vstates {

/// Input or state outside the domain an operation accepts (bad parameters,
/// table too small, below the bifurcation threshold, guard tripped).
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative or numerical procedure failed on otherwise valid input.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PreconditionViolated : public GuardError {
public:
    using GuardError::GuardError;
};

class IndexOutOfTable : public GuardError {
public:
    using GuardError::GuardError;
};

class TableExhausted : public GuardError {
public:
    using GuardError::GuardError;
};

class NotSimple : public GuardError {
public:
    using GuardError::GuardError;
};

class GuardViolation : public GuardError {
public:
    using GuardError::GuardError;
};

class BoundaryCollision : public GuardError {
public:
    using GuardError::GuardError;
};

class NonConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularJacobian : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotAnEigenvalue : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Malformed branch file; `path()` is a JSON pointer to the offending field.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace vstates
