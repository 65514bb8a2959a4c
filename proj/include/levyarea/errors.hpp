#pragma once

#include <stdexcept>
#include <string>

namespace levyarea {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Principal-branch power evaluated on the negative real axis (or at an
/// invalid zero base).
class BranchCutError : public Error {
public:
    using Error::Error;
};

/// Gamma function evaluated at a non-positive integer.
class PoleError : public Error {
public:
    using Error::Error;
};

/// A connection formula was selected whose gamma prefactors are at (or too
/// close to) a pole.
class DegenerateParameterError : public Error {
public:
    using Error::Error;
};

/// Series or adaptive refinement exhausted its budget without meeting the
/// requested tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A stated precondition on the inputs does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Combinatorial size limit exceeded.
class BudgetError : public Error {
public:
    using Error::Error;
};

class MissingCumulantError : public Error {
public:
    using Error::Error;
};

/// Covariance factorization failed even after jitter escalation.
class CholeskyError : public Error {
public:
    using Error::Error;
};

/// Time argument not aligned with the sampling grid.
class GridError : public Error {
public:
    using Error::Error;
};

/// Successive mesh refinements disagree beyond the requested tolerance.
class ResolutionError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

/// Experiment configuration failed validation.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace levyarea
