#pragma once

#include <stdexcept>
#include <string>

namespace khom {

// Base of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Interval operation outside its domain (division by an interval containing 0).
class DomainError : public Error {
public:
    using Error::Error;
};

// Caller-side contract violation: dimension mismatch, t outside [0,1], bad input file.
class UsageError : public Error {
public:
    using Error::Error;
};

class SingularJacobian : public Error {
public:
    using Error::Error;
};

class RefinementDiverged : public Error {
public:
    using Error::Error;
};

// Stepsize collapsed below the tracker's floor; the path is probably near-singular.
class StepUnderflow : public Error {
public:
    using Error::Error;
};

} // namespace khom
