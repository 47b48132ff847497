#pragma once

#include <stdexcept>
#include <string>

namespace kdv {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input (malformed curve data, degenerate requests).  CLI exit code 2.
struct InputError : Error {
    explicit InputError(const std::string& msg) : Error(msg) {}
};

// Internal consistency failure.  These signal a bug: the theory guarantees
// the violated property, so we never try to recover.  CLI exit code 1.
struct InternalError : Error {
    explicit InternalError(const std::string& msg) : Error(msg) {}
};

struct NonPrimitiveError : InputError {
    explicit NonPrimitiveError(const std::string& msg) : InputError(msg) {}
};

struct NotSingularNormalFormError : InputError {
    explicit NotSingularNormalFormError(const std::string& msg) : InputError(msg) {}
};

struct ZeroCoefficientError : InputError {
    explicit ZeroCoefficientError(const std::string& msg) : InputError(msg) {}
};

// companion_curve: the leading coefficient does not depend on the free
// coefficient, so the order cannot be pushed further.
struct StuckCoefficientError : InputError {
    explicit StuckCoefficientError(const std::string& msg) : InputError(msg) {}
};

struct NonDivisibleOrderError : InternalError {
    explicit NonDivisibleOrderError(const std::string& msg) : InternalError(msg) {}
};

struct PairingViolationError : InternalError {
    explicit PairingViolationError(const std::string& msg) : InternalError(msg) {}
};

struct NoPartnerError : InternalError {
    explicit NoPartnerError(const std::string& msg) : InternalError(msg) {}
};

struct StageCapError : InternalError {
    explicit StageCapError(const std::string& msg) : InternalError(msg) {}
};

struct NonLinearLeadError : InternalError {
    explicit NonLinearLeadError(const std::string& msg) : InternalError(msg) {}
};

} // namespace kdv
