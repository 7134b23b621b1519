#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const = 0;
    virtual const char* kind() const = 0;
};

// Bad input: CLI exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
    int exit_code() const override { return 2; }
    const char* kind() const override { return "ValidationError"; }
};

// Tolerance or conditioning failure: CLI exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
    int exit_code() const override { return 3; }
    const char* kind() const override { return "NumericalError"; }
};

#define BERGMAN_ERROR(Name, Base)                                 \
    class Name : public Base {                                    \
    public:                                                       \
        using Base::Base;                                         \
        const char* kind() const override { return #Name; }       \
    };

BERGMAN_ERROR(UsageError, ValidationError)
BERGMAN_ERROR(InvalidLevel, ValidationError)
BERGMAN_ERROR(NotInGroup, ValidationError)
BERGMAN_ERROR(BoundaryTooClose, ValidationError)
BERGMAN_ERROR(ChamberWallTooClose, ValidationError)
BERGMAN_ERROR(DimensionMismatch, ValidationError)
BERGMAN_ERROR(SectorOverflow, ValidationError)
BERGMAN_ERROR(NonPositiveDenominator, ValidationError)

BERGMAN_ERROR(BasisExpansionFailure, NumericalError)
BERGMAN_ERROR(SingularDenominator, NumericalError)
BERGMAN_ERROR(SingularSymbol, NumericalError)
BERGMAN_ERROR(NonRealSymbol, NumericalError)
BERGMAN_ERROR(NoiseBudgetExceeded, NumericalError)
BERGMAN_ERROR(RankDeficientFit, NumericalError)
BERGMAN_ERROR(ToleranceFailure, NumericalError)

#undef BERGMAN_ERROR

}  // namespace bergman
