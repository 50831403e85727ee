#pragma once

#include <stdexcept>
#include <string>

namespace specpol {

/// Base of every error raised by the library. `kind()` is a stable
/// identifier used by the CLI to map failures onto exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define SPECPOL_DEFINE_ERROR(Name)                                         \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : Error(#Name, what) {}     \
    }

SPECPOL_DEFINE_ERROR(NotHermitian);
SPECPOL_DEFINE_ERROR(NoConvergence);
SPECPOL_DEFINE_ERROR(DimensionMismatch);
SPECPOL_DEFINE_ERROR(BasisNotOrthonormal);
SPECPOL_DEFINE_ERROR(OutsideRange);
SPECPOL_DEFINE_ERROR(NoWitness);
SPECPOL_DEFINE_ERROR(EmptyRegion);
SPECPOL_DEFINE_ERROR(LimitMismatch);
SPECPOL_DEFINE_ERROR(GridTooCoarse);
SPECPOL_DEFINE_ERROR(GridInsufficient);
SPECPOL_DEFINE_ERROR(TooFewMatrices);
SPECPOL_DEFINE_ERROR(WindowExhausted);
SPECPOL_DEFINE_ERROR(HypothesisViolated);
SPECPOL_DEFINE_ERROR(ComplexQ1);

#undef SPECPOL_DEFINE_ERROR

}  // namespace specpol
