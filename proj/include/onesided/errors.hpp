#pragma once

#include <stdexcept>
#include <string>

namespace onesided {

// Common base so callers can catch toolkit errors as one family.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define ONESIDED_DEFINE_ERROR(Name)                                   \
    struct Name : Error {                                             \
        explicit Name(const std::string& what)                       \
            : Error(std::string(#Name) + ": " + what) {}             \
    }

ONESIDED_DEFINE_ERROR(IntervalOutOfDomain);
ONESIDED_DEFINE_ERROR(DegenerateInterval);
ONESIDED_DEFINE_ERROR(NonFiniteEvaluation);
ONESIDED_DEFINE_ERROR(PointOutOfDomain);
ONESIDED_DEFINE_ERROR(NonPositiveWeight);
ONESIDED_DEFINE_ERROR(EmptyFamily);
ONESIDED_DEFINE_ERROR(EmptyGrid);
ONESIDED_DEFINE_ERROR(ExponentMismatch);
ONESIDED_DEFINE_ERROR(GridMismatch);
ONESIDED_DEFINE_ERROR(ParameterOutOfRange);
ONESIDED_DEFINE_ERROR(UnvalidatedKernel);
ONESIDED_DEFINE_ERROR(HypothesisFailure);
ONESIDED_DEFINE_ERROR(ConfigInvalid);
ONESIDED_DEFINE_ERROR(IoError);

#undef ONESIDED_DEFINE_ERROR

// Parse errors carry the offending position in the input string.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t position)
        : Error("ParseError at " + std::to_string(position) + ": " + what),
          pos(position) {}
    std::size_t pos;
};

}  // namespace onesided
