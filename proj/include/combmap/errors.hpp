#pragma once

#include <stdexcept>
#include <string>

namespace combmap {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define COMBMAP_DEFINE_ERROR(Name)                \
    class Name : public Error {                   \
    public:                                       \
        using Error::Error;                       \
    }

COMBMAP_DEFINE_ERROR(EmptyConfig);
COMBMAP_DEFINE_ERROR(NonIncreasingPositions);
COMBMAP_DEFINE_ERROR(NegativeHeight);
COMBMAP_DEFINE_ERROR(LengthMismatch);
COMBMAP_DEFINE_ERROR(InvalidInterlacing);
COMBMAP_DEFINE_ERROR(EvaluationAtBranchPoint);
COMBMAP_DEFINE_ERROR(OutOfGap);
COMBMAP_DEFINE_ERROR(QuadratureFailure);
COMBMAP_DEFINE_ERROR(NewtonDivergence);
COMBMAP_DEFINE_ERROR(ContinuationExhausted);
COMBMAP_DEFINE_ERROR(GapCollision);
COMBMAP_DEFINE_ERROR(NonConvergence);
COMBMAP_DEFINE_ERROR(InversionFailure);
COMBMAP_DEFINE_ERROR(IdentityViolation);
COMBMAP_DEFINE_ERROR(MonotonicityViolation);
COMBMAP_DEFINE_ERROR(OnSlit);
COMBMAP_DEFINE_ERROR(OnSet);
COMBMAP_DEFINE_ERROR(ParseError);

#undef COMBMAP_DEFINE_ERROR

} // namespace combmap
