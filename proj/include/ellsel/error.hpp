#ifndef ELLSEL_ERROR_HPP
#define ELLSEL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace ellsel
{

enum class ErrorCode {
    InvalidDomain,
    InvalidArgument,
    NonConvergent,
    DivisionDegenerate,
    BranchAmbiguous,
    PoleProximity,
    PoleAtNonPositiveInteger,
    ToleranceNotReached,
    NonFinite,
    ContinuationPole,
    InsufficientSamples,
    NonGeometricSpacing,
    ExtrapolationUnstable,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception thrown by every numerical routine in the library. The code
/// identifies the failure class; what() carries a human-readable detail.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &detail);

    ErrorCode code() const noexcept
    {
        return m_code;
    }

private:
    ErrorCode m_code;
};

} // namespace ellsel

#endif
