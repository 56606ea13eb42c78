#include "ellsel/error.hpp"

namespace ellsel
{

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
        case ErrorCode::InvalidDomain:
            return "InvalidDomain";
        case ErrorCode::InvalidArgument:
            return "InvalidArgument";
        case ErrorCode::NonConvergent:
            return "NonConvergent";
        case ErrorCode::DivisionDegenerate:
            return "DivisionDegenerate";
        case ErrorCode::BranchAmbiguous:
            return "BranchAmbiguous";
        case ErrorCode::PoleProximity:
            return "PoleProximity";
        case ErrorCode::PoleAtNonPositiveInteger:
            return "PoleAtNonPositiveInteger";
        case ErrorCode::ToleranceNotReached:
            return "ToleranceNotReached";
        case ErrorCode::NonFinite:
            return "NonFinite";
        case ErrorCode::ContinuationPole:
            return "ContinuationPole";
        case ErrorCode::InsufficientSamples:
            return "InsufficientSamples";
        case ErrorCode::NonGeometricSpacing:
            return "NonGeometricSpacing";
        case ErrorCode::ExtrapolationUnstable:
            return "ExtrapolationUnstable";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), m_code(code)
{
}

} // namespace ellsel
