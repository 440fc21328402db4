#include "gapinterp/error.hpp"

namespace gapinterp {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidParameters: return "InvalidParameters";
        case ErrorCode::SupportMismatch: return "SupportMismatch";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::NonPositiveDensity: return "NonPositiveDensity";
        case ErrorCode::WeightsNotPositive: return "WeightsNotPositive";
        case ErrorCode::NotCovered: return "NotCovered";
        case ErrorCode::InfeasibleClass: return "InfeasibleClass";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::IndexOutOfPath: return "IndexOutOfPath";
        case ErrorCode::TruncationTooShort: return "TruncationTooShort";
        case ErrorCode::NotPositive: return "NotPositive";
        case ErrorCode::MaskViolation: return "MaskViolation";
        case ErrorCode::LagOutOfRange: return "LagOutOfRange";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::NotConverged: return "NotConverged";
        case ErrorCode::ClosedFormInvalid: return "ClosedFormInvalid";
        case ErrorCode::NewtonNotConverged: return "NewtonNotConverged";
        case ErrorCode::PositivityLost: return "PositivityLost";
        case ErrorCode::SingularCovariance: return "SingularCovariance";
        case ErrorCode::EmbeddingNotPSD: return "EmbeddingNotPSD";
        case ErrorCode::VerificationFailed: return "VerificationFailed";
    }
    return "Unknown";
}

bool is_validation(ErrorCode code) noexcept { return static_cast<int>(code) < 20; }

}  // namespace gapinterp
