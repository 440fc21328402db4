#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gapinterp {

// Numeric values are stable and appear in CLI output. 1x = bad input, 2x = numerical failure.
enum class ErrorCode {
    InvalidParameters = 10,
    SupportMismatch = 11,
    ConfigError = 12,
    NonPositiveDensity = 13,
    WeightsNotPositive = 14,
    NotCovered = 15,
    InfeasibleClass = 16,
    GridMismatch = 17,
    IndexOutOfPath = 18,

    TruncationTooShort = 20,
    NotPositive = 21,
    MaskViolation = 22,
    LagOutOfRange = 23,
    NotPositiveDefinite = 24,
    NotConverged = 25,
    ClosedFormInvalid = 26,
    NewtonNotConverged = 27,
    PositivityLost = 28,
    SingularCovariance = 29,
    EmbeddingNotPSD = 30,
    VerificationFailed = 31,
};

std::string_view to_string(ErrorCode code) noexcept;

// Input/validation problems, as opposed to failures of the numerics on valid input.
bool is_validation(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace gapinterp
