#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bwe {

enum class ErrorCode {
    InvalidArgument,
    TooShort,
    NonPositiveValue,
    LengthMismatch,
    DegenerateRange,
    MalformedRow,
    DuplicatePeriod,
    UnknownStage,
    UnknownKind,
    GapTooLong,
    Misaligned,
    NonPositiveDeflator,
    MissingRate,
    OutOfRange,
    SingularDesign,
    NonConvergence,
    EmptyGrid,
    DivergenceDetected,
    ZeroActual,
    MissingForecast,
    ZeroDemandVariance,
    NonPositiveGenerated,
    Io,
    Config,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace bwe
