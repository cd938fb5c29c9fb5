#include "bwe/error.hpp"

namespace bwe {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::NonPositiveValue: return "NonPositiveValue";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::DegenerateRange: return "DegenerateRange";
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::DuplicatePeriod: return "DuplicatePeriod";
        case ErrorCode::UnknownStage: return "UnknownStage";
        case ErrorCode::UnknownKind: return "UnknownKind";
        case ErrorCode::GapTooLong: return "GapTooLong";
        case ErrorCode::Misaligned: return "Misaligned";
        case ErrorCode::NonPositiveDeflator: return "NonPositiveDeflator";
        case ErrorCode::MissingRate: return "MissingRate";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::SingularDesign: return "SingularDesign";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::EmptyGrid: return "EmptyGrid";
        case ErrorCode::DivergenceDetected: return "DivergenceDetected";
        case ErrorCode::ZeroActual: return "ZeroActual";
        case ErrorCode::MissingForecast: return "MissingForecast";
        case ErrorCode::ZeroDemandVariance: return "ZeroDemandVariance";
        case ErrorCode::NonPositiveGenerated: return "NonPositiveGenerated";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Config: return "Config";
    }
    return "Unknown";
}

}  // namespace bwe
