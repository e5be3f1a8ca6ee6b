#include "visnec/error.hpp"

namespace visnec {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Io: return "Io";
        case ErrorCode::MalformedLine: return "MalformedLine";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
        case ErrorCode::NegativeLoss: return "NegativeLoss";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
        case ErrorCode::TruncatedPayload: return "TruncatedPayload";
        case ErrorCode::NonFiniteEmbedding: return "NonFiniteEmbedding";
        case ErrorCode::MissingEmbedding: return "MissingEmbedding";
        case ErrorCode::OrphanEmbedding: return "OrphanEmbedding";
        case ErrorCode::UnknownSample: return "UnknownSample";
        case ErrorCode::InvalidSample: return "InvalidSample";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::TooFewDistinctPoints: return "TooFewDistinctPoints";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::MissingAssignment: return "MissingAssignment";
        case ErrorCode::RatioOutOfRange: return "RatioOutOfRange";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::NonPositiveBaseline: return "NonPositiveBaseline";
        case ErrorCode::UnknownId: return "UnknownId";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

}  // namespace visnec
