#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace visnec {

enum class ErrorCode {
    // input / validation
    Io,
    MalformedLine,
    DuplicateId,
    NonFiniteLoss,
    NegativeLoss,
    DimMismatch,
    BadMagic,
    UnsupportedVersion,
    TruncatedPayload,
    NonFiniteEmbedding,
    MissingEmbedding,
    OrphanEmbedding,
    UnknownSample,
    InvalidSample,
    InvalidConfig,
    TooFewDistinctPoints,
    DegenerateInput,
    MissingAssignment,
    RatioOutOfRange,
    EmptyInput,
    NonPositiveBaseline,
    UnknownId,
    // internal
    InvariantViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure the engine reports carries a code. Codes other than
/// InvariantViolation describe bad input; the CLI maps them to exit 2.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    bool is_validation() const noexcept { return code_ != ErrorCode::InvariantViolation; }

    /// Line number for line-oriented inputs, 0 when not applicable.
    std::uint64_t line() const noexcept { return line_; }
    Error& at_line(std::uint64_t line) noexcept {
        line_ = line;
        return *this;
    }

private:
    ErrorCode code_;
    std::uint64_t line_ = 0;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

[[noreturn]] inline void fail_at(ErrorCode code, std::uint64_t line, const std::string& message) {
    throw Error(code, "line " + std::to_string(line) + ": " + message).at_line(line);
}

}  // namespace visnec
