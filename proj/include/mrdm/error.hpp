#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mrdm {

enum class ErrorCode {
    // wavelet_bank
    UnknownWavelet,
    NotOrthonormal,
    OddLength,
    // mra_core
    LengthMismatch,
    BadDepth,
    MalformedFrame,
    // rate_plan
    JTooLarge,
    NotPowerOfTwoN,
    DepthExceedsBlocklength,
    IllegalRate,
    CapacityMismatch,
    RateInconsistentWithFm,
    DuplicateChannel,
    BadPhase,
    // frame_codec
    BadLength,
    BadResolution,
    OffGrid,
    MissingChannel,
    PayloadLengthMismatch,
    ShapeMismatch,
    SampleOutOfRange,
    // serialization
    ParseError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::UnknownWavelet: return "UnknownWavelet";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::OddLength: return "OddLength";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BadDepth: return "BadDepth";
    case ErrorCode::MalformedFrame: return "MalformedFrame";
    case ErrorCode::JTooLarge: return "JTooLarge";
    case ErrorCode::NotPowerOfTwoN: return "NotPowerOfTwoN";
    case ErrorCode::DepthExceedsBlocklength: return "DepthExceedsBlocklength";
    case ErrorCode::IllegalRate: return "IllegalRate";
    case ErrorCode::CapacityMismatch: return "CapacityMismatch";
    case ErrorCode::RateInconsistentWithFm: return "RateInconsistentWithFm";
    case ErrorCode::DuplicateChannel: return "DuplicateChannel";
    case ErrorCode::BadPhase: return "BadPhase";
    case ErrorCode::BadLength: return "BadLength";
    case ErrorCode::BadResolution: return "BadResolution";
    case ErrorCode::OffGrid: return "OffGrid";
    case ErrorCode::MissingChannel: return "MissingChannel";
    case ErrorCode::PayloadLengthMismatch: return "PayloadLengthMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SampleOutOfRange: return "SampleOutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library. The code is stable and meant to be
/// switched on; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace mrdm
