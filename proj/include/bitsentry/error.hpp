#pragma once

#include <stdexcept>
#include <string>

namespace bitsentry {

enum class ErrorCode {
    EmptyFile,
    FileTooLarge,
    MalformedHeader,
    EmptyPayload,
    DuplicatePath,
    InvalidManifest,
    FileNotFound,
    IoError,
    RankOutOfRange,
    NonFiniteInput,
    DimensionMismatch,
    LabelLengthMismatch,
    EmptyDataset,
    LabelOutOfRange,
    TooFewSamplesPerClass,
    LengthMismatch,
    InvalidSpec,
    InvalidConfig,
    BundleFormat,
    Unimplemented,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code),
          message_(message) {}

    ErrorCode code() const noexcept { return code_; }
    // what() minus the code prefix, for rethrowing with added context.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyFile: return "EmptyFile";
        case ErrorCode::FileTooLarge: return "FileTooLarge";
        case ErrorCode::MalformedHeader: return "MalformedHeader";
        case ErrorCode::EmptyPayload: return "EmptyPayload";
        case ErrorCode::DuplicatePath: return "DuplicatePath";
        case ErrorCode::InvalidManifest: return "InvalidManifest";
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::RankOutOfRange: return "RankOutOfRange";
        case ErrorCode::NonFiniteInput: return "NonFiniteInput";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::LabelLengthMismatch: return "LabelLengthMismatch";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
        case ErrorCode::TooFewSamplesPerClass: return "TooFewSamplesPerClass";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::BundleFormat: return "BundleFormat";
        case ErrorCode::Unimplemented: return "Unimplemented";
    }
    return "UnknownError";
}

}  // namespace bitsentry
