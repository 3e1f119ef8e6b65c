#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace casesens {

enum class ErrorCode {
    // Input / data errors.
    ParseError,
    BadBinary,
    MissingCase,
    MultipleCases,
    NarrowReferent,
    InvalidSetSize,
    DuplicateId,
    EmptyStudy,
    // Parameter errors.
    InvalidArgument,
    InvalidGamma,
    InvalidTheta,
    InvalidCount,
    // Statistical preconditions.
    NoNarrowSets,
    NoRejectionAtOne,
    NotBracketed,
    Unattainable,
    ConstantColumn,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// True for codes that describe a statistical precondition rather than bad input.
bool is_statistical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace casesens
