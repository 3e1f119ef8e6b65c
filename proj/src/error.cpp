#include "casesens/error.hpp"

namespace casesens {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::BadBinary: return "BadBinary";
        case ErrorCode::MissingCase: return "MissingCase";
        case ErrorCode::MultipleCases: return "MultipleCases";
        case ErrorCode::NarrowReferent: return "NarrowReferent";
        case ErrorCode::InvalidSetSize: return "InvalidSetSize";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::EmptyStudy: return "EmptyStudy";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidGamma: return "InvalidGamma";
        case ErrorCode::InvalidTheta: return "InvalidTheta";
        case ErrorCode::InvalidCount: return "InvalidCount";
        case ErrorCode::NoNarrowSets: return "NoNarrowSets";
        case ErrorCode::NoRejectionAtOne: return "NoRejectionAtOne";
        case ErrorCode::NotBracketed: return "NotBracketed";
        case ErrorCode::Unattainable: return "Unattainable";
        case ErrorCode::ConstantColumn: return "ConstantColumn";
    }
    return "Unknown";
}

bool is_statistical(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NoNarrowSets:
        case ErrorCode::NoRejectionAtOne:
        case ErrorCode::NotBracketed:
        case ErrorCode::Unattainable:
            return true;
        default:
            return false;
    }
}

}  // namespace casesens
