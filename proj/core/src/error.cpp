#include "ncpot/error.hpp"

namespace ncpot {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonHermitian: return "NonHermitian";
        case ErrorCode::DimOverflow: return "DimOverflow";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::InvalidState: return "InvalidState";
        case ErrorCode::NonPhysical: return "NonPhysical";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::HierarchyViolation: return "HierarchyViolation";
        case ErrorCode::ElevenPopulated: return "ElevenPopulated";
        case ErrorCode::GridTooLarge: return "GridTooLarge";
        case ErrorCode::MissingRecord: return "MissingRecord";
        case ErrorCode::EmptySweep: return "EmptySweep";
        case ErrorCode::IrreparableBlock: return "IrreparableBlock";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::CurveTooShort: return "CurveTooShort";
        case ErrorCode::InsufficientCounts: return "InsufficientCounts";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace ncpot
