#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncpot {

enum class ErrorCode {
    NonHermitian,
    DimOverflow,
    DimMismatch,
    InvalidState,
    NonPhysical,
    OutOfRange,
    HierarchyViolation,
    ElevenPopulated,
    GridTooLarge,
    MissingRecord,
    EmptySweep,
    IrreparableBlock,
    NonConvergence,
    CurveTooShort,
    InsufficientCounts,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// front ends can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace ncpot
