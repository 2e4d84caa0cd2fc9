#include "wvsim/error.hpp"

namespace wvsim {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ZeroVector: return "ZeroVector";
        case ErrorKind::DuplicateLabel: return "DuplicateLabel";
        case ErrorKind::BasisMismatch: return "BasisMismatch";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::InvalidWidth: return "InvalidWidth";
        case ErrorKind::WidthMismatch: return "WidthMismatch";
        case ErrorKind::RangeTooNarrow: return "RangeTooNarrow";
        case ErrorKind::NotNormalized: return "NotNormalized";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::OrthogonalSelection: return "OrthogonalSelection";
        case ErrorKind::PostSelectionImpossible: return "PostSelectionImpossible";
        case ErrorKind::InvalidAngle: return "InvalidAngle";
        case ErrorKind::InvalidData: return "InvalidData";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "UnknownError";
}

}  // namespace wvsim
