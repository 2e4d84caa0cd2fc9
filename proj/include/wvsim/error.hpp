// error.hpp
// Error kinds raised by the simulator. Every failure is a wvsim::Error
// carrying one ErrorKind so that callers (the CLI in particular) can map
// it onto an exit status without parsing messages.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wvsim {

enum class ErrorKind {
    ZeroVector,
    DuplicateLabel,
    BasisMismatch,
    NotHermitian,
    InvalidWidth,
    WidthMismatch,
    RangeTooNarrow,
    NotNormalized,
    InvalidConfig,
    OrthogonalSelection,
    PostSelectionImpossible,
    InvalidAngle,
    InvalidData,
    ParseError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // Failures caused by the physics of the requested selection rather than
    // by malformed input.
    bool is_physics_domain() const noexcept {
        return kind_ == ErrorKind::OrthogonalSelection ||
               kind_ == ErrorKind::PostSelectionImpossible;
    }

private:
    ErrorKind kind_;
};

}  // namespace wvsim
