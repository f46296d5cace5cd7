#pragma once

#include <stdexcept>
#include <string>

namespace acoelab {

enum class ErrorCode {
    invalid_argument = 1,
    invalid_instance = 2,
    parse_error = 3,
    io_error = 4,
    truncation_underflow = 5,
    truncation_too_tight = 6,
    non_convergence = 7,
    bounding_box = 8,
    precondition = 9,
    internal = 10,
};

/// All library failures surface as this exception; code() classifies them for
/// callers that map errors onto C status codes or process exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace acoelab
