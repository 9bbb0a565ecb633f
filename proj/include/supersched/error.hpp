#pragma once

#include <stdexcept>
#include <string>

namespace supersched {

enum class ErrorCode {
    InvalidArgument = 1,
    Parse = 2,
    Invariant = 3,
    Io = 4,
    Overflow = 5,
    Unsupported = 6,
};

// All library failures are reported through this one exception type; the code
// is what the C boundary translates into a status value.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace supersched
