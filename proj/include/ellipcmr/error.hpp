#pragma once

#include <stdexcept>
#include <string>

namespace ellipcmr {

enum class ErrorCode {
    domain,
    truncation,
    zero_argument,
    pole,
    branch,
    coincident,
    fd_inconsistent,
    convergence,
    collision,
    resonance,
    small_divisor,
    window,
    seam,
    quadrature,
    mismatch,
    extrapolation,
};

const char* code_name(ErrorCode c) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode c, const std::string& what) : std::runtime_error(what), code_(c) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& what) { throw Error(c, what); }

} // namespace ellipcmr
