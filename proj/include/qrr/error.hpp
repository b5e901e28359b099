#pragma once
#include <stdexcept>
#include <string>

namespace qrr {

// Failure kinds surfaced by the library. Every throw carries one of these so
// callers (and the CLI) can react without parsing message text.
enum class Err {
    NotInvertible,
    OrderExceeded,
    InvalidSubstitution,
    DivergentProduct,
    DivergentTheta,
    DivergentSpec,
    InvalidShape,
    InvalidParams,
    ParseError,
    NotAProduct,
    NotAnIdentity,
    InsufficientOrder,
};

const char* err_name(Err k);

struct Error : std::runtime_error {
    Err kind;
    Error(Err k, const std::string& msg)
        : std::runtime_error(std::string(err_name(k)) + ": " + msg), kind(k) {}
};

[[noreturn]] inline void fail(Err k, const std::string& msg) { throw Error(k, msg); }

inline void expect(bool ok, Err k, const std::string& msg) {
    if (!ok) fail(k, msg);
}

} // namespace qrr
