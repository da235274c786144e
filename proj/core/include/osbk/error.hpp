#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace osbk {

/// Machine-readable failure categories. The CLI maps these onto exit codes
/// and the "code" field of its error JSON.
enum class ErrorCode {
    DimensionMismatch,
    InvalidInput,
    RankDeficient,
    NotTransverse,
    ImmersionFailure,
    Domain,
    Closure,
    SearchFailed,
    UnstableCount,
    DegeneratePencil,
    Consistency,
    Unsupported,
    Config,
    Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& what);

}  // namespace osbk
