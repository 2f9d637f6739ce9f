#ifndef FUSION_CORE_ERROR_HPP
#define FUSION_CORE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fusion {

enum class ErrorCode {
    EmptyImage,
    BlankImage,
    DimensionMismatch,
    LengthMismatch,
    LabelOutOfRange,
    DegenerateInput,
    InvalidK,
    InvalidAlpha,
    InvalidPriors,
    InvalidReliability,
    TotalConflict,
    DegenerateWeakLearner,
    InsufficientSamples,
    EmptyModel,
    ConfigError,
    DataError,
    IoError,
};

/// Single exception type for the whole library; the code tells callers
/// (and the C API) which contract was violated.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace fusion

#endif
