#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace proxyopt {

enum class ErrorCode {
    InvalidDimension,
    UnknownBenchmark,
    InsufficientSamples,
    InvalidParameter,
    OutOfDomain,
    InvalidArchitecture,
    InvalidInput,
    ShapeMismatch,
    TrainingDiverged,
    Parse,
    Io,
};

const char* to_string(ErrorCode code);

// Single exception type for the library. `index` carries the offending
// row, epoch or line number when one applies.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::optional<std::size_t> index = std::nullopt)
        : std::runtime_error(what), code_(code), index_(index) {}

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> index_;
};

}  // namespace proxyopt
