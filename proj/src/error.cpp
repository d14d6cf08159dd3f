#include "proxyopt/error.hpp"

namespace proxyopt {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidDimension: return "invalid-dimension";
        case ErrorCode::UnknownBenchmark: return "unknown-benchmark";
        case ErrorCode::InsufficientSamples: return "insufficient-samples";
        case ErrorCode::InvalidParameter: return "invalid-parameter";
        case ErrorCode::OutOfDomain: return "out-of-domain";
        case ErrorCode::InvalidArchitecture: return "invalid-architecture";
        case ErrorCode::InvalidInput: return "invalid-input";
        case ErrorCode::ShapeMismatch: return "shape-mismatch";
        case ErrorCode::TrainingDiverged: return "training-diverged";
        case ErrorCode::Parse: return "parse-error";
        case ErrorCode::Io: return "io-error";
    }
    return "unknown";
}

}  // namespace proxyopt
