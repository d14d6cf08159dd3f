#pragma once

#include <iosfwd>
#include <string>

#include "proxyopt/mlp.hpp"

namespace proxyopt {

inline constexpr const char* kModelMagic = "proxyopt-mlp";
inline constexpr int kModelFormatVersion = 1;

/// Text format documented in docs/model_format.md. Doubles are written with
/// 17 significant digits, so save followed by load is bit-exact.
void save_model(std::ostream& out, const MlpModel& model);
void save_model(const std::string& path, const MlpModel& model);

MlpModel load_model(std::istream& in);
MlpModel load_model(const std::string& path);

}  // namespace proxyopt
