#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace proxyopt {

/// 17 significant digits, so every double survives a text round trip.
std::string format_double(double value);

/// Strict parse of a whole field; returns false on trailing garbage.
bool parse_double(std::string_view text, double& out);

std::vector<std::string_view> split_fields(std::string_view line, char sep = ',');

}  // namespace proxyopt
