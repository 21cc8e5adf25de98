#pragma once

#include <map>
#include <string>

#include "lplab/log_value.hpp"

namespace lplab {

/// Two-sided bound that holds up to unspecified universal constants. The
/// constants used to scale each side are kept alongside for reporting.
struct BoundBracket {
  LogValue lower;
  LogValue upper;
  std::map<std::string, double> constants_used;

  bool contains(const LogValue& v) const { return lower <= v && v <= upper; }
  bool strictly_contains(const LogValue& v) const { return lower < v && v < upper; }
};

}  // namespace lplab
