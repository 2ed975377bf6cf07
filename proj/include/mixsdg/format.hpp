#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace mixsdg {

/// 17 significant digits; used for every number in data files.
inline std::string fmt_data(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Five decimal places; used for display files (DOT labels, SVG).
inline std::string fmt_display(double v) {
  if (std::isnan(v)) return "NaN";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  return buf;
}

}  // namespace mixsdg
