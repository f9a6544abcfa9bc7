#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <nlohmann/json.hpp>

namespace susyhom::detail {

// Rounds to 12 significant digits so serialised output is stable; non-finite
// values become null.
inline nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  double r = std::strtod(buf, nullptr);
  if (r == 0.0) r = 0.0;  // drop negative zero
  return r;
}

}  // namespace susyhom::detail
