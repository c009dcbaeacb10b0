#include "sgir/common.hpp"

#include <cstdio>

namespace sgir {

std::string format_double(double v) {
  char buf[64];
  // %.17g round-trips IEEE doubles; trim to the shortest form that does.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace sgir
