#include "ssf/common.hpp"

#include <cmath>

namespace ssf {

double round_half_up(double value, int decimals) {
  double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

}  // namespace ssf
