#include "cadseq/quantize.hpp"

#include <algorithm>
#include <cmath>

#include "cadseq/errors.hpp"

namespace cadseq {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double dequantize(int v, ParamKind kind) {
  if (v < 0 || v > 255) {
    throw RangeError("quantized value " + std::to_string(v) + " outside [0, 255]");
  }
  switch (kind) {
    case ParamKind::Coordinate:
      return (v - 128) / 128.0;
    case ParamKind::Length:
      return v / 128.0;
    case ParamKind::SweepAngle:
      return v * (kTwoPi / 256.0);
    case ParamKind::OrientAngle:
      return (v - 128) * (kTwoPi / 256.0);
  }
  throw RangeError("unknown parameter kind");
}

int quantize(double value, ParamKind kind) {
  double grid = 0.0;
  switch (kind) {
    case ParamKind::Coordinate:
      grid = value * 128.0 + 128.0;
      break;
    case ParamKind::Length:
      grid = value * 128.0;
      break;
    case ParamKind::SweepAngle:
      grid = value * (256.0 / kTwoPi);
      break;
    case ParamKind::OrientAngle:
      grid = value * (256.0 / kTwoPi) + 128.0;
      break;
  }
  const long long q = std::llround(grid);
  return static_cast<int>(std::clamp(q, 0ll, 255ll));
}

}  // namespace cadseq
