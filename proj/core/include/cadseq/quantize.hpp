#pragma once

#include <cstdint>

namespace cadseq {

// Dequantization targets for the 8-bit parameter grid. Coordinates, plane
// origins and extrusion distances share the [-1, 1) model-box map; lengths
// (radius, profile scale) are non-negative; angles get their own maps so that
// the near-discrete orientation values 0 and +-90 degrees lie exactly on grid
// points (value 128 dequantizes to exactly 0).
enum class ParamKind {
  Coordinate,   // (v - 128) / 128            -> [-1, 0.9921875]
  Length,       // v / 128                    -> [0, 1.9921875]
  SweepAngle,   // v * 2pi / 256              -> [0, 2pi)
  OrientAngle,  // (v - 128) * 2pi / 256      -> [-pi, pi)
};

// Maps a quantized integer in [0, 255] to its real value. Throws RangeError
// outside the grid.
double dequantize(int v, ParamKind kind);

// Inverse affine map, rounded to the nearest grid point and clipped to
// [0, 255]. quantize(dequantize(v), kind) == v for every v in [0, 255].
int quantize(double value, ParamKind kind);

}  // namespace cadseq
