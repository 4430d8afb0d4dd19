#pragma once

#include <array>
#include <cstdint>

#include "cadseq/command.hpp"

namespace cadseq {

inline constexpr int kMatrixRows = 60;
inline constexpr int kMatrixCols = 17;  // command-type column + 16 parameters

// Fixed-size integer encoding of a program: row i = command i, column 0 the
// command-type index, columns 1..16 the parameter slots (-1 where unused).
// Rows past the program's end are EOS rows.
struct QuantizedMatrix {
  std::array<std::array<std::int16_t, kMatrixCols>, kMatrixRows> cells;

  bool operator==(const QuantizedMatrix& o) const = default;

  std::int16_t at(int row, int col) const { return cells[row][col]; }
};

// Encodes a program (length <= 59) into the 60x17 matrix, EOS-padding the
// tail. Throws OverflowError when the program is too long.
QuantizedMatrix to_matrix(const CadProgram& p);

// Inverse of to_matrix. Trailing EOS rows collapse into the implicit
// terminator; content after an EOS row, unknown command indices, out-of-range
// cells, or -1 in required slots raise DecodeError. The result may be empty
// or otherwise not well-formed; callers that need grammar guarantees run
// check_grammar on it.
CadProgram from_matrix(const QuantizedMatrix& m);

}  // namespace cadseq
