#include "cadseq/matrix.hpp"

#include <string>

#include "cadseq/errors.hpp"

namespace cadseq {

QuantizedMatrix to_matrix(const CadProgram& p) {
  if (p.commands.size() > kMaxSequenceLength) {
    throw OverflowError("sequence length " + std::to_string(p.commands.size()) +
                        " exceeds matrix capacity of " +
                        std::to_string(kMaxSequenceLength));
  }
  QuantizedMatrix m;
  const Command eos = Command::eos();
  for (int row = 0; row < kMatrixRows; ++row) {
    const Command& c =
        row < static_cast<int>(p.commands.size()) ? p.commands[row] : eos;
    m.cells[row][0] = static_cast<std::int16_t>(c.type);
    for (int s = 0; s < kNumParamSlots; ++s) {
      m.cells[row][s + 1] = c.params[s];
    }
  }
  return m;
}

CadProgram from_matrix(const QuantizedMatrix& m) {
  CadProgram p;
  bool seen_eos = false;
  for (int row = 0; row < kMatrixRows; ++row) {
    const std::int16_t type_index = m.cells[row][0];
    if (type_index < 0 || type_index > 5) {
      throw DecodeError("row " + std::to_string(row) + ": unknown command index " +
                        std::to_string(type_index));
    }
    const CommandType type = static_cast<CommandType>(type_index);
    if (seen_eos && type != CommandType::Eos) {
      throw DecodeError("row " + std::to_string(row) + ": command after EOS");
    }
    if (type == CommandType::Eos) {
      seen_eos = true;
    }

    Command c;
    c.type = type;
    const std::uint16_t mask = used_slot_mask(type);
    for (int s = 0; s < kNumParamSlots; ++s) {
      const std::int16_t v = m.cells[row][s + 1];
      if (v < -1 || v > 255) {
        throw DecodeError("row " + std::to_string(row) + ": cell value " +
                          std::to_string(v) + " outside {-1} u [0, 255]");
      }
      if (mask & (1u << s)) {
        if (v == kUnusedSlot) {
          throw DecodeError("row " + std::to_string(row) + ": required slot " +
                            std::to_string(s) + " is -1");
        }
      } else if (v != kUnusedSlot) {
        throw DecodeError("row " + std::to_string(row) + ": unused slot " +
                          std::to_string(s) + " is set");
      }
      c.params[s] = v;
    }
    if (!seen_eos) {
      p.commands.push_back(c);
    }
  }
  return p;
}

}  // namespace cadseq
