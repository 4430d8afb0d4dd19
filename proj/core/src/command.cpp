#include "cadseq/command.hpp"

#include "cadseq/errors.hpp"

namespace cadseq {

namespace {

void check_q(int v, const char* field) {
  if (v < 0 || v > 255) {
    throw RangeError(std::string(field) + " = " + std::to_string(v) +
                     " outside [0, 255]");
  }
}

constexpr std::uint16_t bit(int i) { return static_cast<std::uint16_t>(1u << i); }

}  // namespace

std::uint16_t used_slot_mask(CommandType type) {
  switch (type) {
    case CommandType::Line:
      return bit(slot::kX) | bit(slot::kY);
    case CommandType::Arc:
      return bit(slot::kX) | bit(slot::kY) | bit(slot::kSweep) | bit(slot::kCcw);
    case CommandType::Circle:
      return bit(slot::kX) | bit(slot::kY) | bit(slot::kRadius);
    case CommandType::Extrude:
      return bit(slot::kTheta) | bit(slot::kPhi) | bit(slot::kGamma) |
             bit(slot::kPx) | bit(slot::kPy) | bit(slot::kPz) | bit(slot::kScale) |
             bit(slot::kE1) | bit(slot::kE2) | bit(slot::kBool) | bit(slot::kExtent);
    case CommandType::Sol:
    case CommandType::Eos:
      return 0;
  }
  return 0;
}

const char* command_name(CommandType type) {
  switch (type) {
    case CommandType::Line: return "Line";
    case CommandType::Arc: return "Arc";
    case CommandType::Circle: return "Circle";
    case CommandType::Eos: return "EOS";
    case CommandType::Sol: return "SOL";
    case CommandType::Extrude: return "Extrude";
  }
  return "?";
}

bool is_curve(CommandType type) {
  return type == CommandType::Line || type == CommandType::Arc ||
         type == CommandType::Circle;
}

Command Command::sol() {
  Command c;
  c.type = CommandType::Sol;
  return c;
}

Command Command::eos() {
  Command c;
  c.type = CommandType::Eos;
  return c;
}

Command Command::line(int x, int y) {
  check_q(x, "Line.x");
  check_q(y, "Line.y");
  Command c;
  c.type = CommandType::Line;
  c.params[slot::kX] = static_cast<std::int16_t>(x);
  c.params[slot::kY] = static_cast<std::int16_t>(y);
  return c;
}

Command Command::arc(int x, int y, int sweep, bool ccw) {
  check_q(x, "Arc.x");
  check_q(y, "Arc.y");
  check_q(sweep, "Arc.sweep");
  Command c;
  c.type = CommandType::Arc;
  c.params[slot::kX] = static_cast<std::int16_t>(x);
  c.params[slot::kY] = static_cast<std::int16_t>(y);
  c.params[slot::kSweep] = static_cast<std::int16_t>(sweep);
  c.params[slot::kCcw] = ccw ? 1 : 0;
  return c;
}

Command Command::circle(int x, int y, int r) {
  check_q(x, "Circle.x");
  check_q(y, "Circle.y");
  check_q(r, "Circle.r");
  Command c;
  c.type = CommandType::Circle;
  c.params[slot::kX] = static_cast<std::int16_t>(x);
  c.params[slot::kY] = static_cast<std::int16_t>(y);
  c.params[slot::kRadius] = static_cast<std::int16_t>(r);
  return c;
}

Command Command::extrude(int theta, int phi, int gamma, int px, int py, int pz,
                         int scale, int e1, int e2, BoolOp op, ExtentType extent) {
  check_q(theta, "Extrude.theta");
  check_q(phi, "Extrude.phi");
  check_q(gamma, "Extrude.gamma");
  check_q(px, "Extrude.px");
  check_q(py, "Extrude.py");
  check_q(pz, "Extrude.pz");
  check_q(scale, "Extrude.s");
  check_q(e1, "Extrude.e1");
  check_q(e2, "Extrude.e2");
  Command c;
  c.type = CommandType::Extrude;
  c.params[slot::kTheta] = static_cast<std::int16_t>(theta);
  c.params[slot::kPhi] = static_cast<std::int16_t>(phi);
  c.params[slot::kGamma] = static_cast<std::int16_t>(gamma);
  c.params[slot::kPx] = static_cast<std::int16_t>(px);
  c.params[slot::kPy] = static_cast<std::int16_t>(py);
  c.params[slot::kPz] = static_cast<std::int16_t>(pz);
  c.params[slot::kScale] = static_cast<std::int16_t>(scale);
  c.params[slot::kE1] = static_cast<std::int16_t>(e1);
  c.params[slot::kE2] = static_cast<std::int16_t>(e2);
  c.params[slot::kBool] = static_cast<std::int16_t>(op);
  c.params[slot::kExtent] = static_cast<std::int16_t>(extent);
  return c;
}

std::size_t sequence_length(const CadProgram& p) { return p.commands.size(); }

std::optional<GrammarIssue> check_grammar(const CadProgram& p) {
  if (p.commands.empty()) {
    return GrammarIssue{0, "empty program"};
  }
  if (p.commands.size() > kMaxSequenceLength) {
    return GrammarIssue{p.commands.size() - 1,
                        "sequence length exceeds " + std::to_string(kMaxSequenceLength)};
  }

  for (std::size_t i = 0; i < p.commands.size(); ++i) {
    const Command& c = p.commands[i];
    if (c.type == CommandType::Eos) {
      return GrammarIssue{i, "EOS inside command list"};
    }
    const std::uint16_t mask = used_slot_mask(c.type);
    for (int s = 0; s < kNumParamSlots; ++s) {
      const std::int16_t v = c.params[s];
      if (mask & (1u << s)) {
        if (v < 0 || v > 255) {
          return GrammarIssue{i, std::string(command_name(c.type)) +
                                     " parameter outside [0, 255]"};
        }
      } else if (v != kUnusedSlot) {
        return GrammarIssue{i, std::string(command_name(c.type)) +
                                   " sets an unused parameter slot"};
      }
    }
    if (c.type == CommandType::Extrude) {
      if (c.params[slot::kBool] > 3) return GrammarIssue{i, "unknown boolean op"};
      if (c.params[slot::kExtent] > 2) return GrammarIssue{i, "unknown extent type"};
    }
  }

  // Structural pass over the (sketch, Extrude)+ grammar.
  bool in_loop = false;          // a SOL is open
  std::size_t loop_curves = 0;   // curves in the open loop
  bool loop_is_circle = false;
  bool sketch_has_loop = false;  // at least one completed loop in this sketch

  for (std::size_t i = 0; i < p.commands.size(); ++i) {
    const CommandType t = p.commands[i].type;
    switch (t) {
      case CommandType::Sol:
        if (in_loop && loop_curves == 0) {
          return GrammarIssue{i, "loop with no curves"};
        }
        in_loop = true;
        loop_curves = 0;
        loop_is_circle = false;
        sketch_has_loop = true;
        break;
      case CommandType::Line:
      case CommandType::Arc:
        if (!in_loop) return GrammarIssue{i, "curve before any SOL"};
        if (loop_is_circle) {
          return GrammarIssue{i, "curve chained after a Circle loop"};
        }
        ++loop_curves;
        break;
      case CommandType::Circle:
        if (!in_loop) return GrammarIssue{i, "curve before any SOL"};
        if (loop_curves > 0) {
          return GrammarIssue{i, "Circle inside a Line/Arc chain"};
        }
        loop_is_circle = true;
        ++loop_curves;
        break;
      case CommandType::Extrude:
        if (!sketch_has_loop) return GrammarIssue{i, "Extrude without a sketch"};
        if (in_loop && loop_curves == 0) {
          return GrammarIssue{i, "loop with no curves"};
        }
        if (i == 0) return GrammarIssue{i, "Extrude without a sketch"};
        in_loop = false;
        loop_curves = 0;
        loop_is_circle = false;
        sketch_has_loop = false;
        break;
      case CommandType::Eos:
        break;  // already rejected above
    }
  }
  if (in_loop || sketch_has_loop) {
    return GrammarIssue{p.commands.size() - 1, "program does not end with Extrude"};
  }
  return std::nullopt;
}

std::vector<SketchExtrudeGroup> split_groups(const CadProgram& p) {
  std::vector<SketchExtrudeGroup> groups;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < p.commands.size(); ++i) {
    if (p.commands[i].type == CommandType::Extrude) {
      groups.push_back({begin, i, i});
      begin = i + 1;
    }
  }
  return groups;
}

}  // namespace cadseq
