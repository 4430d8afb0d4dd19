#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cadseq {

// Command vocabulary. Index values double as the command-type column of the
// quantized matrix and follow the public dataset's ordering, so encoded
// matrices are interchangeable with it.
enum class CommandType : std::int16_t {
  Line = 0,
  Arc = 1,
  Circle = 2,
  Eos = 3,
  Sol = 4,
  Extrude = 5,
};

inline constexpr int kNumParamSlots = 16;
inline constexpr int kMaxSequenceLength = 59;  // 60 rows, one reserved for EOS
inline constexpr std::int16_t kUnusedSlot = -1;

// Parameter slot indices within a command's 16-slot parameter vector.
namespace slot {
inline constexpr int kX = 0;
inline constexpr int kY = 1;
inline constexpr int kSweep = 2;
inline constexpr int kCcw = 3;
inline constexpr int kRadius = 4;
inline constexpr int kTheta = 5;
inline constexpr int kPhi = 6;
inline constexpr int kGamma = 7;
inline constexpr int kPx = 8;
inline constexpr int kPy = 9;
inline constexpr int kPz = 10;
inline constexpr int kScale = 11;
inline constexpr int kE1 = 12;
inline constexpr int kE2 = 13;
inline constexpr int kBool = 14;
inline constexpr int kExtent = 15;
}  // namespace slot

enum class BoolOp : std::int16_t { NewBody = 0, Join = 1, Cut = 2, Intersect = 3 };
enum class ExtentType : std::int16_t { OneSided = 0, Symmetric = 1, TwoSided = 2 };

// A single parameterized modeling command. Unused slots hold -1; used slots
// hold quantized integers in [0, 255].
struct Command {
  CommandType type = CommandType::Eos;
  std::array<std::int16_t, kNumParamSlots> params;

  Command() { params.fill(kUnusedSlot); }

  bool operator==(const Command& o) const = default;

  std::int16_t param(int slot_index) const { return params[slot_index]; }

  static Command sol();
  static Command eos();
  static Command line(int x, int y);
  static Command arc(int x, int y, int sweep, bool ccw);
  static Command circle(int x, int y, int r);
  static Command extrude(int theta, int phi, int gamma, int px, int py, int pz,
                         int scale, int e1, int e2, BoolOp op, ExtentType extent);

  BoolOp bool_op() const { return static_cast<BoolOp>(params[slot::kBool]); }
  ExtentType extent() const { return static_cast<ExtentType>(params[slot::kExtent]); }
};

// Slot usage mask for a command type: mask bit i set => slot i is used.
std::uint16_t used_slot_mask(CommandType type);
const char* command_name(CommandType type);
bool is_curve(CommandType type);

// A decoded CAD program: the command list up to (not including) the
// terminating EOS. Immutable by convention; operations return new values.
struct CadProgram {
  std::vector<Command> commands;
  std::string source_id;

  bool operator==(const CadProgram& o) const { return commands == o.commands; }
};

// Number of commands before the terminating EOS (SOL rows count).
std::size_t sequence_length(const CadProgram& p);

struct GrammarIssue {
  std::size_t command_index;
  std::string message;
};

// Checks the sketch/extrude structure: the program is a sequence of one or
// more (sketch, Extrude) groups, each sketch one or more loops, each loop a
// SOL followed by at least one curve. A Circle is a complete loop on its own
// and cannot be chained with Line/Arc segments. Also re-checks slot ranges.
std::optional<GrammarIssue> check_grammar(const CadProgram& p);

inline bool well_formed(const CadProgram& p) { return !check_grammar(p).has_value(); }

// Index ranges of structural groups, used by the augmentation operators.
struct SketchExtrudeGroup {
  std::size_t sketch_begin;  // first SOL of the sketch
  std::size_t sketch_end;    // one past the last curve (== extrude index)
  std::size_t extrude;       // index of the Extrude command

  std::size_t sketch_size() const { return sketch_end - sketch_begin; }
  std::size_t group_size() const { return sketch_end - sketch_begin + 1; }
};

// Splits a well-formed program into its (sketch, Extrude) groups.
std::vector<SketchExtrudeGroup> split_groups(const CadProgram& p);

}  // namespace cadseq
