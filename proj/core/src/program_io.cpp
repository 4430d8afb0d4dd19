#include "cadseq/program_io.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "cadseq/errors.hpp"

namespace cadseq {

namespace {

using nlohmann::json;

int require_int(const json& obj, const char* key, const char* type_name) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw SyntaxError(std::string(type_name) + " command missing field '" + key + "'");
  }
  if (!it->is_number_integer()) {
    throw SyntaxError(std::string(type_name) + " field '" + key +
                      "' is not an integer");
  }
  const std::int64_t v = it->get<std::int64_t>();
  if (v < 0 || v > 255) {
    throw RangeError(std::string(type_name) + " field '" + key + "' = " +
                     std::to_string(v) + " outside [0, 255]");
  }
  return static_cast<int>(v);
}

std::string require_string(const json& obj, const char* key, const char* type_name) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw SyntaxError(std::string(type_name) + " command missing string field '" +
                      key + "'");
  }
  return it->get<std::string>();
}

BoolOp parse_bool_op(const std::string& s) {
  if (s == "new") return BoolOp::NewBody;
  if (s == "join") return BoolOp::Join;
  if (s == "cut") return BoolOp::Cut;
  if (s == "intersect") return BoolOp::Intersect;
  throw SyntaxError("unknown boolean op '" + s + "'");
}

ExtentType parse_extent(const std::string& s) {
  if (s == "one") return ExtentType::OneSided;
  if (s == "sym") return ExtentType::Symmetric;
  if (s == "two") return ExtentType::TwoSided;
  throw SyntaxError("unknown extent type '" + s + "'");
}

const char* bool_op_name(BoolOp op) {
  switch (op) {
    case BoolOp::NewBody: return "new";
    case BoolOp::Join: return "join";
    case BoolOp::Cut: return "cut";
    case BoolOp::Intersect: return "intersect";
  }
  return "?";
}

const char* extent_name(ExtentType e) {
  switch (e) {
    case ExtentType::OneSided: return "one";
    case ExtentType::Symmetric: return "sym";
    case ExtentType::TwoSided: return "two";
  }
  return "?";
}

}  // namespace

CadProgram parse_program(const std::string& text, const std::string& source_id) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SyntaxError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("commands") || !doc["commands"].is_array()) {
    throw SyntaxError("document must be an object with a 'commands' array");
  }

  CadProgram p;
  p.source_id = source_id;
  bool saw_eos = false;
  for (const json& entry : doc["commands"]) {
    if (saw_eos) {
      throw SyntaxError("command after EOS entry");
    }
    if (!entry.is_object()) {
      throw SyntaxError("command entry is not an object");
    }
    const std::string type = require_string(entry, "type", "command");
    if (type == "SOL") {
      p.commands.push_back(Command::sol());
    } else if (type == "Line") {
      p.commands.push_back(
          Command::line(require_int(entry, "x", "Line"), require_int(entry, "y", "Line")));
    } else if (type == "Arc") {
      p.commands.push_back(Command::arc(
          require_int(entry, "x", "Arc"), require_int(entry, "y", "Arc"),
          require_int(entry, "sweep", "Arc"), require_int(entry, "ccw", "Arc") != 0));
    } else if (type == "Circle") {
      p.commands.push_back(Command::circle(require_int(entry, "x", "Circle"),
                                           require_int(entry, "y", "Circle"),
                                           require_int(entry, "r", "Circle")));
    } else if (type == "Extrude") {
      p.commands.push_back(Command::extrude(
          require_int(entry, "theta", "Extrude"), require_int(entry, "phi", "Extrude"),
          require_int(entry, "gamma", "Extrude"), require_int(entry, "px", "Extrude"),
          require_int(entry, "py", "Extrude"), require_int(entry, "pz", "Extrude"),
          require_int(entry, "s", "Extrude"), require_int(entry, "e1", "Extrude"),
          require_int(entry, "e2", "Extrude"),
          parse_bool_op(require_string(entry, "bool", "Extrude")),
          parse_extent(require_string(entry, "extent", "Extrude"))));
    } else if (type == "EOS") {
      saw_eos = true;
    } else {
      throw SyntaxError("unknown command type '" + type + "'");
    }
  }

  if (const auto issue = check_grammar(p)) {
    throw GrammarError("command " + std::to_string(issue->command_index) + ": " +
                       issue->message);
  }
  return p;
}

std::string serialize_program(const CadProgram& p) {
  json commands = json::array();
  for (const Command& c : p.commands) {
    json entry;
    entry["type"] = command_name(c.type);
    switch (c.type) {
      case CommandType::Line:
        entry["x"] = c.params[slot::kX];
        entry["y"] = c.params[slot::kY];
        break;
      case CommandType::Arc:
        entry["x"] = c.params[slot::kX];
        entry["y"] = c.params[slot::kY];
        entry["sweep"] = c.params[slot::kSweep];
        entry["ccw"] = c.params[slot::kCcw];
        break;
      case CommandType::Circle:
        entry["x"] = c.params[slot::kX];
        entry["y"] = c.params[slot::kY];
        entry["r"] = c.params[slot::kRadius];
        break;
      case CommandType::Extrude:
        entry["theta"] = c.params[slot::kTheta];
        entry["phi"] = c.params[slot::kPhi];
        entry["gamma"] = c.params[slot::kGamma];
        entry["px"] = c.params[slot::kPx];
        entry["py"] = c.params[slot::kPy];
        entry["pz"] = c.params[slot::kPz];
        entry["s"] = c.params[slot::kScale];
        entry["e1"] = c.params[slot::kE1];
        entry["e2"] = c.params[slot::kE2];
        entry["bool"] = bool_op_name(c.bool_op());
        entry["extent"] = extent_name(c.extent());
        break;
      case CommandType::Sol:
      case CommandType::Eos:
        break;
    }
    commands.push_back(entry);
  }
  json doc;
  doc["commands"] = std::move(commands);
  return doc.dump(2) + "\n";
}

void write_matrix_stream(std::ostream& out, const std::vector<QuantizedMatrix>& records) {
  out.write("CSQ1", 4);
  for (const QuantizedMatrix& m : records) {
    for (int r = 0; r < kMatrixRows; ++r) {
      for (int c = 0; c < kMatrixCols; ++c) {
        const std::uint16_t u = static_cast<std::uint16_t>(m.cells[r][c]);
        const char bytes[2] = {static_cast<char>(u & 0xff),
                               static_cast<char>((u >> 8) & 0xff)};
        out.write(bytes, 2);
      }
    }
  }
}

std::vector<QuantizedMatrix> read_matrix_stream(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string(magic, 4) != "CSQ1") {
    throw FormatError("missing CSQ1 magic bytes");
  }
  std::vector<QuantizedMatrix> records;
  constexpr std::size_t kRecordBytes = kMatrixRows * kMatrixCols * 2;
  std::array<unsigned char, kRecordBytes> buf;
  while (in.read(reinterpret_cast<char*>(buf.data()), kRecordBytes)) {
    QuantizedMatrix m;
    std::size_t off = 0;
    for (int r = 0; r < kMatrixRows; ++r) {
      for (int c = 0; c < kMatrixCols; ++c) {
        const std::uint16_t u =
            static_cast<std::uint16_t>(buf[off] | (buf[off + 1] << 8));
        m.cells[r][c] = static_cast<std::int16_t>(u);
        off += 2;
      }
    }
    records.push_back(m);
  }
  if (in.gcount() != 0) {
    throw FormatError("truncated matrix record");
  }
  return records;
}

}  // namespace cadseq
