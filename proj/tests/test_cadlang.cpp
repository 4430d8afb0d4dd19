#include <doctest.h>

#include <sstream>

#include "cadseq/command.hpp"
#include "cadseq/errors.hpp"
#include "cadseq/matrix.hpp"
#include "cadseq/program_io.hpp"
#include "cadseq/quantize.hpp"
#include "test_util.hpp"

using namespace cadseq;

namespace {

CadProgram minimal_circle_extrude() {
  CadProgram p;
  p.commands.push_back(Command::sol());
  p.commands.push_back(Command::circle(128, 128, 64));
  p.commands.push_back(Command::extrude(128, 128, 128, 128, 128, 128, 128, 192, 128,
                                        BoolOp::NewBody, ExtentType::OneSided));
  return p;
}

}  // namespace

TEST_CASE("parse_program accepts the minimal circle-extrude file") {
  const std::string text = R"({"commands":[
    {"type":"SOL"},
    {"type":"Circle","x":128,"y":128,"r":64},
    {"type":"Extrude","theta":128,"phi":128,"gamma":128,"px":128,"py":128,"pz":128,
     "s":128,"e1":192,"e2":128,"bool":"new","extent":"one"},
    {"type":"EOS"}]})";
  const CadProgram p = parse_program(text);
  CHECK(sequence_length(p) == 3);
  CHECK(p.commands[1].type == CommandType::Circle);
}

TEST_CASE("parse_program rejects a curve before any SOL") {
  const std::string text = R"({"commands":[{"type":"Line","x":10,"y":10}]})";
  CHECK_THROWS_AS(parse_program(text), GrammarError);
}

TEST_CASE("parse_program rejects out-of-range parameters") {
  const std::string text =
      R"({"commands":[{"type":"SOL"},{"type":"Circle","x":128,"y":128,"r":300}]})";
  CHECK_THROWS_AS(parse_program(text), RangeError);
}

TEST_CASE("parse_program rejects malformed JSON and unknown commands") {
  CHECK_THROWS_AS(parse_program("{not json"), SyntaxError);
  CHECK_THROWS_AS(parse_program(R"({"commands":[{"type":"Revolve"}]})"), SyntaxError);
  CHECK_THROWS_AS(parse_program(R"({"commands":"nope"})"), SyntaxError);
}

TEST_CASE("serialize/parse round trip") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const CadProgram p = testutil::make_random_wellformed(rng);
    const CadProgram back = parse_program(serialize_program(p));
    CHECK(back == p);
  }
}

TEST_CASE("to_matrix pads with EOS rows") {
  const QuantizedMatrix m = to_matrix(minimal_circle_extrude());
  for (int row = 3; row < kMatrixRows; ++row) {
    CHECK(m.cells[row][0] == static_cast<int>(CommandType::Eos));
    for (int col = 1; col < kMatrixCols; ++col) {
      CHECK(m.cells[row][col] == -1);
    }
  }
  CHECK(m.cells[1][0] == static_cast<int>(CommandType::Circle));
}

TEST_CASE("to_matrix rejects programs past the row capacity") {
  CadProgram p;
  for (int i = 0; i < 20; ++i) {
    testutil::append_circle_block(&p.commands, 128, 128, 32, 128, 140, BoolOp::Join);
  }
  CHECK(p.commands.size() == 60);
  CHECK_THROWS_AS(to_matrix(p), OverflowError);
}

TEST_CASE("from_matrix of the all-EOS matrix is the empty, not-well-formed program") {
  QuantizedMatrix m = to_matrix(CadProgram{});
  const CadProgram p = from_matrix(m);
  CHECK(sequence_length(p) == 0);
  CHECK_FALSE(well_formed(p));
}

TEST_CASE("from_matrix decodes a hand-built line/arc sketch matrix") {
  // Construct the matrix by hand, then check against the to_matrix oracle.
  QuantizedMatrix m;
  for (int row = 0; row < kMatrixRows; ++row) {
    m.cells[row].fill(-1);
    m.cells[row][0] = static_cast<int>(CommandType::Eos);
  }
  auto set_row = [&m](int row, CommandType t, std::initializer_list<std::pair<int, int>> slots) {
    m.cells[row][0] = static_cast<int>(t);
    for (const auto& [slot_index, value] : slots) {
      m.cells[row][slot_index + 1] = static_cast<std::int16_t>(value);
    }
  };
  set_row(0, CommandType::Sol, {});
  set_row(1, CommandType::Line, {{slot::kX, 200}, {slot::kY, 128}});
  set_row(2, CommandType::Arc,
          {{slot::kX, 128}, {slot::kY, 128}, {slot::kSweep, 128}, {slot::kCcw, 1}});
  set_row(3, CommandType::Extrude,
          {{slot::kTheta, 128}, {slot::kPhi, 128}, {slot::kGamma, 128},
           {slot::kPx, 128}, {slot::kPy, 128}, {slot::kPz, 128}, {slot::kScale, 128},
           {slot::kE1, 160}, {slot::kE2, 128}, {slot::kBool, 0}, {slot::kExtent, 0}});

  const CadProgram p = from_matrix(m);
  REQUIRE(sequence_length(p) == 4);
  CHECK(p.commands[1] == Command::line(200, 128));
  CHECK(p.commands[2] == Command::arc(128, 128, 128, true));
  CHECK(to_matrix(p) == m);
}

TEST_CASE("from_matrix rejects unknown command indices and bad cells") {
  QuantizedMatrix m = to_matrix(minimal_circle_extrude());
  m.cells[0][0] = 9;
  CHECK_THROWS_AS(from_matrix(m), DecodeError);

  m = to_matrix(minimal_circle_extrude());
  m.cells[1][slot::kRadius + 1] = -1;  // required slot cleared
  CHECK_THROWS_AS(from_matrix(m), DecodeError);

  m = to_matrix(minimal_circle_extrude());
  m.cells[5][0] = static_cast<int>(CommandType::Sol);  // content after EOS
  CHECK_THROWS_AS(from_matrix(m), DecodeError);

  m = to_matrix(minimal_circle_extrude());
  m.cells[1][slot::kRadius + 1] = 300;  // out of range cell
  CHECK_THROWS_AS(from_matrix(m), DecodeError);
}

TEST_CASE("codec round trip over random well-formed programs") {
  Rng rng(1234);
  for (int i = 0; i < 500; ++i) {
    const CadProgram p = testutil::make_random_wellformed(rng);
    REQUIRE(well_formed(p));
    const QuantizedMatrix m = to_matrix(p);
    // Shape and cell-range invariant.
    for (int row = 0; row < kMatrixRows; ++row) {
      for (int col = 0; col < kMatrixCols; ++col) {
        CHECK(m.cells[row][col] >= -1);
        CHECK(m.cells[row][col] <= 255);
      }
    }
    CHECK(from_matrix(m) == p);
  }
}

TEST_CASE("dequantize endpoints and grid closure") {
  CHECK(dequantize(0, ParamKind::Coordinate) == doctest::Approx(-1.0).epsilon(1e-15));
  // 255 maps within one quantization step of +1.
  CHECK(dequantize(255, ParamKind::Coordinate) > 1.0 - 2.0 / 256.0);
  CHECK(dequantize(255, ParamKind::Coordinate) <= 1.0);
  CHECK(dequantize(128, ParamKind::Coordinate) == 0.0);
  CHECK(dequantize(0, ParamKind::SweepAngle) == 0.0);
  CHECK(dequantize(255, ParamKind::SweepAngle) < 6.2831853072);
  CHECK(dequantize(128, ParamKind::OrientAngle) == 0.0);
  CHECK(dequantize(192, ParamKind::OrientAngle) ==
        doctest::Approx(1.5707963268).epsilon(1e-12));

  for (const ParamKind kind : {ParamKind::Coordinate, ParamKind::Length,
                               ParamKind::SweepAngle, ParamKind::OrientAngle}) {
    for (int v = 0; v <= 255; ++v) {
      CHECK(quantize(dequantize(v, kind), kind) == v);
    }
  }
  CHECK_THROWS_AS(dequantize(-1, ParamKind::Coordinate), RangeError);
  CHECK_THROWS_AS(dequantize(256, ParamKind::Coordinate), RangeError);
}

TEST_CASE("sequence_length counts commands before EOS") {
  CHECK(sequence_length(minimal_circle_extrude()) == 3);
  CHECK(sequence_length(CadProgram{}) == 0);
}

TEST_CASE("sequence_length of a six-command fixture file") {
  const std::string text = R"({"commands":[
    {"type":"SOL"},
    {"type":"Line","x":192,"y":128},
    {"type":"Line","x":192,"y":192},
    {"type":"Line","x":128,"y":192},
    {"type":"Line","x":128,"y":128},
    {"type":"Extrude","theta":128,"phi":128,"gamma":128,"px":128,"py":128,"pz":128,
     "s":128,"e1":160,"e2":128,"bool":"new","extent":"one"}]})";
  // Independent count of the command entries in the source text.
  std::size_t counted = 0;
  for (std::size_t pos = text.find("\"type\""); pos != std::string::npos;
       pos = text.find("\"type\"", pos + 1)) {
    ++counted;
  }
  CHECK(counted == 6);
  CHECK(sequence_length(parse_program(text)) == counted);
}

TEST_CASE("grammar catches structural violations") {
  CadProgram p;
  p.commands.push_back(Command::sol());
  p.commands.push_back(Command::sol());  // empty loop
  p.commands.push_back(Command::circle(128, 128, 32));
  p.commands.push_back(Command::extrude(128, 128, 128, 128, 128, 128, 128, 160, 128,
                                        BoolOp::NewBody, ExtentType::OneSided));
  CHECK_FALSE(well_formed(p));

  CadProgram q = minimal_circle_extrude();
  q.commands.push_back(Command::sol());  // trailing unfinished sketch
  CHECK_FALSE(well_formed(q));

  CadProgram r = minimal_circle_extrude();
  r.commands.insert(r.commands.begin() + 2, Command::line(10, 10));  // chained circle
  CHECK_FALSE(well_formed(r));
}

TEST_CASE("parser and validator agree on arbitrary command lists") {
  // Differential test: serialize arbitrary (possibly ill-formed) command
  // lists and compare the parser verdict against check_grammar.
  Rng rng(99);
  int rejected = 0;
  for (int i = 0; i < 300; ++i) {
    CadProgram p = testutil::make_random_wellformed(rng);
    // Mutate structure half the time.
    if (rng.bernoulli(0.5) && !p.commands.empty()) {
      const std::size_t at = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(p.commands.size()) - 1));
      switch (rng.uniform_int(0, 2)) {
        case 0:
          p.commands.erase(p.commands.begin() + at);
          break;
        case 1:
          p.commands.insert(p.commands.begin() + at, Command::line(1, 2));
          break;
        default:
          p.commands.insert(p.commands.begin() + at, Command::sol());
          break;
      }
    }
    const bool valid = well_formed(p);
    bool parsed = true;
    try {
      (void)parse_program(serialize_program(p));
    } catch (const Error&) {
      parsed = false;
    }
    CHECK(parsed == valid);
    if (!valid) ++rejected;
  }
  CHECK(rejected > 30);  // the mutation actually exercised the reject path
}

TEST_CASE("binary matrix stream round trip") {
  Rng rng(5);
  std::vector<QuantizedMatrix> records;
  for (int i = 0; i < 17; ++i) {
    records.push_back(to_matrix(testutil::make_random_wellformed(rng)));
  }
  std::stringstream buf;
  write_matrix_stream(buf, records);
  const std::string payload = buf.str();
  CHECK(payload.substr(0, 4) == "CSQ1");
  CHECK(payload.size() == 4 + records.size() * 60 * 17 * 2);

  std::stringstream in(payload);
  const auto back = read_matrix_stream(in);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(back[i] == records[i]);
  }

  std::stringstream bad("XXXX");
  CHECK_THROWS_AS(read_matrix_stream(bad), FormatError);
  std::stringstream truncated(payload.substr(0, payload.size() - 3));
  CHECK_THROWS_AS(read_matrix_stream(truncated), FormatError);
}
