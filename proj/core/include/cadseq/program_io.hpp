#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cadseq/command.hpp"
#include "cadseq/matrix.hpp"

namespace cadseq {

// Parses a program from its JSON document:
//   {"commands":[{"type":"SOL"},{"type":"Line","x":..,"y":..}, ...]}
// All numeric fields are quantized integers. An explicit trailing
// {"type":"EOS"} entry is accepted and must be the last entry. Throws
// SyntaxError (schema), RangeError (parameter range) or GrammarError
// (sketch/extrude structure).
CadProgram parse_program(const std::string& text, const std::string& source_id = "");

// Canonical JSON serialization; parse_program(serialize_program(p)) == p.
std::string serialize_program(const CadProgram& p);

// Flat binary matrix stream: magic "CSQ1", then per record 60x17 little-endian
// int16 cells in row-major order, records concatenated.
void write_matrix_stream(std::ostream& out, const std::vector<QuantizedMatrix>& records);
std::vector<QuantizedMatrix> read_matrix_stream(std::istream& in);

}  // namespace cadseq
