#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "cadseq/command.hpp"

namespace cadseq::synth {

enum class Split { Train = 0, Val = 1, Test = 2 };
enum class Provenance { Real = 0, Synthetic = 1 };

const char* split_name(Split s);
Split parse_split(const std::string& s);

struct ManifestEntry {
  std::string id;
  std::size_t length = 0;  // sequence length of the stored program
  Split split = Split::Train;
  Provenance provenance = Provenance::Real;
  std::string trace;  // "sources=<id>[,<id>];chain=<ops>" for synthetic entries
};

// Split-aware index of programs with per-(split, length) bookkeeping.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  // ids per (split, length), in entry order.
  std::map<std::pair<Split, std::size_t>, std::vector<std::string>> index() const;
  // lengths present per split.
  std::map<Split, std::vector<std::size_t>> lengths_by_split() const;
  std::size_t size() const { return entries.size(); }
};

// Source ids referenced by a synthetic entry's trace (empty for real entries).
std::vector<std::string> trace_sources(const std::string& trace);

// JSON Lines: {"id":..,"len":..,"split":"train|val|test","prov":"real|synthetic","trace":".."}
void write_manifest(std::ostream& out, const DatasetManifest& manifest);
DatasetManifest read_manifest(std::istream& in);

// A manifest plus its program store.
struct ProgramSet {
  DatasetManifest manifest;
  std::unordered_map<std::string, CadProgram> programs;

  const CadProgram& program(const std::string& id) const;
};

}  // namespace cadseq::synth
