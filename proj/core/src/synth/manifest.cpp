#include "cadseq/synth/manifest.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "cadseq/errors.hpp"

namespace cadseq::synth {

using nlohmann::json;

const char* split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "?";
}

Split parse_split(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  throw FormatError("unknown split '" + s + "'");
}

std::map<std::pair<Split, std::size_t>, std::vector<std::string>>
DatasetManifest::index() const {
  std::map<std::pair<Split, std::size_t>, std::vector<std::string>> idx;
  for (const ManifestEntry& e : entries) {
    idx[{e.split, e.length}].push_back(e.id);
  }
  return idx;
}

std::map<Split, std::vector<std::size_t>> DatasetManifest::lengths_by_split() const {
  std::map<Split, std::map<std::size_t, bool>> seen;
  for (const ManifestEntry& e : entries) {
    seen[e.split][e.length] = true;
  }
  std::map<Split, std::vector<std::size_t>> out;
  for (const auto& [split, lengths] : seen) {
    for (const auto& [len, _] : lengths) out[split].push_back(len);
  }
  return out;
}

std::vector<std::string> trace_sources(const std::string& trace) {
  std::vector<std::string> out;
  const std::string prefix = "sources=";
  const std::size_t start = trace.find(prefix);
  if (start == std::string::npos) return out;
  std::size_t pos = start + prefix.size();
  const std::size_t end = trace.find(';', pos);
  const std::string list =
      trace.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
  std::size_t item_start = 0;
  while (item_start <= list.size()) {
    const std::size_t comma = list.find(',', item_start);
    const std::string item = list.substr(
        item_start, comma == std::string::npos ? std::string::npos : comma - item_start);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    item_start = comma + 1;
  }
  return out;
}

void write_manifest(std::ostream& out, const DatasetManifest& manifest) {
  for (const ManifestEntry& e : manifest.entries) {
    json line;
    line["id"] = e.id;
    line["len"] = e.length;
    line["split"] = split_name(e.split);
    line["prov"] = e.provenance == Provenance::Real ? "real" : "synthetic";
    line["trace"] = e.trace;
    out << line.dump() << "\n";
  }
}

DatasetManifest read_manifest(std::istream& in) {
  DatasetManifest manifest;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": " + e.what());
    }
    ManifestEntry e;
    e.id = doc.at("id").get<std::string>();
    e.length = doc.at("len").get<std::size_t>();
    e.split = parse_split(doc.at("split").get<std::string>());
    const std::string prov = doc.at("prov").get<std::string>();
    if (prov == "real") {
      e.provenance = Provenance::Real;
    } else if (prov == "synthetic") {
      e.provenance = Provenance::Synthetic;
    } else {
      throw FormatError("manifest line " + std::to_string(line_no) +
                        ": unknown provenance '" + prov + "'");
    }
    if (doc.contains("trace")) e.trace = doc["trace"].get<std::string>();
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

const CadProgram& ProgramSet::program(const std::string& id) const {
  const auto it = programs.find(id);
  if (it == programs.end()) {
    throw FormatError("program '" + id + "' missing from store");
  }
  return it->second;
}

}  // namespace cadseq::synth
