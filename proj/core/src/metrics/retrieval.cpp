#include "cadseq/metrics/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "cadseq/errors.hpp"
#include "cadseq/rng.hpp"

namespace cadseq::metrics {

void EmbeddingSet::validate() const {
  if (ids.size() != vectors.size()) {
    throw DimensionMismatch("embedding ids and vectors differ in count");
  }
  const std::size_t d = dim();
  for (const auto& v : vectors) {
    if (v.size() != d) {
      throw DimensionMismatch("embedding vectors differ in dimension");
    }
    for (const double x : v) {
      if (!std::isfinite(x)) throw DimensionMismatch("non-finite embedding component");
    }
  }
}

double cosine_similarity_vec(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size()) {
    throw DimensionMismatch("cosine similarity over mismatched dimensions");
  }
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw ZeroVector("cosine similarity of a zero vector");
  return std::clamp(uv / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

namespace {

// Floyd's algorithm: k distinct values from [0, n) excluding `exclude`,
// deterministic under the caller's rng stream.
std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k,
                                         std::size_t exclude, Rng& rng) {
  // Work over the n-1 admissible values by skipping `exclude`.
  auto remap = [exclude](std::size_t v) { return v >= exclude ? v + 1 : v; };
  const std::size_t m = n - 1;
  std::unordered_set<std::size_t> chosen;
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t j = m - k; j < m; ++j) {
    const std::size_t t =
        static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(j)));
    if (chosen.insert(t).second) {
      out.push_back(remap(t));
    } else {
      chosen.insert(j);
      out.push_back(remap(j));
    }
  }
  return out;
}

}  // namespace

double retrieval_topn(const EmbeddingSet& queries, const EmbeddingSet& library,
                      const std::unordered_map<std::string, std::string>& pairs,
                      const RetrievalParams& params) {
  queries.validate();
  library.validate();
  if (queries.dim() != library.dim()) {
    throw DimensionMismatch("query and library dimensions differ");
  }
  if (params.library_batch > library.size()) {
    throw ConfigError("library batch exceeds library size");
  }
  if (params.library_batch == 0 || params.trials == 0 || queries.size() == 0) {
    throw ConfigError("retrieval requires nonzero batch, trials and queries");
  }

  std::unordered_map<std::string, std::size_t> library_index;
  for (std::size_t i = 0; i < library.size(); ++i) {
    library_index[library.ids[i]] = i;
  }
  std::vector<std::size_t> truth(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto pair_it = pairs.find(queries.ids[q]);
    if (pair_it == pairs.end()) {
      throw ConfigError("query '" + queries.ids[q] + "' has no true match");
    }
    const auto lib_it = library_index.find(pair_it->second);
    if (lib_it == library_index.end()) {
      throw ConfigError("true match '" + pair_it->second + "' not in library");
    }
    truth[q] = lib_it->second;
  }

  double accuracy_sum = 0.0;
  for (std::size_t trial = 0; trial < params.trials; ++trial) {
    Rng rng(derive_seed(params.seed, {trial}));
    std::size_t successes = 0;
    for (std::size_t q = 0; q < queries.size(); ++q) {
      const std::vector<double>& query = queries.vectors[q];
      const double true_sim =
          cosine_similarity_vec(query, library.vectors[truth[q]]);
      // The batch is the true match plus R_B - 1 distinct others; the match
      // ranks in the top N iff fewer than N others beat it strictly.
      std::size_t beaten_by = 0;
      for (const std::size_t other :
           sample_distinct(library.size(), params.library_batch - 1, truth[q], rng)) {
        if (cosine_similarity_vec(query, library.vectors[other]) > true_sim) {
          ++beaten_by;
          if (beaten_by >= params.top_n) break;
        }
      }
      if (beaten_by < params.top_n) ++successes;
    }
    accuracy_sum +=
        static_cast<double>(successes) / static_cast<double>(queries.size());
  }
  return accuracy_sum / static_cast<double>(params.trials);
}

void write_embeddings(std::ostream& out, const EmbeddingSet& set) {
  set.validate();
  out.write("EMB1", 4);
  auto write_u32 = [&out](std::uint32_t v) {
    const char bytes[4] = {
        static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
        static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(bytes, 4);
  };
  write_u32(static_cast<std::uint32_t>(set.size()));
  write_u32(static_cast<std::uint32_t>(set.dim()));
  for (const auto& vec : set.vectors) {
    for (const double x : vec) {
      const float f = static_cast<float>(x);
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      write_u32(u);
    }
  }
}

EmbeddingSet read_embeddings(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string(magic, 4) != "EMB1") {
    throw FormatError("missing EMB1 magic bytes");
  }
  auto read_u32 = [&in]() {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) {
      throw FormatError("truncated embedding file");
    }
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
  };
  const std::uint32_t count = read_u32();
  const std::uint32_t dim = read_u32();
  EmbeddingSet set;
  set.vectors.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::vector<double> vec(dim);
    for (std::uint32_t d = 0; d < dim; ++d) {
      const std::uint32_t u = read_u32();
      float f;
      std::memcpy(&f, &u, 4);
      vec[d] = f;
    }
    set.vectors.push_back(std::move(vec));
    set.ids.push_back(std::to_string(i));  // placeholder ids; sidecar overrides
  }
  return set;
}

}  // namespace cadseq::metrics
