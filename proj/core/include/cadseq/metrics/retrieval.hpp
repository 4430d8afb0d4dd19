#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace cadseq::metrics {

// Embedding vectors with their ids; all vectors share one dimension.
struct EmbeddingSet {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> vectors;
  std::string modality;

  std::size_t size() const { return ids.size(); }
  std::size_t dim() const { return vectors.empty() ? 0 : vectors[0].size(); }
  void validate() const;  // dimension consistency, finite components
};

double cosine_similarity_vec(const std::vector<double>& u, const std::vector<double>& v);

struct RetrievalParams {
  std::size_t top_n = 1;
  std::size_t library_batch = 10;  // R_B
  std::size_t trials = 100;
  std::uint64_t seed = 0;
};

// Bootstrapped top-N retrieval accuracy: per trial and per query, a batch of
// R_B library entries containing the query's true match is sampled, entries
// are ranked by cosine similarity to the query, and the trial scores the
// fraction of queries whose match lands in the top N. Returns the mean over
// trials. `pairs` maps query id -> library id. Throws DimensionMismatch.
double retrieval_topn(const EmbeddingSet& queries, const EmbeddingSet& library,
                      const std::unordered_map<std::string, std::string>& pairs,
                      const RetrievalParams& params);

// Flat binary embedding format: magic "EMB1", uint32 count, uint32 dim
// (little-endian), then count*dim float32 values row-major. Ids travel in a
// JSON sidecar handled by the CLI.
void write_embeddings(std::ostream& out, const EmbeddingSet& set);
EmbeddingSet read_embeddings(std::istream& in);

}  // namespace cadseq::metrics
