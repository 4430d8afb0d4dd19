#pragma once

#include <vector>

namespace cadseq::latent {

using Vector = std::vector<double>;

// Cosine similarity u.v / (|u||v|). Throws ZeroVector on zero-norm input.
double cosine_similarity(const Vector& u, const Vector& v);

// A batch of B cross-modal positive pairs: row i of cad pairs with row i of
// geo. The 2B stacked embeddings (cad first) form the contrastive candidates.
struct ContrastiveBatch {
  std::vector<Vector> cad;  // z_C, B rows
  std::vector<Vector> geo;  // z_M, B rows
  double temperature = 0.07;

  std::size_t batch_size() const { return cad.size(); }
  void validate() const;  // B >= 2, tau > 0, consistent dimensions
};

// InfoNCE over the 2B stacked embeddings: for each anchor, the positive is
// its cross-modal counterpart and the denominator runs over all other 2B - 1
// embeddings; the loss is the mean over both directions. Equals ln(2B - 1)
// when all embeddings coincide.
double infonce_loss(const ContrastiveBatch& batch);

struct ContrastiveGradient {
  std::vector<Vector> cad;  // dL/dz_C
  std::vector<Vector> geo;  // dL/dz_M
};

// Analytic gradient of infonce_loss w.r.t. every embedding.
ContrastiveGradient infonce_gradient(const ContrastiveBatch& batch);

}  // namespace cadseq::latent
