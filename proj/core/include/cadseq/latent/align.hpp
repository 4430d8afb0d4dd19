#pragma once

#include <cstdint>
#include <vector>

#include "cadseq/latent/contrastive.hpp"

namespace cadseq::latent {

// Row-major linear map from feature space to the shared latent space.
struct LinearEncoder {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<double> weights;  // out_dim x in_dim

  Vector encode(const Vector& features) const;
};

struct AlignTrainConfig {
  std::size_t latent_dim = 16;
  std::size_t epochs = 200;
  double learning_rate = 0.5;
  double temperature = 0.1;
  std::uint64_t seed = 0;
};

struct AlignTrainResult {
  LinearEncoder encoder_a;
  LinearEncoder encoder_b;
  std::vector<double> loss_curve;  // one full-batch loss per epoch
};

// Trains two linear encoders by full-batch gradient descent on the InfoNCE
// loss over the paired features. Throws NonFiniteLoss if the loss diverges.
AlignTrainResult toy_align_train(const std::vector<std::pair<Vector, Vector>>& pairs,
                                 const AlignTrainConfig& config);

// A linearly alignable two-modality task: both feature vectors are random
// orthogonal transforms of a shared latent plus isotropic noise. Used by the
// demo subcommand and the end-to-end alignment checks.
struct AlignmentTask {
  std::vector<std::pair<Vector, Vector>> train;
  std::vector<std::pair<Vector, Vector>> held_out;
};

AlignmentTask make_linear_alignment_task(std::size_t train_pairs,
                                         std::size_t held_out_pairs,
                                         std::size_t latent_dim, std::size_t dim_a,
                                         std::size_t dim_b, double noise,
                                         std::uint64_t seed);

// Top-1 retrieval accuracy of encoded held-out pairs (queries = modality B,
// library = modality A) over bootstrapped batches of `library_batch`.
double alignment_retrieval_top1(const AlignTrainResult& model,
                                const std::vector<std::pair<Vector, Vector>>& pairs,
                                std::size_t library_batch, std::size_t trials,
                                std::uint64_t seed);

}  // namespace cadseq::latent
