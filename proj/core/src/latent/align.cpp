#include "cadseq/latent/align.hpp"

#include <cmath>

#include "cadseq/errors.hpp"
#include "cadseq/metrics/retrieval.hpp"
#include "cadseq/rng.hpp"

namespace cadseq::latent {

Vector LinearEncoder::encode(const Vector& features) const {
  if (features.size() != in_dim) {
    throw DimensionMismatch("encoder input dimension differs from configuration");
  }
  Vector out(out_dim, 0.0);
  for (std::size_t i = 0; i < out_dim; ++i) {
    const double* row = weights.data() + i * in_dim;
    double acc = 0.0;
    for (std::size_t k = 0; k < in_dim; ++k) acc += row[k] * features[k];
    out[i] = acc;
  }
  return out;
}

namespace {

LinearEncoder init_encoder(std::size_t in_dim, std::size_t out_dim, Rng& rng) {
  LinearEncoder enc;
  enc.in_dim = in_dim;
  enc.out_dim = out_dim;
  enc.weights.resize(in_dim * out_dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(in_dim));
  for (double& w : enc.weights) w = rng.normal() * scale;
  return enc;
}

}  // namespace

AlignTrainResult toy_align_train(const std::vector<std::pair<Vector, Vector>>& pairs,
                                 const AlignTrainConfig& config) {
  if (pairs.size() < 32) {
    throw ConfigError("alignment training needs at least 32 pairs");
  }
  const std::size_t dim_a = pairs[0].first.size();
  const std::size_t dim_b = pairs[0].second.size();

  Rng rng(derive_seed(config.seed, {0xa11911ull}));
  AlignTrainResult result;
  result.encoder_a = init_encoder(dim_a, config.latent_dim, rng);
  result.encoder_b = init_encoder(dim_b, config.latent_dim, rng);

  const std::size_t n = pairs.size();
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    ContrastiveBatch batch;
    batch.temperature = config.temperature;
    batch.cad.reserve(n);
    batch.geo.reserve(n);
    for (const auto& [fa, fb] : pairs) {
      batch.cad.push_back(result.encoder_a.encode(fa));
      batch.geo.push_back(result.encoder_b.encode(fb));
    }
    const double loss = infonce_loss(batch);
    if (!std::isfinite(loss)) {
      throw NonFiniteLoss("alignment training diverged at epoch " +
                          std::to_string(epoch));
    }
    result.loss_curve.push_back(loss);

    const ContrastiveGradient grad = infonce_gradient(batch);
    // Chain rule through the linear encoders: dL/dW = sum_i dL/dz_i outer f_i.
    for (std::size_t i = 0; i < n; ++i) {
      const Vector& fa = pairs[i].first;
      const Vector& fb = pairs[i].second;
      for (std::size_t o = 0; o < config.latent_dim; ++o) {
        double* row_a = result.encoder_a.weights.data() + o * dim_a;
        const double ga = grad.cad[i][o] * config.learning_rate;
        for (std::size_t k = 0; k < dim_a; ++k) row_a[k] -= ga * fa[k];
        double* row_b = result.encoder_b.weights.data() + o * dim_b;
        const double gb = grad.geo[i][o] * config.learning_rate;
        for (std::size_t k = 0; k < dim_b; ++k) row_b[k] -= gb * fb[k];
      }
    }
  }
  return result;
}

namespace {

// Orthonormal columns via Gram-Schmidt on a seeded Gaussian matrix.
std::vector<Vector> orthonormal_columns(std::size_t rows, std::size_t cols, Rng& rng) {
  std::vector<Vector> basis;
  for (std::size_t c = 0; c < cols; ++c) {
    Vector v(rows);
    for (double& x : v) x = rng.normal();
    for (const Vector& b : basis) {
      double d = 0.0;
      for (std::size_t i = 0; i < rows; ++i) d += v[i] * b[i];
      for (std::size_t i = 0; i < rows; ++i) v[i] -= d * b[i];
    }
    double nn = 0.0;
    for (const double x : v) nn += x * x;
    const double inv = 1.0 / std::sqrt(nn);
    for (double& x : v) x *= inv;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

AlignmentTask make_linear_alignment_task(std::size_t train_pairs,
                                         std::size_t held_out_pairs,
                                         std::size_t latent_dim, std::size_t dim_a,
                                         std::size_t dim_b, double noise,
                                         std::uint64_t seed) {
  Rng rng(seed);
  const auto qa = orthonormal_columns(dim_a, latent_dim, rng);
  const auto qb = orthonormal_columns(dim_b, latent_dim, rng);

  auto make_pair = [&]() {
    Vector g(latent_dim);
    for (double& x : g) x = rng.normal();
    Vector fa(dim_a, 0.0), fb(dim_b, 0.0);
    for (std::size_t c = 0; c < latent_dim; ++c) {
      for (std::size_t i = 0; i < dim_a; ++i) fa[i] += qa[c][i] * g[c];
      for (std::size_t i = 0; i < dim_b; ++i) fb[i] += qb[c][i] * g[c];
    }
    for (double& x : fa) x += noise * rng.normal();
    for (double& x : fb) x += noise * rng.normal();
    return std::make_pair(fa, fb);
  };

  AlignmentTask task;
  for (std::size_t i = 0; i < train_pairs; ++i) task.train.push_back(make_pair());
  for (std::size_t i = 0; i < held_out_pairs; ++i) task.held_out.push_back(make_pair());
  return task;
}

double alignment_retrieval_top1(const AlignTrainResult& model,
                                const std::vector<std::pair<Vector, Vector>>& pairs,
                                std::size_t library_batch, std::size_t trials,
                                std::uint64_t seed) {
  metrics::EmbeddingSet queries, library;
  std::unordered_map<std::string, std::string> truth;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string id = std::to_string(i);
    library.ids.push_back(id);
    library.vectors.push_back(model.encoder_a.encode(pairs[i].first));
    queries.ids.push_back(id);
    queries.vectors.push_back(model.encoder_b.encode(pairs[i].second));
    truth[id] = id;
  }
  metrics::RetrievalParams params;
  params.top_n = 1;
  params.library_batch = library_batch;
  params.trials = trials;
  params.seed = seed;
  return metrics::retrieval_topn(queries, library, truth, params);
}

}  // namespace cadseq::latent
