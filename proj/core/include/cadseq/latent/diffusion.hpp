#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cadseq/latent/contrastive.hpp"
#include "cadseq/rng.hpp"

namespace cadseq::latent {

// Cumulative signal coefficients alpha_bar_t for t in [0, T]; alpha_bar_0 = 1
// and the sequence is monotone decreasing within (0, 1].
struct NoiseSchedule {
  std::vector<double> alpha_bar;  // size T + 1

  std::size_t steps() const { return alpha_bar.size() - 1; }
  double at(std::size_t t) const { return alpha_bar[t]; }
  void validate() const;

  // Linear alpha_bar from 1 down to the terminal value of the customary
  // beta-linear schedule (computed by ddpm_beta_linear at the same T).
  static NoiseSchedule linear(std::size_t steps = 1000);
  // alpha_bar_t = prod_{s<=t} (1 - beta_s) with beta linear in
  // [beta_start, beta_end].
  static NoiseSchedule ddpm_beta_linear(std::size_t steps = 1000,
                                        double beta_start = 1e-4,
                                        double beta_end = 0.02);
};

// Closed-form forward noising z_t = sqrt(alpha_bar_t) z0 +
// sqrt(1 - alpha_bar_t) eps. The caller supplies eps for determinism.
Vector diffuse_forward(const Vector& z0, std::size_t t, const NoiseSchedule& schedule,
                       const Vector& eps);

// Any deterministic noise predictor (z_t, t, z_M) -> eps_hat.
using EpsilonPredictor =
    std::function<Vector(const Vector& z_t, std::size_t t, const Vector& z_m)>;

// Reference predictor: the conditioning latent is concatenated with the noisy
// latent and a two-feature time embedding, projected to a hidden layer
// (tanh), and mapped back to latent width with a residual connection from
// z_t. Weights live in one flat parameter vector:
//   [W1 (hidden x in), b1 (hidden), W2 (dim x hidden), b2 (dim)].
struct EpsilonMlp {
  std::size_t latent_dim = 0;
  std::size_t cond_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t total_steps = 1000;  // normalizes t for the time embedding
  std::vector<double> params;

  static EpsilonMlp create(std::size_t latent_dim, std::size_t cond_dim,
                           std::size_t hidden_dim, std::size_t total_steps,
                           std::uint64_t seed);

  std::size_t input_dim() const { return latent_dim + cond_dim + 2; }
  std::size_t param_count() const;
  Vector forward(const Vector& z_t, std::size_t t, const Vector& z_m) const;
  EpsilonPredictor as_predictor() const;
};

// || eps - predictor(diffuse_forward(z0, t, schedule, eps), t, z_m) ||^2.
double diffusion_loss(const EpsilonPredictor& predictor, const Vector& z0,
                      const Vector& z_m, std::size_t t, const NoiseSchedule& schedule,
                      const Vector& eps);

// Same loss for the reference MLP, plus its analytic parameter gradient.
double diffusion_loss_grad(const EpsilonMlp& mlp, const Vector& z0, const Vector& z_m,
                           std::size_t t, const NoiseSchedule& schedule,
                           const Vector& eps, std::vector<double>* grad_params);

}  // namespace cadseq::latent
