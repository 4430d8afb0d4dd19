#include "cadseq/latent/diffusion.hpp"

#include <cmath>

#include "cadseq/errors.hpp"

namespace cadseq::latent {

void NoiseSchedule::validate() const {
  if (alpha_bar.size() < 2) {
    throw Error("noise schedule needs at least one step");
  }
  if (alpha_bar[0] != 1.0) {
    throw Error("alpha_bar_0 must be 1");
  }
  for (std::size_t t = 1; t < alpha_bar.size(); ++t) {
    if (!(alpha_bar[t] > 0.0 && alpha_bar[t] <= 1.0)) {
      throw Error("alpha_bar outside (0, 1]");
    }
    if (alpha_bar[t] > alpha_bar[t - 1]) {
      throw Error("alpha_bar must be monotone decreasing");
    }
  }
}

NoiseSchedule NoiseSchedule::ddpm_beta_linear(std::size_t steps, double beta_start,
                                              double beta_end) {
  NoiseSchedule s;
  s.alpha_bar.resize(steps + 1);
  s.alpha_bar[0] = 1.0;
  double acc = 1.0;
  for (std::size_t t = 1; t <= steps; ++t) {
    const double frac =
        steps == 1 ? 0.0 : static_cast<double>(t - 1) / static_cast<double>(steps - 1);
    const double beta = beta_start + (beta_end - beta_start) * frac;
    acc *= 1.0 - beta;
    s.alpha_bar[t] = acc;
  }
  s.validate();
  return s;
}

NoiseSchedule NoiseSchedule::linear(std::size_t steps) {
  const NoiseSchedule ref = ddpm_beta_linear(steps);
  const double terminal = ref.alpha_bar.back();
  NoiseSchedule s;
  s.alpha_bar.resize(steps + 1);
  for (std::size_t t = 0; t <= steps; ++t) {
    const double frac = static_cast<double>(t) / static_cast<double>(steps);
    s.alpha_bar[t] = 1.0 - frac * (1.0 - terminal);
  }
  s.validate();
  return s;
}

Vector diffuse_forward(const Vector& z0, std::size_t t, const NoiseSchedule& schedule,
                       const Vector& eps) {
  if (t < 1 || t > schedule.steps()) {
    throw Error("diffusion step outside [1, T]");
  }
  if (z0.size() != eps.size()) {
    throw DimensionMismatch("latent and noise dimensions differ");
  }
  const double ab = schedule.at(t);
  const double signal = std::sqrt(ab);
  const double noise = std::sqrt(1.0 - ab);
  Vector out(z0.size());
  for (std::size_t i = 0; i < z0.size(); ++i) {
    out[i] = signal * z0[i] + noise * eps[i];
  }
  return out;
}

EpsilonMlp EpsilonMlp::create(std::size_t latent_dim, std::size_t cond_dim,
                              std::size_t hidden_dim, std::size_t total_steps,
                              std::uint64_t seed) {
  EpsilonMlp mlp;
  mlp.latent_dim = latent_dim;
  mlp.cond_dim = cond_dim;
  mlp.hidden_dim = hidden_dim;
  mlp.total_steps = total_steps;
  mlp.params.resize(mlp.param_count());
  Rng rng(seed);
  const double scale_in = 1.0 / std::sqrt(static_cast<double>(mlp.input_dim()));
  const double scale_out = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  std::size_t idx = 0;
  for (std::size_t i = 0; i < hidden_dim * mlp.input_dim(); ++i) {
    mlp.params[idx++] = rng.normal() * scale_in;
  }
  idx += hidden_dim;  // b1 zeros
  for (std::size_t i = 0; i < latent_dim * hidden_dim; ++i) {
    mlp.params[idx++] = rng.normal() * scale_out;
  }
  return mlp;
}

std::size_t EpsilonMlp::param_count() const {
  return hidden_dim * input_dim() + hidden_dim + latent_dim * hidden_dim + latent_dim;
}

namespace {

struct MlpViews {
  const double* w1;
  const double* b1;
  const double* w2;
  const double* b2;
};

MlpViews views(const EpsilonMlp& mlp, const std::vector<double>& params) {
  MlpViews v;
  v.w1 = params.data();
  v.b1 = v.w1 + mlp.hidden_dim * mlp.input_dim();
  v.w2 = v.b1 + mlp.hidden_dim;
  v.b2 = v.w2 + mlp.latent_dim * mlp.hidden_dim;
  return v;
}

Vector build_input(const EpsilonMlp& mlp, const Vector& z_t, std::size_t t,
                   const Vector& z_m) {
  Vector x;
  x.reserve(mlp.input_dim());
  x.insert(x.end(), z_t.begin(), z_t.end());
  x.insert(x.end(), z_m.begin(), z_m.end());
  const double tn =
      static_cast<double>(t) / static_cast<double>(std::max<std::size_t>(mlp.total_steps, 1));
  x.push_back(std::sin(6.283185307179586 * tn));
  x.push_back(std::cos(6.283185307179586 * tn));
  return x;
}

}  // namespace

Vector EpsilonMlp::forward(const Vector& z_t, std::size_t t, const Vector& z_m) const {
  if (z_t.size() != latent_dim || z_m.size() != cond_dim) {
    throw DimensionMismatch("predictor input dimensions differ from configuration");
  }
  const MlpViews v = views(*this, params);
  const Vector x = build_input(*this, z_t, t, z_m);

  Vector h(hidden_dim);
  for (std::size_t i = 0; i < hidden_dim; ++i) {
    double acc = v.b1[i];
    const double* row = v.w1 + i * input_dim();
    for (std::size_t k = 0; k < x.size(); ++k) acc += row[k] * x[k];
    h[i] = std::tanh(acc);
  }
  Vector out(latent_dim);
  for (std::size_t i = 0; i < latent_dim; ++i) {
    double acc = v.b2[i];
    const double* row = v.w2 + i * hidden_dim;
    for (std::size_t k = 0; k < hidden_dim; ++k) acc += row[k] * h[k];
    out[i] = acc + z_t[i];  // residual connection
  }
  return out;
}

EpsilonPredictor EpsilonMlp::as_predictor() const {
  return [self = *this](const Vector& z_t, std::size_t t, const Vector& z_m) {
    return self.forward(z_t, t, z_m);
  };
}

double diffusion_loss(const EpsilonPredictor& predictor, const Vector& z0,
                      const Vector& z_m, std::size_t t, const NoiseSchedule& schedule,
                      const Vector& eps) {
  const Vector z_t = diffuse_forward(z0, t, schedule, eps);
  const Vector predicted = predictor(z_t, t, z_m);
  if (predicted.size() != eps.size()) {
    throw DimensionMismatch("predictor output dimension differs from noise");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double d = eps[i] - predicted[i];
    loss += d * d;
  }
  return loss;
}

double diffusion_loss_grad(const EpsilonMlp& mlp, const Vector& z0, const Vector& z_m,
                           std::size_t t, const NoiseSchedule& schedule,
                           const Vector& eps, std::vector<double>* grad_params) {
  const Vector z_t = diffuse_forward(z0, t, schedule, eps);
  const MlpViews v = views(mlp, mlp.params);
  const Vector x = build_input(mlp, z_t, t, z_m);

  Vector h(mlp.hidden_dim);
  for (std::size_t i = 0; i < mlp.hidden_dim; ++i) {
    double acc = v.b1[i];
    const double* row = v.w1 + i * mlp.input_dim();
    for (std::size_t k = 0; k < x.size(); ++k) acc += row[k] * x[k];
    h[i] = std::tanh(acc);
  }
  Vector out(mlp.latent_dim);
  double loss = 0.0;
  Vector d_out(mlp.latent_dim);
  for (std::size_t i = 0; i < mlp.latent_dim; ++i) {
    double acc = v.b2[i];
    const double* row = v.w2 + i * mlp.hidden_dim;
    for (std::size_t k = 0; k < mlp.hidden_dim; ++k) acc += row[k] * h[k];
    out[i] = acc + z_t[i];
    const double diff = eps[i] - out[i];
    loss += diff * diff;
    d_out[i] = -2.0 * diff;  // dL/d out_i
  }

  grad_params->assign(mlp.param_count(), 0.0);
  double* g_w1 = grad_params->data();
  double* g_b1 = g_w1 + mlp.hidden_dim * mlp.input_dim();
  double* g_w2 = g_b1 + mlp.hidden_dim;
  double* g_b2 = g_w2 + mlp.latent_dim * mlp.hidden_dim;

  Vector d_h(mlp.hidden_dim, 0.0);
  for (std::size_t i = 0; i < mlp.latent_dim; ++i) {
    g_b2[i] = d_out[i];
    double* row = g_w2 + i * mlp.hidden_dim;
    const double* w_row = v.w2 + i * mlp.hidden_dim;
    for (std::size_t k = 0; k < mlp.hidden_dim; ++k) {
      row[k] = d_out[i] * h[k];
      d_h[k] += d_out[i] * w_row[k];
    }
  }
  for (std::size_t i = 0; i < mlp.hidden_dim; ++i) {
    const double d_u = d_h[i] * (1.0 - h[i] * h[i]);
    g_b1[i] = d_u;
    double* row = g_w1 + i * mlp.input_dim();
    for (std::size_t k = 0; k < x.size(); ++k) {
      row[k] = d_u * x[k];
    }
  }
  return loss;
}

}  // namespace cadseq::latent
