#include "cadseq/latent/contrastive.hpp"

#include <algorithm>
#include <cmath>

#include "cadseq/errors.hpp"

namespace cadseq::latent {

double cosine_similarity(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) {
    throw DimensionMismatch("cosine similarity over mismatched dimensions");
  }
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) {
    throw ZeroVector("cosine similarity of a zero vector");
  }
  return std::clamp(uv / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

void ContrastiveBatch::validate() const {
  if (cad.size() != geo.size()) {
    throw DimensionMismatch("contrastive batch with unpaired embeddings");
  }
  if (cad.size() < 2) {
    throw DimensionMismatch("contrastive batch needs B >= 2");
  }
  if (temperature <= 0.0) {
    throw DimensionMismatch("temperature must be positive");
  }
  const std::size_t d = cad[0].size();
  for (const Vector& v : cad) {
    if (v.size() != d) throw DimensionMismatch("embedding dimensions differ");
  }
  for (const Vector& v : geo) {
    if (v.size() != d) throw DimensionMismatch("embedding dimensions differ");
  }
}

namespace {

struct Stacked {
  std::vector<const Vector*> rows;  // 2B rows, cad then geo
  std::vector<double> norms;
  std::size_t partner(std::size_t i) const {
    const std::size_t b = rows.size() / 2;
    return i < b ? i + b : i - b;
  }
};

Stacked stack(const ContrastiveBatch& batch) {
  Stacked s;
  for (const Vector& v : batch.cad) s.rows.push_back(&v);
  for (const Vector& v : batch.geo) s.rows.push_back(&v);
  s.norms.resize(s.rows.size());
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    double nn = 0.0;
    for (const double x : *s.rows[i]) nn += x * x;
    if (nn == 0.0) throw ZeroVector("zero embedding in contrastive batch");
    s.norms[i] = std::sqrt(nn);
  }
  return s;
}

double dot_rows(const Vector& a, const Vector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
  return d;
}

// Row-stochastic softmax weights over k != i of exp(s_ik / tau).
void softmax_row(const std::vector<double>& sims, std::size_t i, double tau,
                 std::vector<double>* out) {
  double max_a = -1e300;
  for (std::size_t k = 0; k < sims.size(); ++k) {
    if (k != i) max_a = std::max(max_a, sims[k] / tau);
  }
  double denom = 0.0;
  for (std::size_t k = 0; k < sims.size(); ++k) {
    (*out)[k] = 0.0;
    if (k == i) continue;
    (*out)[k] = std::exp(sims[k] / tau - max_a);
    denom += (*out)[k];
  }
  for (std::size_t k = 0; k < sims.size(); ++k) (*out)[k] /= denom;
}

}  // namespace

double infonce_loss(const ContrastiveBatch& batch) {
  batch.validate();
  const Stacked s = stack(batch);
  const std::size_t total = s.rows.size();
  const double tau = batch.temperature;

  double loss = 0.0;
  std::vector<double> sims(total);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t k = 0; k < total; ++k) {
      sims[k] = k == i ? 0.0
                       : dot_rows(*s.rows[i], *s.rows[k]) / (s.norms[i] * s.norms[k]);
    }
    const std::size_t j = s.partner(i);
    double max_a = -1e300;
    for (std::size_t k = 0; k < total; ++k) {
      if (k != i) max_a = std::max(max_a, sims[k] / tau);
    }
    double denom = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
      if (k != i) denom += std::exp(sims[k] / tau - max_a);
    }
    loss += -(sims[j] / tau - max_a) + std::log(denom);
  }
  return loss / static_cast<double>(total);
}

ContrastiveGradient infonce_gradient(const ContrastiveBatch& batch) {
  batch.validate();
  const Stacked s = stack(batch);
  const std::size_t total = s.rows.size();
  const std::size_t dim = s.rows[0]->size();
  const double tau = batch.temperature;

  std::vector<Vector> grad(total, Vector(dim, 0.0));
  std::vector<double> sims(total);
  std::vector<double> weights(total);

  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t k = 0; k < total; ++k) {
      sims[k] = k == i ? 0.0
                       : dot_rows(*s.rows[i], *s.rows[k]) / (s.norms[i] * s.norms[k]);
    }
    softmax_row(sims, i, tau, &weights);
    const std::size_t j = s.partner(i);

    for (std::size_t k = 0; k < total; ++k) {
      if (k == i) continue;
      // dL/ds_ik for the i-th anchor term, averaged over the 2B anchors.
      const double w =
          (weights[k] - (k == j ? 1.0 : 0.0)) / (tau * static_cast<double>(total));
      if (w == 0.0) continue;
      const Vector& zi = *s.rows[i];
      const Vector& zk = *s.rows[k];
      const double inv_ik = 1.0 / (s.norms[i] * s.norms[k]);
      const double s_ik = sims[k];
      const double inv_ii = 1.0 / (s.norms[i] * s.norms[i]);
      const double inv_kk = 1.0 / (s.norms[k] * s.norms[k]);
      for (std::size_t d = 0; d < dim; ++d) {
        grad[i][d] += w * (zk[d] * inv_ik - s_ik * zi[d] * inv_ii);
        grad[k][d] += w * (zi[d] * inv_ik - s_ik * zk[d] * inv_kk);
      }
    }
  }

  ContrastiveGradient out;
  const std::size_t b = total / 2;
  out.cad.assign(grad.begin(), grad.begin() + b);
  out.geo.assign(grad.begin() + b, grad.end());
  return out;
}

}  // namespace cadseq::latent
