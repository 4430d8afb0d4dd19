#include "cadseq/metrics/generative.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "cadseq/errors.hpp"
#include "cadseq/metrics/chamfer.hpp"

namespace cadseq::metrics {

namespace {

std::vector<double> occupancy_distribution(const std::vector<PointCloud>& clouds,
                                           int res) {
  std::vector<double> hist(static_cast<std::size_t>(res) * res * res, 0.0);
  double total = 0.0;
  for (const PointCloud& cloud : clouds) {
    for (const Vec3& p : cloud.points) {
      auto cell = [res](double v) {
        const int c = static_cast<int>((v + 1.0) / 2.0 * res);
        return std::clamp(c, 0, res - 1);
      };
      const std::size_t idx =
          (static_cast<std::size_t>(cell(p.x)) * res + cell(p.y)) * res + cell(p.z);
      hist[idx] += 1.0;
      total += 1.0;
    }
  }
  if (total > 0.0) {
    for (double& h : hist) h /= total;
  }
  return hist;
}

double jensen_shannon(const std::vector<double>& p, const std::vector<double>& q) {
  double jsd = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = (p[i] + q[i]) / 2.0;
    if (p[i] > 0.0) jsd += 0.5 * p[i] * std::log(p[i] / m);
    if (q[i] > 0.0) jsd += 0.5 * q[i] * std::log(q[i] / m);
  }
  return jsd;
}

}  // namespace

GenerationQuality generation_quality(const std::vector<PointCloud>& generated,
                                     const std::vector<PointCloud>& reference,
                                     int jsd_resolution) {
  if (generated.empty() || reference.empty()) {
    throw Error("generation_quality: empty shape set");
  }

  GenerationQuality out;
  out.jsd = jensen_shannon(occupancy_distribution(generated, jsd_resolution),
                           occupancy_distribution(reference, jsd_resolution));

  // Pairwise chamfer once; COV and MMD both read from it.
  std::vector<std::vector<double>> cd(generated.size(),
                                      std::vector<double>(reference.size()));
  for (std::size_t g = 0; g < generated.size(); ++g) {
    for (std::size_t r = 0; r < reference.size(); ++r) {
      cd[g][r] = chamfer_distance(generated[g], reference[r]);
    }
  }

  std::unordered_set<std::size_t> covered;
  for (std::size_t g = 0; g < generated.size(); ++g) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < reference.size(); ++r) {
      if (cd[g][r] < cd[g][best]) best = r;
    }
    covered.insert(best);
  }
  out.cov = static_cast<double>(covered.size()) / static_cast<double>(reference.size());

  double mmd_sum = 0.0;
  for (std::size_t r = 0; r < reference.size(); ++r) {
    double best = cd[0][r];
    for (std::size_t g = 1; g < generated.size(); ++g) {
      best = std::min(best, cd[g][r]);
    }
    mmd_sum += best;
  }
  out.mmd = mmd_sum / static_cast<double>(reference.size());
  return out;
}

}  // namespace cadseq::metrics
