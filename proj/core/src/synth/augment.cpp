#include "cadseq/synth/augment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cadseq/errors.hpp"

namespace cadseq::synth {

namespace {

constexpr std::uint16_t bit(int i) { return static_cast<std::uint16_t>(1u << i); }

std::int16_t clip_1_255(long long v) {
  return static_cast<std::int16_t>(std::clamp(v, 1ll, 255ll));
}

std::int16_t draw_1_255(Rng& rng) {
  return static_cast<std::int16_t>(rng.uniform_int(1, 255));
}

}  // namespace

std::uint16_t perturbable_slot_mask(CommandType type) {
  switch (type) {
    case CommandType::Line:
      return bit(slot::kX) | bit(slot::kY);
    case CommandType::Arc:
      return bit(slot::kX) | bit(slot::kY) | bit(slot::kSweep);  // ccw is discrete
    case CommandType::Circle:
      return bit(slot::kX) | bit(slot::kY) | bit(slot::kRadius);
    case CommandType::Extrude:
      // theta/phi/gamma are near-discrete orientations; bool/extent discrete.
      return bit(slot::kPx) | bit(slot::kPy) | bit(slot::kPz) | bit(slot::kScale) |
             bit(slot::kE1) | bit(slot::kE2);
    case CommandType::Sol:
    case CommandType::Eos:
      return 0;
  }
  return 0;
}

CadProgram noise_augment(const CadProgram& c, double magnitude, double ratio,
                         Rng& rng) {
  CadProgram out = c;
  const double bound = magnitude * 256.0;
  for (Command& cmd : out.commands) {
    const std::uint16_t mask = perturbable_slot_mask(cmd.type);
    for (int s = 0; s < kNumParamSlots; ++s) {
      if (!(mask & (1u << s))) continue;
      if (!rng.bernoulli(ratio)) continue;
      const long long offset = std::llround(rng.uniform(-bound, bound));
      cmd.params[s] = clip_1_255(static_cast<long long>(cmd.params[s]) + offset);
    }
  }
  return out;
}

namespace {

CadProgram replace_ranges(const CadProgram& c1, const CadProgram& c2,
                          bool whole_groups, Rng& rng) {
  const auto g1 = split_groups(c1);
  const auto g2 = split_groups(c2);
  const std::size_t shared = std::min(g1.size(), g2.size());

  std::vector<std::size_t> compatible;
  for (std::size_t i = 0; i < shared; ++i) {
    if (g1[i].sketch_size() == g2[i].sketch_size()) compatible.push_back(i);
  }
  if (compatible.empty()) {
    if (whole_groups) {
      throw NoCompatibleGroup("no index-aligned sketch/extrude group of equal size");
    }
    throw NoCompatibleSketch("no index-aligned sketch of equal size");
  }

  std::vector<bool> take(shared, false);
  bool any = false;
  for (const std::size_t i : compatible) {
    if (rng.bernoulli(0.5)) {
      take[i] = true;
      any = true;
    }
  }
  if (!any) {
    // Synthetic entries must differ from their source; force one swap.
    take[compatible[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(compatible.size()) - 1))]] = true;
  }

  CadProgram out;
  out.source_id = c1.source_id;
  for (std::size_t i = 0; i < g1.size(); ++i) {
    const bool swap = i < shared && take[i];
    const SketchExtrudeGroup& src = swap ? g2[i] : g1[i];
    const CadProgram& from = swap ? c2 : c1;
    for (std::size_t k = src.sketch_begin; k < src.sketch_end; ++k) {
      out.commands.push_back(from.commands[k]);
    }
    // The extrude stays with c1 unless whole groups are swapped.
    if (swap && whole_groups) {
      out.commands.push_back(c2.commands[g2[i].extrude]);
    } else {
      out.commands.push_back(c1.commands[g1[i].extrude]);
    }
  }
  return out;
}

}  // namespace

CadProgram replace_sketch(const CadProgram& c1, const CadProgram& c2, Rng& rng) {
  return replace_ranges(c1, c2, false, rng);
}

CadProgram replace_extrude(const CadProgram& c1, const CadProgram& c2, Rng& rng) {
  return replace_ranges(c1, c2, true, rng);
}

CadProgram re_extrude(const CadProgram& c, Rng& rng) {
  CadProgram out = c;
  for (Command& cmd : out.commands) {
    if (cmd.type != CommandType::Extrude) continue;
    for (const int s : {slot::kPx, slot::kPy, slot::kPz, slot::kScale, slot::kE1,
                        slot::kE2}) {
      cmd.params[s] = draw_1_255(rng);
    }
  }
  return out;
}

CadProgram arc_augment(const CadProgram& c, Rng& rng) {
  CadProgram out = c;
  for (Command& cmd : out.commands) {
    if (cmd.type != CommandType::Arc) continue;
    for (const int s : {slot::kX, slot::kY, slot::kSweep}) {
      cmd.params[s] = draw_1_255(rng);
    }
  }
  return out;
}

CadProgram rre(const CadProgram& c, const CadProgram& donor, Rng& rng) {
  CadProgram out = replace_extrude(c, donor, rng);
  out = re_extrude(out, rng);
  return arc_augment(out, rng);
}

std::string OperatorStep::describe() const {
  char buf[64];
  switch (kind) {
    case OperatorKind::Noise:
      std::snprintf(buf, sizeof(buf), "noise(m=%.3g,p=%.3g)", magnitude, ratio);
      return buf;
    case OperatorKind::ReplaceSketch: return "replace_sketch";
    case OperatorKind::ReplaceExtrude: return "replace_extrude";
    case OperatorKind::ReExtrude: return "re_extrude";
    case OperatorKind::ArcAugment: return "arc_augment";
    case OperatorKind::Rre: return "rre";
  }
  return "?";
}

namespace {

OperatorStep noise_step(double m, double p) {
  return {OperatorKind::Noise, m, p};
}

constexpr double kLargeNoiseM = 0.07;
constexpr double kLargeNoiseP = 0.6;
constexpr double kSmallNoiseM = 0.02;
constexpr double kSmallNoiseP = 0.8;

// 40% large pure noise, 60% small noise followed by `partner`.
AugmentationPolicy two_branch(const std::string& name, OperatorStep partner) {
  AugmentationPolicy policy;
  policy.name = name;
  policy.chains.push_back({0.4, {noise_step(kLargeNoiseM, kLargeNoiseP)}});
  policy.chains.push_back({0.6, {noise_step(kSmallNoiseM, kSmallNoiseP), partner}});
  return policy;
}

}  // namespace

AugmentationPolicy AugmentationPolicy::preset(const std::string& name) {
  if (name == "default") {
    return two_branch("default", {OperatorKind::ReplaceSketch});
  }
  if (name == "replace-extrude") {
    return two_branch("replace-extrude", {OperatorKind::ReplaceExtrude});
  }
  if (name == "re-extrude") {
    return two_branch("re-extrude", {OperatorKind::ReExtrude});
  }
  if (name == "arc-augment") {
    return two_branch("arc-augment", {OperatorKind::ArcAugment});
  }
  if (name == "noisy-rre") {
    AugmentationPolicy policy = two_branch("noisy-rre", {OperatorKind::Rre});
    policy.skip_validity = true;
    return policy;
  }
  if (name == "rre") {
    AugmentationPolicy policy;
    policy.name = name;
    policy.chains.push_back({1.0, {{OperatorKind::Rre}}});
    policy.skip_validity = true;
    return policy;
  }
  if (name == "reduced-noise") {
    // Large pure noise downgraded to small pure noise.
    AugmentationPolicy policy;
    policy.name = name;
    policy.chains.push_back({0.4, {noise_step(kSmallNoiseM, kSmallNoiseP)}});
    policy.chains.push_back(
        {0.6, {noise_step(kSmallNoiseM, kSmallNoiseP), {OperatorKind::ReplaceSketch}}});
    return policy;
  }
  if (name == "no-pure-noise") {
    AugmentationPolicy policy;
    policy.name = name;
    policy.chains.push_back(
        {1.0, {noise_step(kSmallNoiseM, kSmallNoiseP), {OperatorKind::ReplaceSketch}}});
    return policy;
  }
  if (name == "noiseless") {
    AugmentationPolicy policy;
    policy.name = name;
    policy.chains.push_back({1.0, {{OperatorKind::ReplaceSketch}}});
    return policy;
  }
  if (name == "noise-only") {
    AugmentationPolicy policy;
    policy.name = name;
    policy.chains.push_back({1.0, {noise_step(kSmallNoiseM, kSmallNoiseP)}});
    return policy;
  }
  throw ConfigError("unknown augmentation policy '" + name + "'");
}

std::vector<std::string> AugmentationPolicy::preset_names() {
  return {"default",     "noise-only", "noiseless",      "reduced-noise",
          "no-pure-noise", "replace-extrude", "re-extrude", "arc-augment",
          "noisy-rre",   "rre"};
}

const WeightedChain& AugmentationPolicy::sample_chain(Rng& rng) const {
  double total = 0.0;
  for (const WeightedChain& c : chains) total += c.weight;
  double pick = rng.uniform() * total;
  for (const WeightedChain& c : chains) {
    pick -= c.weight;
    if (pick <= 0.0) return c;
  }
  return chains.back();
}

}  // namespace cadseq::synth
