#pragma once

#include <string>
#include <vector>

#include "cadseq/command.hpp"
#include "cadseq/rng.hpp"

namespace cadseq::synth {

// Perturbs continuous parameters only: sketch coordinates, arc sweep, circle
// radius, plane origin, profile scale and extrusion distances. Discrete and
// near-discrete slots (command type, ccw flag, boolean op, extent type,
// orientation angles) are never touched. Each perturbable slot is offset,
// independently with probability p, by round(u) with u ~ U[-m*256, m*256],
// then clipped to [1, 255]. Sequence length is unchanged.
CadProgram noise_augment(const CadProgram& c, double magnitude, double ratio, Rng& rng);

// Replaces index-aligned sketches of c1 with the corresponding sketches of c2
// (probability 1/2 each), restricted to sketch pairs with equal command
// counts so the sequence length is preserved. If nothing got picked but a
// compatible pair exists, one replacement is forced. Throws
// NoCompatibleSketch when no equal-size index-aligned pair exists.
CadProgram replace_sketch(const CadProgram& c1, const CadProgram& c2, Rng& rng);

// Same as replace_sketch but swaps whole (sketch, Extrude) groups. Throws
// NoCompatibleGroup.
CadProgram replace_extrude(const CadProgram& c1, const CadProgram& c2, Rng& rng);

// Redraws every Extrude's continuous parameters uniformly in [1, 255].
CadProgram re_extrude(const CadProgram& c, Rng& rng);

// Redraws every Arc's continuous parameters uniformly in [1, 255].
CadProgram arc_augment(const CadProgram& c, Rng& rng);

// replace-extrude, then re-extrude, then arc-augment, applied in series.
CadProgram rre(const CadProgram& c, const CadProgram& donor, Rng& rng);

// Which parameter slots the noise operator may touch for a command type.
std::uint16_t perturbable_slot_mask(CommandType type);

enum class OperatorKind { Noise, ReplaceSketch, ReplaceExtrude, ReExtrude, ArcAugment, Rre };

struct OperatorStep {
  OperatorKind kind;
  double magnitude = 0.0;  // Noise only
  double ratio = 0.0;      // Noise only

  bool needs_donor() const {
    return kind == OperatorKind::ReplaceSketch || kind == OperatorKind::ReplaceExtrude ||
           kind == OperatorKind::Rre;
  }
  std::string describe() const;
};

struct WeightedChain {
  double weight = 1.0;
  std::vector<OperatorStep> steps;
};

// Weighted choices of augmentation chains, plus whether the preset skips the
// validity check by definition (the RRE presets do).
struct AugmentationPolicy {
  std::string name;
  std::vector<WeightedChain> chains;
  bool skip_validity = false;

  // Named presets: default, noise-only, noiseless, reduced-noise,
  // no-pure-noise, replace-extrude, re-extrude, arc-augment, noisy-rre, rre.
  static AugmentationPolicy preset(const std::string& name);
  static std::vector<std::string> preset_names();

  const WeightedChain& sample_chain(Rng& rng) const;
};

}  // namespace cadseq::synth
