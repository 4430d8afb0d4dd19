#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cadseq/synth/augment.hpp"
#include "cadseq/synth/manifest.hpp"

namespace cadseq::synth {

// Retry budget per synthetic slot before it is declared unmeetable.
inline constexpr std::size_t kSlotRetryBudget = 10000;
// Donor redraws per attempt when replace operators find no compatible pair.
inline constexpr std::size_t kDonorRetries = 32;

struct SynthBalParams {
  double real_ratio = 0.2;       // r: cap on real data per (split, length)
  std::size_t target_size = 0;   // N_S
  AugmentationPolicy policy = AugmentationPolicy::preset("default");
  bool validate = true;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// Per-(split, length) generation bookkeeping.
struct BinReport {
  Split split;
  std::size_t length = 0;
  std::size_t quota = 0;
  std::size_t real_used = 0;
  std::size_t synthetic = 0;
  std::size_t unfilled = 0;  // > 0 iff the slot retry budget ran out
  std::size_t attempts = 0;
};

struct SynthBalResult {
  ProgramSet dataset;
  std::vector<BinReport> bins;

  bool quota_met() const {
    for (const BinReport& b : bins) {
      if (b.unfilled > 0) return false;
    }
    return true;
  }
};

// Per-length quotas: floor(total / #lengths) each, remainder distributed to
// the smallest lengths. `lengths` must be non-empty.
std::map<std::size_t, std::size_t> compute_quotas(std::size_t total,
                                                  const std::vector<std::size_t>& lengths);

// Splits N_S across splits proportionally to their share of the real data
// (largest-remainder rounding so the parts sum to N_S).
std::map<Split, std::size_t> split_targets(const DatasetManifest& manifest,
                                           std::size_t target_size);

// The balanced-dataset generation loop. Per split and sequence length: fills
// min(floor(r * quota), available) slots with real programs sampled without
// replacement, then fills the rest by sampling a source program of that
// length, applying a policy-sampled augmentation chain, and (when validation
// is on) keeping only augmentations whose validity report is fully true.
// Donor programs are drawn from the same split only. Deterministic for a
// given (input, params) under any thread count: every slot derives its RNG
// stream from (seed, split, length, slot).
SynthBalResult generate_synthbal(const ProgramSet& real, const SynthBalParams& params);

struct ReductionBalanceResult {
  DatasetManifest manifest;
  std::map<std::size_t, std::size_t> shortfall;  // length -> missing count
};

// Down-samples over-represented lengths to floor(target / #lengths) items
// each, keeping all items of under-represented lengths. All entries real.
ReductionBalanceResult reduction_balance(const DatasetManifest& manifest,
                                         std::size_t target_size, std::uint64_t seed);

}  // namespace cadseq::synth
