#include "cadseq/synth/generate.hpp"

#include <algorithm>
#include <numeric>

#include "cadseq/errors.hpp"
#include "cadseq/geom/validity.hpp"
#include "cadseq/parallel.hpp"

namespace cadseq::synth {

namespace {

// Deterministic partial Fisher-Yates: the first k elements of a seeded
// shuffle.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_int(
                                  0, static_cast<std::int64_t>(n - i) - 1));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(std::min(k, n));
  return idx;
}

struct Bin {
  Split split;
  std::size_t length;
  std::size_t quota;
  std::vector<std::string> real_ids;  // all real ids of this (split, length)
};

CadProgram apply_chain(const WeightedChain& chain, const CadProgram& base,
                       const std::vector<std::string>& pool_ids,
                       const ProgramSet& real, Rng& rng, std::string* chain_desc) {
  CadProgram current = base;
  std::string desc;
  std::vector<std::string> donors;
  for (const OperatorStep& step : chain.steps) {
    if (!desc.empty()) desc += "+";
    desc += step.describe();
    if (!step.needs_donor()) {
      switch (step.kind) {
        case OperatorKind::Noise:
          current = noise_augment(current, step.magnitude, step.ratio, rng);
          break;
        case OperatorKind::ReExtrude:
          current = re_extrude(current, rng);
          break;
        case OperatorKind::ArcAugment:
          current = arc_augment(current, rng);
          break;
        default:
          break;
      }
      continue;
    }
    // Donor-based operators: resample the partner program until a compatible
    // one turns up, then give up on this attempt.
    bool applied = false;
    for (std::size_t retry = 0; retry < kDonorRetries; ++retry) {
      const std::string& donor_id = pool_ids[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(pool_ids.size()) - 1))];
      const CadProgram& donor = real.program(donor_id);
      try {
        switch (step.kind) {
          case OperatorKind::ReplaceSketch:
            current = replace_sketch(current, donor, rng);
            break;
          case OperatorKind::ReplaceExtrude:
            current = replace_extrude(current, donor, rng);
            break;
          case OperatorKind::Rre:
            current = rre(current, donor, rng);
            break;
          default:
            break;
        }
        donors.push_back(donor_id);
        applied = true;
        break;
      } catch (const NoCompatibleSketch&) {
      } catch (const NoCompatibleGroup&) {
      }
    }
    if (!applied) {
      throw NoCompatibleSketch("no compatible donor after " +
                               std::to_string(kDonorRetries) + " draws");
    }
  }
  std::string sources = base.source_id;
  for (const std::string& d : donors) sources += "," + d;
  *chain_desc = "sources=" + sources + ";chain=" + desc;
  return current;
}

}  // namespace

std::map<std::size_t, std::size_t> compute_quotas(
    std::size_t total, const std::vector<std::size_t>& lengths) {
  std::map<std::size_t, std::size_t> quotas;
  if (lengths.empty()) return quotas;
  const std::size_t base = total / lengths.size();
  std::size_t remainder = total % lengths.size();
  std::vector<std::size_t> sorted = lengths;
  std::sort(sorted.begin(), sorted.end());
  for (const std::size_t len : sorted) {
    quotas[len] = base + (remainder > 0 ? 1 : 0);
    if (remainder > 0) --remainder;
  }
  return quotas;
}

std::map<Split, std::size_t> split_targets(const DatasetManifest& manifest,
                                           std::size_t target_size) {
  std::map<Split, std::size_t> counts;
  for (const ManifestEntry& e : manifest.entries) counts[e.split]++;
  const double total = static_cast<double>(manifest.size());

  // Largest-remainder apportionment.
  std::map<Split, std::size_t> targets;
  std::vector<std::pair<double, Split>> remainders;
  std::size_t assigned = 0;
  for (const auto& [split, count] : counts) {
    const double exact = target_size * (count / total);
    const std::size_t floor_v = static_cast<std::size_t>(exact);
    targets[split] = floor_v;
    assigned += floor_v;
    remainders.push_back({exact - floor_v, split});
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::size_t leftover = target_size - assigned;
  for (const auto& [frac, split] : remainders) {
    if (leftover == 0) break;
    targets[split]++;
    --leftover;
  }
  return targets;
}

SynthBalResult generate_synthbal(const ProgramSet& real, const SynthBalParams& params) {
  if (params.real_ratio < 0.0 || params.real_ratio > 1.0) {
    throw ConfigError("real ratio must be in [0, 1]");
  }

  const auto targets = split_targets(real.manifest, params.target_size);
  const auto index = real.manifest.index();
  const auto lengths = real.manifest.lengths_by_split();

  std::vector<Bin> bins;
  for (const auto& [split, split_target] : targets) {
    const auto it = lengths.find(split);
    if (it == lengths.end() || it->second.empty()) continue;
    const auto quotas = compute_quotas(split_target, it->second);
    for (const std::size_t len : it->second) {
      Bin bin;
      bin.split = split;
      bin.length = len;
      bin.quota = quotas.at(len);
      bin.real_ids = index.at({split, len});
      bins.push_back(std::move(bin));
    }
  }

  struct BinOutput {
    std::vector<ManifestEntry> entries;
    std::vector<std::pair<std::string, CadProgram>> programs;
    BinReport report;
  };
  std::vector<BinOutput> outputs(bins.size());

  parallel_for(bins.size(), params.threads, [&](std::size_t bi) {
    const Bin& bin = bins[bi];
    BinOutput& out = outputs[bi];
    out.report.split = bin.split;
    out.report.length = bin.length;
    out.report.quota = bin.quota;

    const std::uint64_t split_id = static_cast<std::uint64_t>(bin.split);

    // Real portion: min(floor(r * quota), available), without replacement.
    const std::size_t want_real = static_cast<std::size_t>(
        params.real_ratio * static_cast<double>(bin.quota));
    const std::size_t n_real = std::min(want_real, bin.real_ids.size());
    Rng pick_rng(derive_seed(params.seed, {split_id, bin.length, 0xfffffffful}));
    const auto picked = sample_without_replacement(bin.real_ids.size(), n_real, pick_rng);
    for (const std::size_t idx : picked) {
      const std::string& id = bin.real_ids[idx];
      ManifestEntry e;
      e.id = id;
      e.length = bin.length;
      e.split = bin.split;
      e.provenance = Provenance::Real;
      out.entries.push_back(std::move(e));
      out.programs.push_back({id, real.program(id)});
    }
    out.report.real_used = n_real;

    // Synthetic remainder, one derived RNG stream per slot.
    for (std::size_t slot = n_real; slot < bin.quota; ++slot) {
      Rng rng(derive_seed(params.seed, {split_id, bin.length, slot}));
      bool filled = false;
      for (std::size_t attempt = 0; attempt < kSlotRetryBudget; ++attempt) {
        ++out.report.attempts;
        const std::string& base_id = bin.real_ids[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(bin.real_ids.size()) - 1))];
        const WeightedChain& chain = params.policy.sample_chain(rng);
        CadProgram augmented;
        std::string trace;
        try {
          augmented =
              apply_chain(chain, real.program(base_id), bin.real_ids, real, rng, &trace);
        } catch (const NoCompatibleSketch&) {
          continue;
        }
        if (sequence_length(augmented) != bin.length) continue;
        if (params.validate && !params.policy.skip_validity) {
          if (!geom::is_valid(augmented).valid()) continue;
        }
        ManifestEntry e;
        e.id = "syn-" + std::string(split_name(bin.split)) + "-" +
               std::to_string(bin.length) + "-" + std::to_string(slot);
        e.length = bin.length;
        e.split = bin.split;
        e.provenance = Provenance::Synthetic;
        e.trace = trace;
        augmented.source_id = e.id;
        out.programs.push_back({e.id, std::move(augmented)});
        out.entries.push_back(std::move(e));
        ++out.report.synthetic;
        filled = true;
        break;
      }
      if (!filled) ++out.report.unfilled;
    }
  });

  SynthBalResult result;
  for (BinOutput& out : outputs) {
    for (ManifestEntry& e : out.entries) {
      result.dataset.manifest.entries.push_back(std::move(e));
    }
    for (auto& [id, program] : out.programs) {
      result.dataset.programs.emplace(id, std::move(program));
    }
    result.bins.push_back(out.report);
  }
  return result;
}

ReductionBalanceResult reduction_balance(const DatasetManifest& manifest,
                                         std::size_t target_size, std::uint64_t seed) {
  if (target_size > manifest.size()) {
    throw ConfigError("reduction target exceeds dataset size");
  }

  std::map<std::size_t, std::vector<std::size_t>> by_length;  // length -> entry idx
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    by_length[manifest.entries[i].length].push_back(i);
  }
  std::vector<std::size_t> lengths;
  for (const auto& [len, _] : by_length) lengths.push_back(len);

  const std::size_t quota = target_size / lengths.size();

  ReductionBalanceResult result;
  std::vector<std::size_t> kept;
  for (const auto& [len, ids] : by_length) {
    if (ids.size() <= quota) {
      kept.insert(kept.end(), ids.begin(), ids.end());
      if (ids.size() < quota) {
        result.shortfall[len] = quota - ids.size();
      }
      continue;
    }
    Rng rng(derive_seed(seed, {len}));
    for (const std::size_t pick : sample_without_replacement(ids.size(), quota, rng)) {
      kept.push_back(ids[pick]);
    }
  }
  std::sort(kept.begin(), kept.end());
  for (const std::size_t i : kept) {
    result.manifest.entries.push_back(manifest.entries[i]);
  }
  return result;
}

}  // namespace cadseq::synth
