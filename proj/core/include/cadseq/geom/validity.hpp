#pragma once

#include <string>

#include "cadseq/command.hpp"

namespace cadseq::geom {

// Fixed seed for the samplability probe so validity reports are reproducible.
inline constexpr std::uint64_t kValiditySeed = 0x5eed0001u;
inline constexpr std::size_t kValiditySampleCount = 2000;

struct ValidityReport {
  bool compiles = false;
  bool self_intersection_free = false;
  bool samplable = false;
  std::string failure_detail;

  bool valid() const { return compiles && self_intersection_free && samplable; }
};

// Runs the three validity checks: compilation, per-profile self-intersection,
// and surface samplability (2000 points, fixed seed). Failures are encoded in
// the report, never thrown.
ValidityReport is_valid(const CadProgram& p);

}  // namespace cadseq::geom
