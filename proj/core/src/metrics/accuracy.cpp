#include "cadseq/metrics/accuracy.hpp"

#include <algorithm>
#include <cstdlib>

#include "cadseq/errors.hpp"

namespace cadseq::metrics {

namespace {

// Row view over the padded 60-row convention without materializing matrices.
const Command& row_at(const CadProgram& p, int row, const Command& eos) {
  return row < static_cast<int>(p.commands.size()) ? p.commands[row] : eos;
}

int compare_rows(const CadProgram& gt, const CadProgram& pred, bool content_rows_only) {
  if (!content_rows_only) return kMatrixRows;
  const int content = static_cast<int>(std::max(gt.commands.size(), pred.commands.size()));
  return std::min(content, kMatrixRows);
}

}  // namespace

double command_accuracy(const CadProgram& gt, const CadProgram& pred,
                        bool content_rows_only) {
  const Command eos = Command::eos();
  const int rows = compare_rows(gt, pred, content_rows_only);
  if (rows == 0) return 1.0;
  int matches = 0;
  for (int r = 0; r < rows; ++r) {
    if (row_at(gt, r, eos).type == row_at(pred, r, eos).type) ++matches;
  }
  return static_cast<double>(matches) / static_cast<double>(rows);
}

std::optional<double> param_accuracy(const CadProgram& gt, const CadProgram& pred,
                                     int eta, bool content_rows_only) {
  const Command eos = Command::eos();
  const int rows = compare_rows(gt, pred, content_rows_only);
  long long total = 0;  // T: used slots of correctly-typed rows
  long long within = 0;
  for (int r = 0; r < rows; ++r) {
    const Command& g = row_at(gt, r, eos);
    const Command& h = row_at(pred, r, eos);
    if (g.type != h.type) continue;
    const std::uint16_t mask = used_slot_mask(g.type);
    for (int s = 0; s < kNumParamSlots; ++s) {
      if (!(mask & (1u << s))) continue;
      ++total;
      if (std::abs(g.params[s] - h.params[s]) < eta) ++within;
    }
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(within) / static_cast<double>(total);
}

double relative_improvement(double p1, double p2) {
  if (p2 == 1.0) throw DivisionByZero("relative improvement undefined at p2 = 1");
  return (p1 - p2) / (1.0 - p2);
}

}  // namespace cadseq::metrics
