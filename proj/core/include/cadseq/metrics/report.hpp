#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cadseq::metrics {

enum class LengthStat { Mean, Median };

struct NormalizedMetric {
  double overall = 0.0;     // m(X): statistic over all defined items
  double normalized = 0.0;  // m^SL(X): mean of per-length statistics
  std::size_t defined = 0;  // items with a defined value
};

// Sequence-length normalization over (length, value) items; items with
// nullopt values are excluded from both statistics, and lengths with no
// defined item are excluded from the normalizing set. The per-length (and
// overall) statistic is the mean, or the median for chamfer-style metrics.
NormalizedMetric sl_normalize(
    const std::vector<std::pair<std::size_t, std::optional<double>>>& per_item,
    LengthStat stat = LengthStat::Mean);

// One reconstruction-evaluation record; unset optionals mean "undefined for
// this item" (wrong-typed rows, invalid geometry).
struct ReconItem {
  std::size_t length = 0;
  double cmd_acc = 0.0;
  std::optional<double> param_acc;
  std::optional<double> chamfer;
  std::optional<double> iou;
  bool gt_valid = true;
  bool pred_valid = true;
};

struct ReportRow {
  std::string label;  // length, "ALL", or "SL_NORM"
  std::size_t count = 0;
  std::optional<double> cmd_acc;
  std::optional<double> param_acc;
  std::optional<double> cd_median;
  std::optional<double> iou_mean;
  std::optional<double> ir;
};

// Per-length table plus aggregate and sequence-length-normalized rows.
struct MetricsReport {
  std::vector<ReportRow> rows;
  std::map<std::string, std::string> config;

  std::string to_csv() const;
  std::string to_json() const;
};

MetricsReport build_recon_report(const std::vector<ReconItem>& items,
                                 std::map<std::string, std::string> config = {});

}  // namespace cadseq::metrics
