#include "cadseq/metrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cadseq/errors.hpp"

namespace cadseq::metrics {

namespace {

double stat_of(std::vector<double>& values, LengthStat stat) {
  if (stat == LengthStat::Median) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
  }
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::string format_value(const std::optional<double>& v) {
  if (!v.has_value()) return "";
  std::ostringstream os;
  os.precision(9);
  os << *v;
  return os.str();
}

}  // namespace

NormalizedMetric sl_normalize(
    const std::vector<std::pair<std::size_t, std::optional<double>>>& per_item,
    LengthStat stat) {
  std::map<std::size_t, std::vector<double>> by_length;
  std::vector<double> all;
  for (const auto& [length, value] : per_item) {
    if (!value.has_value()) continue;
    by_length[length].push_back(*value);
    all.push_back(*value);
  }
  if (all.empty()) {
    throw Error("sl_normalize: no defined values");
  }

  NormalizedMetric out;
  out.defined = all.size();
  out.overall = stat_of(all, stat);
  double acc = 0.0;
  for (auto& [length, values] : by_length) {
    acc += stat_of(values, stat);
  }
  out.normalized = acc / static_cast<double>(by_length.size());
  return out;
}

MetricsReport build_recon_report(const std::vector<ReconItem>& items,
                                 std::map<std::string, std::string> config) {
  MetricsReport report;
  report.config = std::move(config);

  std::map<std::size_t, std::vector<const ReconItem*>> by_length;
  for (const ReconItem& item : items) by_length[item.length].push_back(&item);

  auto make_row = [](const std::string& label,
                     const std::vector<const ReconItem*>& group) {
    ReportRow row;
    row.label = label;
    row.count = group.size();
    std::vector<double> cmd, param, cd, iou;
    std::size_t invalid = 0;
    for (const ReconItem* item : group) {
      cmd.push_back(item->cmd_acc);
      if (item->param_acc) param.push_back(*item->param_acc);
      if (item->chamfer) cd.push_back(*item->chamfer);
      if (item->iou) iou.push_back(*item->iou);
      if (!item->pred_valid) ++invalid;
    }
    if (!cmd.empty()) row.cmd_acc = stat_of(cmd, LengthStat::Mean);
    if (!param.empty()) row.param_acc = stat_of(param, LengthStat::Mean);
    if (!cd.empty()) row.cd_median = stat_of(cd, LengthStat::Median);
    if (!iou.empty()) row.iou_mean = stat_of(iou, LengthStat::Mean);
    if (!group.empty()) {
      row.ir = static_cast<double>(invalid) / static_cast<double>(group.size());
    }
    return row;
  };

  for (const auto& [length, group] : by_length) {
    report.rows.push_back(make_row(std::to_string(length), group));
  }

  std::vector<const ReconItem*> everything;
  for (const ReconItem& item : items) everything.push_back(&item);
  report.rows.push_back(make_row("ALL", everything));

  // SL_NORM: unweighted mean of the per-length rows, per column, over lengths
  // where that column is defined.
  ReportRow norm;
  norm.label = "SL_NORM";
  norm.count = items.size();
  auto column_mean = [&](auto getter) -> std::optional<double> {
    double acc = 0.0;
    std::size_t n = 0;
    for (const ReportRow& row : report.rows) {
      if (row.label == "ALL" || row.label == "SL_NORM") continue;
      const std::optional<double> v = getter(row);
      if (v.has_value()) {
        acc += *v;
        ++n;
      }
    }
    if (n == 0) return std::nullopt;
    return acc / static_cast<double>(n);
  };
  norm.cmd_acc = column_mean([](const ReportRow& r) { return r.cmd_acc; });
  norm.param_acc = column_mean([](const ReportRow& r) { return r.param_acc; });
  norm.cd_median = column_mean([](const ReportRow& r) { return r.cd_median; });
  norm.iou_mean = column_mean([](const ReportRow& r) { return r.iou_mean; });
  norm.ir = column_mean([](const ReportRow& r) { return r.ir; });
  report.rows.push_back(norm);
  return report;
}

std::string MetricsReport::to_csv() const {
  std::ostringstream os;
  for (const auto& [key, value] : config) {
    os << "# " << key << "=" << value << "\n";
  }
  os << "len,count,cmd_acc,param_acc,cd_median,iou_mean,ir\n";
  for (const ReportRow& row : rows) {
    os << row.label << ',' << row.count << ',' << format_value(row.cmd_acc) << ','
       << format_value(row.param_acc) << ',' << format_value(row.cd_median) << ','
       << format_value(row.iou_mean) << ',' << format_value(row.ir) << "\n";
  }
  return os.str();
}

std::string MetricsReport::to_json() const {
  nlohmann::json doc;
  doc["config"] = config;
  nlohmann::json rows_json = nlohmann::json::array();
  for (const ReportRow& row : rows) {
    nlohmann::json r;
    r["len"] = row.label;
    r["count"] = row.count;
    auto set = [&r](const char* key, const std::optional<double>& v) {
      if (v.has_value()) {
        r[key] = *v;
      } else {
        r[key] = nullptr;
      }
    };
    set("cmd_acc", row.cmd_acc);
    set("param_acc", row.param_acc);
    set("cd_median", row.cd_median);
    set("iou_mean", row.iou_mean);
    set("ir", row.ir);
    rows_json.push_back(r);
  }
  doc["rows"] = rows_json;
  return doc.dump(2) + "\n";
}

}  // namespace cadseq::metrics
