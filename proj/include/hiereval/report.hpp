#pragma once

#include "hiereval/metrics.hpp"

namespace hiereval {

// Percentage with two decimals; null scores render as an em dash.
std::string format_percent(const std::optional<double>& fraction);

// Localization table: one row per method with
// mIoU_S/P/O and SpCS-Avg/S2P/P2O, each split by specificity.
std::string render_localization_table_md(const std::vector<MetricReport>& reports);
std::string render_localization_table_csv(const std::vector<MetricReport>& reports);

// Recognition table: mACC_S, mACC_SS, mACC_P, mACC_PS, mACC_O, mACC_OS.
std::string render_recognition_table_md(const std::vector<MetricReport>& reports);
std::string render_recognition_table_csv(const std::vector<MetricReport>& reports);

MetricReport metric_report_from_json(const std::string& text);

}  // namespace hiereval
