#include "hiereval/report.hpp"

#include <sstream>

#include <json.hpp>

namespace hiereval {

using nlohmann::json;

std::string format_percent(const std::optional<double>& fraction) {
  if (!fraction) return "—";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *fraction * 100.0);
  return buf;
}

namespace {

// Column order is fixed: subpart, part, object mIoU then SpCS avg/s2p/p2o,
// each as (specific, general).
std::vector<std::string> localization_cells(const MetricReport& r) {
  std::vector<std::string> cells;
  const int kSpecific = 1, kGeneral = 0;
  for (int lvl : {2, 1, 0}) {  // S, P, O
    cells.push_back(format_percent(r.miou[kSpecific][lvl].mean));
    cells.push_back(format_percent(r.miou[kGeneral][lvl].mean));
  }
  for (auto member : {&SpcsResult::avg, &SpcsResult::s2p, &SpcsResult::p2o}) {
    cells.push_back(format_percent(r.spcs[kSpecific].*member));
    cells.push_back(format_percent(r.spcs[kGeneral].*member));
  }
  return cells;
}

const std::vector<std::string> kLocalizationHeader = {
    "method",          "params",
    "mIoU_S/Specific", "mIoU_S/General",
    "mIoU_P/Specific", "mIoU_P/General",
    "mIoU_O/Specific", "mIoU_O/General",
    "SpCS-Avg/Specific", "SpCS-Avg/General",
    "SpCS-S2P/Specific", "SpCS-S2P/General",
    "SpCS-P2O/Specific", "SpCS-P2O/General"};

// mACC_S, mACC_SS, mACC_P, mACC_PS, mACC_O, mACC_OS: per level, general then
// specific.
std::vector<std::string> recognition_cells(const MetricReport& r) {
  std::vector<std::string> cells;
  for (int lvl : {2, 1, 0}) {
    cells.push_back(format_percent(r.recognition[0][lvl].mean));
    cells.push_back(format_percent(r.recognition[1][lvl].mean));
  }
  return cells;
}

const std::vector<std::string> kRecognitionHeader = {
    "method", "params", "mACC_S", "mACC_SS", "mACC_P", "mACC_PS", "mACC_O", "mACC_OS"};

std::string render_md(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  os << '|';
  for (const std::string& h : header) os << ' ' << h << " |";
  os << "\n|";
  for (size_t i = 0; i < header.size(); ++i) os << " --- |";
  os << '\n';
  for (const auto& row : rows) {
    os << '|';
    for (const std::string& cell : row) os << ' ' << cell << " |";
    os << '\n';
  }
  return os.str();
}

std::string render_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

std::vector<std::vector<std::string>> localization_rows(
    const std::vector<MetricReport>& reports) {
  std::vector<std::vector<std::string>> rows;
  for (const MetricReport& r : reports) {
    std::vector<std::string> row = {r.method, r.params};
    const std::vector<std::string> cells = localization_cells(r);
    row.insert(row.end(), cells.begin(), cells.end());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<std::string>> recognition_rows(
    const std::vector<MetricReport>& reports) {
  std::vector<std::vector<std::string>> rows;
  for (const MetricReport& r : reports) {
    std::vector<std::string> row = {r.method, r.params};
    const std::vector<std::string> cells = recognition_cells(r);
    row.insert(row.end(), cells.begin(), cells.end());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string render_localization_table_md(const std::vector<MetricReport>& reports) {
  return render_md(kLocalizationHeader, localization_rows(reports));
}

std::string render_localization_table_csv(const std::vector<MetricReport>& reports) {
  return render_csv(kLocalizationHeader, localization_rows(reports));
}

std::string render_recognition_table_md(const std::vector<MetricReport>& reports) {
  return render_md(kRecognitionHeader, recognition_rows(reports));
}

std::string render_recognition_table_csv(const std::vector<MetricReport>& reports) {
  return render_csv(kRecognitionHeader, recognition_rows(reports));
}

MetricReport metric_report_from_json(const std::string& text) {
  const json doc = json::parse(text);
  MetricReport r;
  r.method = doc.value("method", "unknown");
  r.params = doc.value("params", "");
  r.averaging =
      doc.value("averaging", "per-query") == "per-category" ? Averaging::PerCategory
                                                            : Averaging::PerQuery;
  const char* spec_names[2] = {"general", "specific"};
  const char* level_names[3] = {"object", "part", "subpart"};
  auto parse_score = [](const json& j) {
    LevelScore s;
    s.count = j.value("count", 0);
    if (j.contains("mean") && !j.at("mean").is_null()) s.mean = j.at("mean").get<double>();
    return s;
  };
  for (int si = 0; si < 2; ++si) {
    if (!doc.contains(spec_names[si])) continue;
    const json& block = doc.at(spec_names[si]);
    for (int lvl = 0; lvl < 3; ++lvl) {
      if (block.contains("miou"))
        r.miou[si][lvl] = parse_score(block.at("miou").at(level_names[lvl]));
      if (block.contains("abstention"))
        r.abstention[si][lvl] = parse_score(block.at("abstention").at(level_names[lvl]));
      if (block.contains("recognition"))
        r.recognition[si][lvl] = parse_score(block.at("recognition").at(level_names[lvl]));
    }
    if (block.contains("spcs")) {
      const json& sp = block.at("spcs");
      auto opt = [&sp](const char* key) -> std::optional<double> {
        if (!sp.contains(key) || sp.at(key).is_null()) return std::nullopt;
        return sp.at(key).get<double>();
      };
      r.spcs[si].avg = opt("avg");
      r.spcs[si].s2p = opt("s2p");
      r.spcs[si].p2o = opt("p2o");
      r.spcs[si].s2p_count = sp.value("s2p_pairs", 0);
      r.spcs[si].p2o_count = sp.value("p2o_pairs", 0);
      r.skipped_s2p[si] = sp.value("skipped_s2p", 0);
      r.skipped_p2o[si] = sp.value("skipped_p2o", 0);
    }
    if (block.contains("per_category_miou")) {
      for (auto it = block.at("per_category_miou").begin();
           it != block.at("per_category_miou").end(); ++it) {
        r.per_category_miou[si][it.key()] = parse_score(it.value());
      }
    }
  }
  if (doc.contains("secs") && !doc.at("secs").is_null())
    r.secs = doc.at("secs").get<double>();
  r.secs_pixels = doc.value("secs_pixels", 0);
  return r;
}

}  // namespace hiereval
