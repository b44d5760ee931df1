#include "hiereval/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <json.hpp>

namespace hiereval {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

bool color_enabled() { return std::getenv("HIEREVAL_NO_COLOR") == nullptr; }

void summary_line(const std::string& text, bool ok) {
  if (color_enabled())
    std::cout << (ok ? "\033[32m" : "\033[31m") << text << "\033[0m\n";
  else
    std::cout << text << '\n';
}

std::string out_path(const RunConfig& config, const std::string& name) {
  fs::create_directories(config.out_dir);
  return (fs::path(config.out_dir) / name).string();
}

}  // namespace

std::string file_digest(const std::string& path) {
  const std::string data = read_file(path);
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void write_manifest(const RunConfig& config, const std::string& command,
                    const std::vector<std::string>& outputs) {
  ordered_json doc;
  doc["artifact_version"] = kArtifactVersion;
  doc["command"] = command;
  ordered_json cfg;
  cfg["dataset"] = config.dataset_path;
  cfg["predictions"] = config.prediction_paths;
  cfg["reports"] = config.report_paths;
  cfg["recognition"] = config.recognition_path;
  cfg["averaging"] = config.averaging == Averaging::PerQuery ? "per-query" : "per-category";
  cfg["specificity"] = config.specificity;
  cfg["workers"] = config.workers;
  cfg["strict"] = config.strict;
  cfg["format"] = config.format;
  cfg["method"] = config.method;
  cfg["group_by"] = config.group_by;
  ordered_json expect = ordered_json::object();
  for (const auto& [k, v] : config.expectations) expect[k] = v;
  cfg["expect"] = expect;
  doc["config"] = cfg;
  ordered_json inputs = ordered_json::object();
  auto add_digest = [&inputs](const std::string& path) {
    if (!path.empty() && fs::exists(path)) inputs[path] = file_digest(path);
  };
  add_digest(config.dataset_path);
  for (const std::string& p : config.prediction_paths) add_digest(p);
  for (const std::string& p : config.report_paths) add_digest(p);
  add_digest(config.recognition_path);
  doc["input_digests"] = inputs;
  doc["outputs"] = outputs;
  write_file(out_path(config, command + "_manifest.json"), doc.dump(2));
}

int cmd_validate(const RunConfig& config) {
  Dataset dataset;
  ValidationReport report;
  try {
    dataset = load_dataset(config.dataset_path, config.strict);
  } catch (const std::exception& e) {
    // Structural load failures still produce a report file with the errors.
    report.errors.push_back(e.what());
    const std::string path = out_path(config, "validation.json");
    write_file(path, report.to_json());
    write_manifest(config, "validate", {path});
    summary_line(std::string("validate: parse failure (") + e.what() + ")", false);
    return kExitUsage;
  }
  report = validate_dataset(dataset, config.expectations);
  const std::string path = out_path(config, "validation.json");
  write_file(path, report.to_json());
  write_manifest(config, "validate", {path});
  std::string text = "validate: " + std::to_string(report.image_count) + " images, " +
                     std::to_string(report.annotation_counts[2]) + " subpart annotations, " +
                     std::to_string(report.checks.size()) + " checks, " +
                     (report.passed() ? "pass" : "FAIL");
  summary_line(text, report.passed());
  return report.passed() ? kExitOk : kExitFailure;
}

int cmd_stats(const RunConfig& config) {
  Dataset dataset;
  try {
    dataset = load_dataset(config.dataset_path, config.strict);
  } catch (const std::exception& e) {
    summary_line(std::string("stats: parse failure (") + e.what() + ")", false);
    return kExitUsage;
  }
  const DatasetStats stats = compute_stats(dataset, config.workers);
  std::vector<std::string> outputs;
  const std::string json_path = out_path(config, "stats.json");
  write_file(json_path, stats.to_json());
  outputs.push_back(json_path);
  const std::vector<std::string> plot_files =
      emit_plots(stats, config.out_dir, config.format == "svg");
  outputs.insert(outputs.end(), plot_files.begin(), plot_files.end());
  write_manifest(config, "stats", outputs);
  summary_line("stats: " + std::to_string(stats.overall.subpart_annotations) +
                   " subpart annotations, " + std::to_string(stats.skipped) + " skipped",
               true);
  return kExitOk;
}

int cmd_eval(const RunConfig& config) {
  Dataset dataset;
  PredictionSet predictions;
  try {
    dataset = load_dataset(config.dataset_path, config.strict);
    if (config.prediction_paths.size() != 1) {
      summary_line("eval: exactly one --predictions file required", false);
      return kExitUsage;
    }
    predictions = load_predictions(config.prediction_paths[0], dataset, config.mode);
  } catch (const std::exception& e) {
    summary_line(std::string("eval: parse failure (") + e.what() + ")", false);
    return kExitUsage;
  }
  MetricReport report = evaluate(predictions, dataset, config.averaging, config.workers);
  report.method = config.method;
  report.params = config.params;
  const std::string json_path = out_path(config, "eval_report.json");
  write_file(json_path, report.to_json());
  std::vector<std::string> outputs = {json_path};
  const std::string table = config.format == "md"
                                ? render_localization_table_md({report})
                                : render_localization_table_csv({report});
  const std::string table_path =
      out_path(config, config.format == "md" ? "eval_table.md" : "eval_table.csv");
  write_file(table_path, table);
  outputs.push_back(table_path);
  write_manifest(config, "eval", outputs);
  summary_line("eval: " + std::to_string(predictions.queries.size() +
                                         predictions.semantic.size()) +
                   " predictions scored",
               true);
  return kExitOk;
}

int cmd_recog(const RunConfig& config) {
  Dataset dataset;
  std::vector<RecognitionAnswer> answers;
  try {
    dataset = load_dataset(config.dataset_path, config.strict);
    answers = load_recognition_answers(config.recognition_path);
  } catch (const std::exception& e) {
    summary_line(std::string("recog: parse failure (") + e.what() + ")", false);
    return kExitUsage;
  }
  MetricReport report;
  report.method = config.method;
  report.params = config.params;
  try {
    for (int si = 0; si < 2; ++si)
      for (int lvl = 0; lvl < 3; ++lvl)
        report.recognition[si][lvl] = recognition_accuracy(
            answers, dataset, static_cast<Level>(lvl),
            si == 0 ? Specificity::General : Specificity::Specific);
  } catch (const std::exception& e) {
    summary_line(std::string("recog: ") + e.what(), false);
    return kExitUsage;
  }
  const std::string json_path = out_path(config, "recognition_report.json");
  write_file(json_path, report.to_json());
  const std::string table = config.format == "md" ? render_recognition_table_md({report})
                                                  : render_recognition_table_csv({report});
  const std::string table_path =
      out_path(config, config.format == "md" ? "recognition_table.md"
                                             : "recognition_table.csv");
  write_file(table_path, table);
  write_manifest(config, "recog", {json_path, table_path});
  summary_line("recog: " + std::to_string(answers.size()) + " answers scored", true);
  return kExitOk;
}

int cmd_regress(const RunConfig& config) {
  Dataset dataset;
  PredictionSet predictions;
  try {
    dataset = load_dataset(config.dataset_path, config.strict);
    if (config.prediction_paths.size() != 1) {
      summary_line("regress: exactly one --predictions file required", false);
      return kExitUsage;
    }
    predictions =
        load_predictions(config.prediction_paths[0], dataset, PredictionMode::Query);
  } catch (const std::exception& e) {
    summary_line(std::string("regress: parse failure (") + e.what() + ")", false);
    return kExitUsage;
  }

  // One fit per group; a group is a level (default) or a category.
  std::map<std::string, std::vector<std::pair<double, double>>> groups;
  for (const QueryPrediction& q : predictions.queries) {
    const BitMask gt = dataset.ground_truth_mask(q.image_id, q.category);
    if (gt.area() == 0) continue;
    const double score = q.abstain ? 0.0 : iou(prediction_mask(q, dataset), gt);
    const std::string key = config.group_by == "category"
                                ? q.category
                                : level_name(dataset.taxonomy.at(q.category).level);
    groups[key].push_back({static_cast<double>(gt.area()), score});
  }

  std::ostringstream csv;
  csv << "group,n,beta0,beta1,r_squared,p_value,significant\n";
  ordered_json doc = ordered_json::object();
  for (const auto& [key, points] : groups) {
    try {
      const RegressionResult r = fit_iou_size(points);
      char line[256];
      std::snprintf(line, sizeof(line), "%s,%lld,%.9g,%.9g,%.9g,%.9g,%s\n", key.c_str(),
                    static_cast<long long>(r.n), r.beta0, r.beta1, r.r_squared, r.p_value,
                    r.significant ? "yes" : "no");
      csv << line;
      doc[key] = {{"n", r.n},
                  {"beta0", r.beta0},
                  {"beta1", r.beta1},
                  {"r_squared", r.r_squared},
                  {"p_value", r.p_value},
                  {"significant", r.significant}};
    } catch (const AnalysisError& e) {
      csv << key << ",,,,,," << '\n';
      doc[key] = {{"error", e.what()}};
    }
  }
  const std::string csv_path = out_path(config, "regression.csv");
  const std::string json_path = out_path(config, "regression.json");
  write_file(csv_path, csv.str());
  write_file(json_path, doc.dump(2));
  write_manifest(config, "regress", {csv_path, json_path});
  summary_line("regress: " + std::to_string(groups.size()) + " groups fitted", true);
  return kExitOk;
}

int cmd_report(const RunConfig& config) {
  std::vector<MetricReport> reports;
  try {
    for (const std::string& path : config.report_paths)
      reports.push_back(metric_report_from_json(read_file(path)));
  } catch (const std::exception& e) {
    summary_line(std::string("report: parse failure (") + e.what() + ")", false);
    return kExitUsage;
  }
  if (reports.empty()) {
    summary_line("report: at least one eval report required", false);
    return kExitUsage;
  }
  std::vector<std::string> outputs;
  const bool md = config.format == "md";
  const std::string loc = md ? render_localization_table_md(reports)
                             : render_localization_table_csv(reports);
  const std::string loc_path =
      out_path(config, md ? "localization_table.md" : "localization_table.csv");
  write_file(loc_path, loc);
  outputs.push_back(loc_path);
  const std::string rec =
      md ? render_recognition_table_md(reports) : render_recognition_table_csv(reports);
  const std::string rec_path =
      out_path(config, md ? "recognition_table.md" : "recognition_table.csv");
  write_file(rec_path, rec);
  outputs.push_back(rec_path);
  write_manifest(config, "report", outputs);
  summary_line("report: merged " + std::to_string(reports.size()) + " methods", true);
  return kExitOk;
}

}  // namespace hiereval
