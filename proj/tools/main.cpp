#include <iostream>

#include <CLI11.hpp>

#include "hiereval/pipeline.hpp"

namespace {

void add_common(CLI::App* cmd, hiereval::RunConfig& config) {
  cmd->add_option("--out", config.out_dir, "Output directory");
  cmd->add_option("--workers", config.workers, "Worker thread count")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--strict", config.strict, "Reject unknown keys and be pedantic");
  cmd->add_option("--format", config.format, "Output format")
      ->check(CLI::IsMember({"csv", "md", "svg"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical segmentation evaluation toolkit"};
  app.require_subcommand(1);

  hiereval::RunConfig config;
  std::vector<std::string> expect_raw;
  std::string averaging = "per-query";
  std::string mode;

  CLI::App* validate = app.add_subcommand("validate", "Validate a dataset file");
  validate->add_option("--dataset", config.dataset_path, "Dataset file")->required();
  validate->add_option("--expect", expect_raw, "Expected counts, k=v (repeatable)");
  add_common(validate, config);

  CLI::App* stats = app.add_subcommand("stats", "Dataset characterization statistics");
  stats->add_option("--dataset", config.dataset_path, "Dataset file")->required();
  add_common(stats, config);

  CLI::App* eval = app.add_subcommand("eval", "Score predictions against ground truth");
  eval->add_option("--dataset", config.dataset_path, "Dataset file")->required();
  eval->add_option("--predictions", config.prediction_paths, "Prediction file")->required();
  eval->add_option("--mode", mode, "Prediction mode")
      ->check(CLI::IsMember({"query", "semantic"}));
  eval->add_option("--averaging", averaging, "mIoU averaging mode")
      ->check(CLI::IsMember({"per-query", "per-category"}));
  eval->add_option("--specificity", config.specificity, "Specificity filter")
      ->check(CLI::IsMember({"general", "specific", "both"}));
  eval->add_option("--method", config.method, "Method name for report rows");
  eval->add_option("--params", config.params, "Parameter-count label for report rows");
  add_common(eval, config);

  CLI::App* recog = app.add_subcommand("recog", "Score recognition answers");
  recog->add_option("--dataset", config.dataset_path, "Dataset file")->required();
  recog->add_option("--answers", config.recognition_path, "Recognition answers file")
      ->required();
  recog->add_option("--method", config.method, "Method name for report rows");
  recog->add_option("--params", config.params, "Parameter-count label for report rows");
  add_common(recog, config);

  CLI::App* regress = app.add_subcommand("regress", "IoU vs region-size regression");
  regress->add_option("--dataset", config.dataset_path, "Dataset file")->required();
  regress->add_option("--predictions", config.prediction_paths, "Prediction file")
      ->required();
  regress->add_option("--group-by", config.group_by, "Fit grouping")
      ->check(CLI::IsMember({"level", "category"}));
  add_common(regress, config);

  CLI::App* report = app.add_subcommand("report", "Merge eval outputs into tables");
  report->add_option("--reports", config.report_paths, "Eval report JSON files")
      ->required();
  add_common(report, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return hiereval::kExitUsage;
  }

  config.averaging = averaging == "per-category" ? hiereval::Averaging::PerCategory
                                                 : hiereval::Averaging::PerQuery;
  if (mode == "query") config.mode = hiereval::PredictionMode::Query;
  if (mode == "semantic") config.mode = hiereval::PredictionMode::Semantic;
  for (const std::string& kv : expect_raw) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "--expect needs k=v, got: " << kv << '\n';
      return hiereval::kExitUsage;
    }
    config.expectations[kv.substr(0, eq)] = kv.substr(eq + 1);
  }

  try {
    if (validate->parsed()) return hiereval::cmd_validate(config);
    if (stats->parsed()) return hiereval::cmd_stats(config);
    if (eval->parsed()) return hiereval::cmd_eval(config);
    if (recog->parsed()) return hiereval::cmd_recog(config);
    if (regress->parsed()) return hiereval::cmd_regress(config);
    if (report->parsed()) return hiereval::cmd_report(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hiereval::kExitUsage;
  }
  return hiereval::kExitUsage;
}
