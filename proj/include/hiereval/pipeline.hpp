#pragma once

#include "hiereval/analysis.hpp"
#include "hiereval/metrics.hpp"
#include "hiereval/report.hpp"

namespace hiereval {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct RunConfig {
  std::string dataset_path;
  std::vector<std::string> prediction_paths;
  std::vector<std::string> report_paths;  // eval outputs merged by cmd_report
  std::string recognition_path;
  std::optional<PredictionMode> mode;
  Averaging averaging = Averaging::PerQuery;
  std::string specificity = "both";  // general | specific | both
  std::map<std::string, std::string> expectations;
  std::string out_dir = ".";
  int workers = 1;
  bool strict = false;
  std::string format = "csv";  // csv | md | svg
  std::string method = "method";
  std::string params;
  std::string group_by = "level";  // regression grouping: level | category
};

// Exit-code contract: 0 success, 1 semantic failure, 2 usage/parse error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int cmd_validate(const RunConfig& config);
int cmd_stats(const RunConfig& config);
int cmd_eval(const RunConfig& config);
int cmd_recog(const RunConfig& config);
int cmd_regress(const RunConfig& config);
int cmd_report(const RunConfig& config);

// FNV-1a 64-bit digest of file bytes, as fixed-width hex.
std::string file_digest(const std::string& path);

void write_manifest(const RunConfig& config, const std::string& command,
                    const std::vector<std::string>& outputs);

}  // namespace hiereval
