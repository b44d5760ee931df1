#pragma once

#include "hiereval/dataset.hpp"

namespace hiereval {

struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoxplotSummary {
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
  std::vector<double> outliers;
  std::int64_t n = 0;
};

// Quartiles by linear interpolation between closest ranks; Tukey whiskers at
// 1.5 * IQR clamped to observed data.
BoxplotSummary boxplot(std::vector<double> values);

struct RegressionResult {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double r_squared = 0.0;
  double p_value = 1.0;
  std::int64_t n = 0;
  bool significant = false;  // p < 0.001
};

// OLS of iou on ln(region_size) with a two-sided t-test on beta1.
RegressionResult fit_iou_size(const std::vector<std::pair<double, double>>& points);

struct GroupStats {
  std::vector<double> subparts_per_part;  // distinct subpart categories per (image, part)
  std::vector<double> boundary_complexity;
  std::vector<double> extent;
  std::vector<double> image_coverage;
  std::vector<double> object_coverage;
  std::vector<double> part_coverage;
  std::int64_t bucket_counts[3] = {0, 0, 0};
  std::int64_t subpart_annotations = 0;
  std::int64_t with_holes = 0;
  std::int64_t multi_polygon = 0;

  double bucket_fraction(SizeBucket b) const;
  double holes_fraction() const;
  double multi_polygon_fraction() const;
};

struct DatasetStats {
  GroupStats overall;
  std::map<std::string, GroupStats> per_object;  // keyed by general object name
  std::map<std::string, std::int64_t> subpart_occurrences_per_part;
  std::int64_t skipped = 0;  // degenerate annotations excluded

  std::string to_json() const;
};

DatasetStats compute_stats(const Dataset& dataset, int workers = 1);

// Deterministic CSV (always) and SVG boxplot panels (optional) under out_dir.
// Returns the list of files written.
std::vector<std::string> emit_plots(const DatasetStats& stats, const std::string& out_dir,
                                    bool svg);

std::string render_boxplot_svg(const std::string& title,
                               const std::vector<std::pair<std::string, BoxplotSummary>>& panels);

}  // namespace hiereval
