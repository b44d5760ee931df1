#include <doctest.h>

#include <filesystem>
#include <numbers>

#include "hiereval/analysis.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace hiereval;

namespace {
const std::string kFixtures = TEST_FIXTURE_DIR;
}

TEST_CASE("boxplot of 1..5") {
  const BoxplotSummary s = boxplot({1, 2, 3, 4, 5});
  CHECK(s.q25 == doctest::Approx(2.0));
  CHECK(s.median == doctest::Approx(3.0));
  CHECK(s.q75 == doctest::Approx(4.0));
  CHECK(s.whisker_lo == doctest::Approx(1.0));
  CHECK(s.whisker_hi == doctest::Approx(5.0));
  CHECK(s.outliers.empty());
  CHECK(s.n == 5);
}

TEST_CASE("boxplot flags a far outlier and clamps whiskers to data") {
  std::vector<double> values;
  for (int i = 1; i <= 99; ++i) values.push_back(i);
  values.push_back(1000.0);
  const BoxplotSummary s = boxplot(values);
  CHECK(s.q25 == doctest::Approx(25.75));
  CHECK(s.q75 == doctest::Approx(75.25));
  CHECK(s.whisker_lo == doctest::Approx(1.0));
  CHECK(s.whisker_hi == doctest::Approx(99.0));
  REQUIRE(s.outliers.size() == 1);
  CHECK(s.outliers[0] == doctest::Approx(1000.0));
}

TEST_CASE("boxplot edge cases") {
  const BoxplotSummary one = boxplot({7.0});
  CHECK(one.median == 7.0);
  CHECK(one.whisker_lo == 7.0);
  CHECK(one.whisker_hi == 7.0);
  CHECK_THROWS_AS(boxplot({}), AnalysisError);
}

TEST_CASE("boxplot matches the direct Tukey oracle on random samples") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> count(2, 200);
  std::normal_distribution<double> value(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> values;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) values.push_back(value(rng));
    // Occasionally inject gross outliers.
    if (trial % 3 == 0) values.push_back(100.0 + trial);
    const BoxplotSummary got = boxplot(values);
    const oracle::TukeySummary want = oracle::tukey(values);
    CHECK(got.q25 == doctest::Approx(want.q25).epsilon(1e-12));
    CHECK(got.median == doctest::Approx(want.median).epsilon(1e-12));
    CHECK(got.q75 == doctest::Approx(want.q75).epsilon(1e-12));
    CHECK(got.whisker_lo == doctest::Approx(want.lo).epsilon(1e-12));
    CHECK(got.whisker_hi == doctest::Approx(want.hi).epsilon(1e-12));
    CHECK(got.outliers.size() == want.outliers.size());
  }
}

TEST_CASE("regression recovers an exact linear relation in log size") {
  std::vector<std::pair<double, double>> points;
  for (double size : {10.0, 50.0, 120.0, 900.0, 4000.0})
    points.emplace_back(size, 0.2 + 0.1 * std::log(size));
  const RegressionResult r = fit_iou_size(points);
  CHECK(r.beta0 == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(r.beta1 == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(r.r_squared == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.significant);
}

TEST_CASE("regression on constant response is flat and insignificant") {
  std::vector<std::pair<double, double>> points;
  for (double size : {10.0, 50.0, 120.0, 900.0}) points.emplace_back(size, 0.5);
  const RegressionResult r = fit_iou_size(points);
  CHECK(r.beta1 == doctest::Approx(0.0));
  CHECK(r.r_squared == doctest::Approx(0.0));
  CHECK(r.p_value == doctest::Approx(1.0));
  CHECK_FALSE(r.significant);
}

TEST_CASE("regression rejects degenerate inputs") {
  CHECK_THROWS_AS(fit_iou_size({{10.0, 0.5}, {20.0, 0.6}}), AnalysisError);
  CHECK_THROWS_AS(fit_iou_size({{10.0, 0.5}, {-1.0, 0.6}, {20.0, 0.7}}), AnalysisError);
  CHECK_THROWS_AS(fit_iou_size({{10.0, 0.5}, {10.0, 0.6}, {10.0, 0.7}}), AnalysisError);
}

TEST_CASE("regression matches the quadrature oracle on noisy samples") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> size(5.0, 50000.0);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::pair<double, double>> points;
    const double slope = (trial % 2 == 0) ? 0.03 : 0.0;
    for (int i = 0; i < 40; ++i) {
      const double s = size(rng);
      points.emplace_back(s, 0.4 + slope * std::log(s) + noise(rng));
    }
    const RegressionResult got = fit_iou_size(points);
    const oracle::OlsFit want = oracle::ols_log_fit(points);
    CHECK(got.beta0 == doctest::Approx(want.beta0).epsilon(1e-9));
    CHECK(got.beta1 == doctest::Approx(want.beta1).epsilon(1e-9));
    CHECK(got.r_squared == doctest::Approx(want.r_squared).epsilon(1e-9));
    CHECK(got.p_value == doctest::Approx(want.p_value).epsilon(1e-6));
  }
}

TEST_CASE("dataset statistics on the synthetic fixture") {
  const Dataset ds = load_dataset(kFixtures + "/mini_dataset.json");
  const DatasetStats stats = compute_stats(ds);
  const GroupStats& all = stats.overall;
  CHECK(all.subpart_annotations == 3);  // eyes, nose, windshield
  CHECK(all.bucket_counts[0] == 3);     // 4-pixel regions are all small
  CHECK(all.with_holes == 0);
  CHECK(all.multi_polygon == 0);
  CHECK(stats.skipped == 0);

  // All three subparts are 2x2 squares.
  REQUIRE(all.boundary_complexity.size() == 3);
  for (double q : all.boundary_complexity)
    CHECK(q == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-12));
  for (double e : all.extent) CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
  for (double c : all.image_coverage) CHECK(c == doctest::Approx(0.04));

  // head carries two distinct subparts in img1; body carries one in img2.
  REQUIRE(all.subparts_per_part.size() == 2);
  CHECK(stats.subpart_occurrences_per_part.at("quadruped/head") == 2);
  CHECK(stats.subpart_occurrences_per_part.at("car/body") == 1);

  const GroupStats& quad = stats.per_object.at("quadruped");
  CHECK(quad.subpart_annotations == 2);
  REQUIRE(quad.object_coverage.size() == 2);
  CHECK(quad.object_coverage[0] == doctest::Approx(4.0 / 64.0));
  REQUIRE(quad.part_coverage.size() == 2);
  CHECK(quad.part_coverage[0] == doctest::Approx(4.0 / 16.0));
  const GroupStats& car = stats.per_object.at("car");
  CHECK(car.subpart_annotations == 1);
  CHECK(car.object_coverage[0] == doctest::Approx(4.0 / 36.0));

  CHECK(compute_stats(ds, 8).to_json() == stats.to_json());
}

TEST_CASE("stats detect holes and multi-polygon regions") {
  const std::string text = R"({
    "version": 1,
    "taxonomy": {"version": 1, "objects": [
      {"general": "car", "parts": [{"name": "body", "subparts": ["windshield"]}]}]},
    "images": [{"id": "a", "width": 20, "height": 20, "split": "train", "object": "car"}],
    "annotations": [
      {"image": "a", "category": "car",
       "rings": [[[0, 0], [20, 0], [20, 20], [0, 20]]]},
      {"image": "a", "category": "car/body",
       "rings": [[[0, 0], [20, 0], [20, 20], [0, 20]]]},
      {"image": "a", "category": "car/body/windshield",
       "rings": [[[0, 0], [10, 0], [10, 10], [0, 10]],
                 [[2, 2], [8, 2], [8, 8], [2, 8]],
                 [[12, 12], [18, 12], [18, 18], [12, 18]]]}
    ]
  })";
  const DatasetStats stats = compute_stats(load_dataset_text(text, "."));
  CHECK(stats.overall.subpart_annotations == 1);
  CHECK(stats.overall.with_holes == 1);
  CHECK(stats.overall.multi_polygon == 1);
  CHECK(stats.overall.holes_fraction() == doctest::Approx(1.0));
}

TEST_CASE("emit_plots writes deterministic artifacts") {
  const Dataset ds = load_dataset(kFixtures + "/mini_dataset.json");
  const DatasetStats stats = compute_stats(ds);
  const std::string out = (std::filesystem::temp_directory_path() / "hiereval_plots").string();
  const auto files = emit_plots(stats, out, /*svg=*/true);
  CHECK(files.size() >= 3);
  for (const std::string& f : files) CHECK(std::filesystem::exists(f));
  const std::string first = read_file(files[0]);
  CHECK(first.rfind("metric,group,", 0) == 0);
  // Re-emitting produces identical bytes.
  emit_plots(stats, out, /*svg=*/true);
  CHECK(read_file(files[0]) == first);
  const std::string svg = render_boxplot_svg("t", {{"a", boxplot({1, 2, 3})}});
  CHECK(svg.rfind("<svg", 0) == 0);
}
