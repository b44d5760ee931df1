#include "hiereval/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hiereval/stats_math.hpp"

namespace hiereval {

using nlohmann::ordered_json;

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double pos = p * static_cast<double>(n - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = static_cast<size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

BoxplotSummary boxplot(std::vector<double> values) {
  if (values.empty()) throw AnalysisError("boxplot of empty input");
  std::sort(values.begin(), values.end());
  BoxplotSummary s;
  s.n = static_cast<std::int64_t>(values.size());
  s.q25 = quantile_sorted(values, 0.25);
  s.median = quantile_sorted(values, 0.5);
  s.q75 = quantile_sorted(values, 0.75);
  const double iqr = s.q75 - s.q25;
  const double lo_fence = s.q25 - 1.5 * iqr;
  const double hi_fence = s.q75 + 1.5 * iqr;
  s.whisker_lo = s.q75;
  s.whisker_hi = s.q25;
  bool any_inlier = false;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      s.outliers.push_back(v);
    } else {
      if (!any_inlier) {
        s.whisker_lo = v;
        s.whisker_hi = v;
        any_inlier = true;
      } else {
        s.whisker_lo = std::min(s.whisker_lo, v);
        s.whisker_hi = std::max(s.whisker_hi, v);
      }
    }
  }
  return s;
}

RegressionResult fit_iou_size(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw AnalysisError("regression needs at least 3 points");
  const auto n = static_cast<double>(points.size());
  std::vector<double> xs;
  xs.reserve(points.size());
  for (const auto& [size, iou_value] : points) {
    if (!(size > 0.0)) throw AnalysisError("region size must be positive");
    xs.push_back(std::log(size));
  }
  double xbar = 0.0, ybar = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    xbar += xs[i];
    ybar += points[i].second;
  }
  xbar /= n;
  ybar /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    const double dx = xs[i] - xbar;
    const double dy = points[i].second - ybar;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0) throw AnalysisError("degenerate fit: zero variance in log(region size)");

  RegressionResult r;
  r.n = static_cast<std::int64_t>(points.size());
  r.beta1 = sxy / sxx;
  r.beta0 = ybar - r.beta1 * xbar;
  r.r_squared = syy == 0.0 ? 0.0 : (sxy * sxy) / (sxx * syy);

  const double ss_res = syy - r.beta1 * sxy;
  const double df = n - 2.0;
  const double var_res = std::max(ss_res, 0.0) / df;
  const double se = std::sqrt(var_res / sxx);
  if (se == 0.0) {
    r.p_value = r.beta1 == 0.0 ? 1.0 : 0.0;
  } else {
    r.p_value = t_test_two_sided(r.beta1 / se, df);
  }
  r.significant = r.p_value < 0.001;
  return r;
}

double GroupStats::bucket_fraction(SizeBucket b) const {
  if (subpart_annotations == 0) return 0.0;
  return static_cast<double>(bucket_counts[static_cast<int>(b)]) /
         static_cast<double>(subpart_annotations);
}

double GroupStats::holes_fraction() const {
  if (subpart_annotations == 0) return 0.0;
  return static_cast<double>(with_holes) / static_cast<double>(subpart_annotations);
}

double GroupStats::multi_polygon_fraction() const {
  if (subpart_annotations == 0) return 0.0;
  return static_cast<double>(multi_polygon) / static_cast<double>(subpart_annotations);
}

namespace {

void append(GroupStats& dst, const GroupStats& src) {
  auto cat = [](std::vector<double>& a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
  };
  cat(dst.subparts_per_part, src.subparts_per_part);
  cat(dst.boundary_complexity, src.boundary_complexity);
  cat(dst.extent, src.extent);
  cat(dst.image_coverage, src.image_coverage);
  cat(dst.object_coverage, src.object_coverage);
  cat(dst.part_coverage, src.part_coverage);
  for (int i = 0; i < 3; ++i) dst.bucket_counts[i] += src.bucket_counts[i];
  dst.subpart_annotations += src.subpart_annotations;
  dst.with_holes += src.with_holes;
  dst.multi_polygon += src.multi_polygon;
}

struct ImageStats {
  std::map<std::string, GroupStats> per_object;
  std::map<std::string, std::int64_t> per_part_occurrences;
  std::int64_t skipped = 0;
};

void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  auto run = [&] {
    for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> threads;
  const int count = std::min<int>(workers, static_cast<int>(n));
  for (int t = 0; t < count; ++t) threads.emplace_back(run);
  for (std::thread& t : threads) t.join();
}

}  // namespace

DatasetStats compute_stats(const Dataset& dataset, int workers) {
  std::vector<ImageStats> per_image(dataset.images.size());

  parallel_for(dataset.images.size(), workers, [&](size_t img_idx) {
    const ImageRecord& img = dataset.images[img_idx];
    ImageStats& out = per_image[img_idx];
    auto rows_it = dataset.annotation_index.find(img.image_id);
    if (rows_it == dataset.annotation_index.end()) return;

    const std::string object_name = split_path(img.object_path)[0];
    GroupStats& group = out.per_object[object_name];

    // Parent masks are shared across the image's subpart annotations.
    BitMask object_mask;
    bool object_mask_ready = false;
    std::map<std::string, BitMask> part_masks;
    std::map<std::string, std::vector<std::string>> subpart_cats_per_part;

    for (size_t row : rows_it->second) {
      const AnnotationRecord& ann = dataset.annotations[row];
      const CategoryNode& node = dataset.taxonomy.at(ann.category);
      if (node.level != Level::Subpart) continue;

      const BitMask mask = rasterize(ann.region, img.width, img.height);
      if (mask.area() == 0) {
        ++out.skipped;
        continue;
      }
      ++group.subpart_annotations;
      ++group.bucket_counts[static_cast<int>(size_bucket(mask.area()))];
      ++out.per_part_occurrences[join_path({node.path[0], node.path[1]})];

      const std::string part_path = join_path({node.path[0], node.path[1]});
      auto& seen = subpart_cats_per_part[part_path];
      if (std::find(seen.begin(), seen.end(), ann.category) == seen.end())
        seen.push_back(ann.category);

      try {
        const NestingInfo nesting = analyze_nesting(ann.region);
        if (nesting.hole_count > 0) ++group.with_holes;
        if (nesting.polygon_count > 1) ++group.multi_polygon;
        group.boundary_complexity.push_back(mean_boundary_complexity(ann.region));
        group.extent.push_back(mean_extent(ann.region));
      } catch (const GeometryError&) {
        // Degenerate vector geometry with nonzero raster area: shape
        // descriptors skipped, raster statistics kept.
      }

      group.image_coverage.push_back(image_coverage(mask));

      if (!object_mask_ready) {
        object_mask = dataset.ground_truth_mask(img.image_id, img.object_path);
        object_mask_ready = true;
      }
      if (object_mask.area() > 0)
        group.object_coverage.push_back(coverage(mask, object_mask));

      auto part_it = part_masks.find(part_path);
      if (part_it == part_masks.end())
        part_it = part_masks
                      .emplace(part_path,
                               dataset.ground_truth_mask(img.image_id, part_path))
                      .first;
      if (part_it->second.area() > 0)
        group.part_coverage.push_back(coverage(mask, part_it->second));
    }

    for (const auto& [part_path, cats] : subpart_cats_per_part)
      group.subparts_per_part.push_back(static_cast<double>(cats.size()));
  });

  DatasetStats stats;
  for (const ImageStats& img_stats : per_image) {
    for (const auto& [object_name, group] : img_stats.per_object) {
      append(stats.per_object[object_name], group);
      append(stats.overall, group);
    }
    for (const auto& [part, count] : img_stats.per_part_occurrences)
      stats.subpart_occurrences_per_part[part] += count;
    stats.skipped += img_stats.skipped;
  }
  return stats;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

ordered_json group_json(const GroupStats& g) {
  auto summary = [](const std::vector<double>& values) -> ordered_json {
    if (values.empty()) return nullptr;
    const BoxplotSummary s = boxplot(values);
    return ordered_json{{"n", s.n},       {"q25", s.q25},
                        {"median", s.median}, {"q75", s.q75},
                        {"whisker_lo", s.whisker_lo}, {"whisker_hi", s.whisker_hi},
                        {"outlier_count", s.outliers.size()}};
  };
  ordered_json j;
  j["subpart_annotations"] = g.subpart_annotations;
  j["size_buckets"] = {{"small", g.bucket_counts[0]},
                       {"medium", g.bucket_counts[1]},
                       {"large", g.bucket_counts[2]}};
  j["size_bucket_fractions"] = {{"small", g.bucket_fraction(SizeBucket::Small)},
                                {"medium", g.bucket_fraction(SizeBucket::Medium)},
                                {"large", g.bucket_fraction(SizeBucket::Large)}};
  j["holes_fraction"] = g.holes_fraction();
  j["multi_polygon_fraction"] = g.multi_polygon_fraction();
  j["subparts_per_part"] = summary(g.subparts_per_part);
  j["boundary_complexity"] = summary(g.boundary_complexity);
  j["extent"] = summary(g.extent);
  j["image_coverage"] = summary(g.image_coverage);
  j["object_coverage"] = summary(g.object_coverage);
  j["part_coverage"] = summary(g.part_coverage);
  return j;
}

}  // namespace

std::string DatasetStats::to_json() const {
  ordered_json doc;
  doc["overall"] = group_json(overall);
  ordered_json per_obj = ordered_json::object();
  for (const auto& [name, group] : per_object) per_obj[name] = group_json(group);
  doc["per_object"] = per_obj;
  ordered_json occurrences = ordered_json::object();
  for (const auto& [part, count] : subpart_occurrences_per_part) occurrences[part] = count;
  doc["subpart_occurrences_per_part"] = occurrences;
  doc["skipped_degenerate"] = skipped;
  return doc.dump(2);
}

std::string render_boxplot_svg(
    const std::string& title,
    const std::vector<std::pair<std::string, BoxplotSummary>>& panels) {
  // Fixed viewBox, deterministic element order: same input gives identical
  // bytes.
  constexpr int kWidth = 800;
  constexpr int kHeight = 360;
  constexpr int kMarginLeft = 60;
  constexpr int kMarginTop = 40;
  constexpr int kPlotHeight = 260;

  double vmin = 0.0, vmax = 1.0;
  bool first = true;
  for (const auto& [name, s] : panels) {
    double lo = s.whisker_lo, hi = s.whisker_hi;
    for (double o : s.outliers) {
      lo = std::min(lo, o);
      hi = std::max(hi, o);
    }
    if (first) {
      vmin = lo;
      vmax = hi;
      first = false;
    } else {
      vmin = std::min(vmin, lo);
      vmax = std::max(vmax, hi);
    }
  }
  if (vmax == vmin) vmax = vmin + 1.0;

  auto y_of = [&](double v) {
    return kMarginTop + kPlotHeight * (1.0 - (v - vmin) / (vmax - vmin));
  };

  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-size=\"14\">" << title << "</text>\n";
  const double slot = panels.empty()
                          ? 0.0
                          : static_cast<double>(kWidth - kMarginLeft - 20) /
                                static_cast<double>(panels.size());
  for (size_t i = 0; i < panels.size(); ++i) {
    const auto& [name, s] = panels[i];
    const double cx = kMarginLeft + slot * (static_cast<double>(i) + 0.5);
    const double half = std::min(slot * 0.3, 24.0);
    svg << "<line x1=\"" << cx << "\" y1=\"" << y_of(s.whisker_lo) << "\" x2=\"" << cx
        << "\" y2=\"" << y_of(s.whisker_hi) << "\" stroke=\"black\"/>\n";
    svg << "<rect x=\"" << cx - half << "\" y=\"" << y_of(s.q75) << "\" width=\""
        << 2 * half << "\" height=\"" << y_of(s.q25) - y_of(s.q75)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << cx - half << "\" y1=\"" << y_of(s.median) << "\" x2=\""
        << cx + half << "\" y2=\"" << y_of(s.median) << "\" stroke=\"blue\"/>\n";
    for (double o : s.outliers)
      svg << "<circle cx=\"" << cx << "\" cy=\"" << y_of(o) << "\" r=\"2\" fill=\"none\" "
          << "stroke=\"black\"/>\n";
    svg << "<text x=\"" << cx << "\" y=\"" << kMarginTop + kPlotHeight + 20
        << "\" text-anchor=\"middle\" font-size=\"10\">" << name << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string> emit_plots(const DatasetStats& stats, const std::string& out_dir,
                                    bool svg) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;

  const std::vector<std::pair<std::string, std::vector<double> GroupStats::*>> metrics = {
      {"subparts_per_part", &GroupStats::subparts_per_part},
      {"boundary_complexity", &GroupStats::boundary_complexity},
      {"extent", &GroupStats::extent},
      {"image_coverage", &GroupStats::image_coverage},
      {"object_coverage", &GroupStats::object_coverage},
      {"part_coverage", &GroupStats::part_coverage},
  };

  {
    std::ostringstream csv;
    csv << "metric,group,n,q25,median,q75,whisker_lo,whisker_hi,outliers\n";
    for (const auto& [metric_name, member] : metrics) {
      auto emit_row = [&](const std::string& group_name, const GroupStats& g) {
        const std::vector<double>& values = g.*member;
        if (values.empty()) {
          csv << metric_name << ',' << group_name << ",0,,,,,,\n";
          return;
        }
        const BoxplotSummary s = boxplot(values);
        csv << metric_name << ',' << group_name << ',' << s.n << ',' << fmt(s.q25) << ','
            << fmt(s.median) << ',' << fmt(s.q75) << ',' << fmt(s.whisker_lo) << ','
            << fmt(s.whisker_hi) << ',' << s.outliers.size() << '\n';
      };
      emit_row("overall", stats.overall);
      for (const auto& [name, group] : stats.per_object) emit_row(name, group);
    }
    const std::string path = (fs::path(out_dir) / "stats_boxplots.csv").string();
    write_file(path, csv.str());
    written.push_back(path);
  }

  {
    std::ostringstream csv;
    csv << "group,small,medium,large,holes_fraction,multi_polygon_fraction,annotations\n";
    auto emit_row = [&](const std::string& name, const GroupStats& g) {
      csv << name << ',' << fmt(g.bucket_fraction(SizeBucket::Small)) << ','
          << fmt(g.bucket_fraction(SizeBucket::Medium)) << ','
          << fmt(g.bucket_fraction(SizeBucket::Large)) << ',' << fmt(g.holes_fraction())
          << ',' << fmt(g.multi_polygon_fraction()) << ',' << g.subpart_annotations << '\n';
    };
    emit_row("overall", stats.overall);
    for (const auto& [name, group] : stats.per_object) emit_row(name, group);
    const std::string path = (fs::path(out_dir) / "stats_fractions.csv").string();
    write_file(path, csv.str());
    written.push_back(path);
  }

  {
    std::ostringstream csv;
    csv << "part,subpart_annotations\n";
    for (const auto& [part, count] : stats.subpart_occurrences_per_part)
      csv << part << ',' << count << '\n';
    const std::string path = (fs::path(out_dir) / "subpart_occurrences.csv").string();
    write_file(path, csv.str());
    written.push_back(path);
  }

  if (svg) {
    for (const auto& [metric_name, member] : metrics) {
      std::vector<std::pair<std::string, BoxplotSummary>> panels;
      if (!(stats.overall.*member).empty())
        panels.emplace_back("overall", boxplot(stats.overall.*member));
      for (const auto& [name, group] : stats.per_object)
        if (!(group.*member).empty()) panels.emplace_back(name, boxplot(group.*member));
      if (panels.empty()) continue;
      const std::string path =
          (fs::path(out_dir) / ("boxplot_" + metric_name + ".svg")).string();
      write_file(path, render_boxplot_svg(metric_name, panels));
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace hiereval
