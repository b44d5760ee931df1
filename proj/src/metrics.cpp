#include "hiereval/metrics.hpp"

#include <atomic>
#include <functional>
#include <thread>

#include <json.hpp>

namespace hiereval {

using nlohmann::ordered_json;

namespace {

// Deterministic parallel map: every index writes only its own slot, so the
// result is identical for any worker count.
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
  threads.reserve(static_cast<size_t>(count));
  for (int t = 0; t < count; ++t) threads.emplace_back(run);
  for (std::thread& t : threads) t.join();
}

int spec_index(Specificity s) { return s == Specificity::General ? 0 : 1; }

}  // namespace

BitMask prediction_mask(const QueryPrediction& pred, const Dataset& dataset) {
  const ImageRecord& img = dataset.image(pred.image_id);
  if (pred.abstain) return BitMask(img.width, img.height);
  if (pred.mask_rle) return rle_decode(*pred.mask_rle, img.width, img.height);
  return mask_from_bbox(*pred.box, img.width, img.height);
}

PairSet build_pairs(const PredictionSet& predictions, const Dataset& dataset, int workers) {
  if (predictions.mode != PredictionMode::Query)
    throw DatasetError("build_pairs requires query-mode predictions");

  // Group query indices per (image, specificity), in first-seen image order.
  struct Group {
    std::string image_id;
    Specificity specificity;
    std::vector<size_t> rows;
  };
  std::vector<Group> groups;
  std::map<std::pair<std::string, int>, size_t> group_index;
  for (size_t i = 0; i < predictions.queries.size(); ++i) {
    const QueryPrediction& q = predictions.queries[i];
    auto key = std::make_pair(q.image_id, spec_index(q.specificity));
    auto it = group_index.find(key);
    if (it == group_index.end()) {
      group_index.emplace(key, groups.size());
      groups.push_back({q.image_id, q.specificity, {i}});
    } else {
      groups[it->second].rows.push_back(i);
    }
  }

  struct LocalResult {
    std::vector<MaskPair> pairs;
    std::int64_t skipped_s2p = 0;
    std::int64_t skipped_p2o = 0;
  };
  std::vector<LocalResult> locals(groups.size());

  parallel_for(groups.size(), workers, [&](size_t g) {
    const Group& group = groups[g];
    LocalResult& local = locals[g];
    std::vector<BitMask> masks(group.rows.size());
    std::vector<const CategoryNode*> cats(group.rows.size());
    for (size_t i = 0; i < group.rows.size(); ++i) {
      const QueryPrediction& q = predictions.queries[group.rows[i]];
      masks[i] = prediction_mask(q, dataset);
      cats[i] = &dataset.taxonomy.at(q.category);
    }
    for (size_t child = 0; child < group.rows.size(); ++child) {
      if (cats[child]->level == Level::Object) continue;
      const Level parent_level = static_cast<Level>(static_cast<int>(cats[child]->level) - 1);
      const PairKind kind =
          cats[child]->level == Level::Subpart ? PairKind::S2P : PairKind::P2O;
      for (size_t parent = 0; parent < group.rows.size(); ++parent) {
        if (cats[parent]->level != parent_level) continue;
        if (!dataset.taxonomy.entails(*cats[child], *cats[parent])) continue;
        const QueryPrediction& child_pred = predictions.queries[group.rows[child]];
        if (child_pred.abstain || masks[child].area() == 0) {
          if (kind == PairKind::S2P)
            ++local.skipped_s2p;
          else
            ++local.skipped_p2o;
          continue;
        }
        MaskPair pair;
        pair.image_id = group.image_id;
        pair.child_category = cats[child]->path_string();
        pair.parent_category = cats[parent]->path_string();
        pair.kind = kind;
        pair.specificity = group.specificity;
        pair.ratio = containment_ratio(masks[child], masks[parent]);
        local.pairs.push_back(std::move(pair));
      }
    }
  });

  PairSet out;
  for (const LocalResult& local : locals) {
    out.pairs.insert(out.pairs.end(), local.pairs.begin(), local.pairs.end());
    out.skipped_s2p += local.skipped_s2p;
    out.skipped_p2o += local.skipped_p2o;
  }
  return out;
}

SpcsResult spcs(const PairSet& pairs) {
  SpcsResult r;
  double sum_all = 0.0, sum_s2p = 0.0, sum_p2o = 0.0;
  for (const MaskPair& p : pairs.pairs) {
    sum_all += p.ratio;
    if (p.kind == PairKind::S2P) {
      sum_s2p += p.ratio;
      ++r.s2p_count;
    } else {
      sum_p2o += p.ratio;
      ++r.p2o_count;
    }
  }
  const std::int64_t total = r.s2p_count + r.p2o_count;
  if (r.s2p_count > 0) r.s2p = sum_s2p / static_cast<double>(r.s2p_count);
  if (r.p2o_count > 0) r.p2o = sum_p2o / static_cast<double>(r.p2o_count);
  // Pair-weighted mean over the union of both lists, not the mean of the
  // two sub-scores.
  if (total > 0) r.avg = sum_all / static_cast<double>(total);
  return r;
}

SecsCounts secs_counts(const SemanticPrediction& pred, const Taxonomy& taxonomy) {
  const size_t n = pred.object_map.size();
  if (pred.part_map.size() != n || pred.subpart_map.size() != n)
    throw DatasetError("semantic map dimension mismatch for image " + pred.image_id);
  SecsCounts counts;
  for (size_t i = 0; i < n; ++i) {
    const int obj = pred.object_map[i];
    const int part = pred.part_map[i];
    const int sub = pred.subpart_map[i];
    if (obj < 0 || part < 0 || sub < 0) continue;  // outside X
    ++counts.total;
    if (taxonomy.entails(sub, part) && taxonomy.entails(part, obj)) ++counts.entailed;
  }
  return counts;
}

std::optional<double> secs(const SemanticPrediction& pred, const Taxonomy& taxonomy) {
  const SecsCounts counts = secs_counts(pred, taxonomy);
  if (counts.total == 0) return std::nullopt;
  return static_cast<double>(counts.entailed) / static_cast<double>(counts.total);
}

namespace {

struct QueryScore {
  bool scored = false;
  double iou_value = 0.0;
};

// Scores every query at (level, specificity); unscored slots stay inert.
std::vector<QueryScore> score_queries(const PredictionSet& predictions,
                                      const Dataset& dataset, Level level,
                                      Specificity specificity, int workers) {
  std::vector<QueryScore> scores(predictions.queries.size());
  parallel_for(predictions.queries.size(), workers, [&](size_t i) {
    const QueryPrediction& q = predictions.queries[i];
    if (q.specificity != specificity) return;
    if (dataset.taxonomy.at(q.category).level != level) return;
    const BitMask gt = dataset.ground_truth_mask(q.image_id, q.category);
    if (q.abstain) {
      if (gt.area() == 0) return;  // declined an absent category
      scores[i] = {true, 0.0};
      return;
    }
    scores[i] = {true, iou(prediction_mask(q, dataset), gt)};
  });
  return scores;
}

}  // namespace

LevelScore miou(const PredictionSet& predictions, const Dataset& dataset, Level level,
                Averaging averaging, Specificity specificity, int workers) {
  if (predictions.mode != PredictionMode::Query)
    throw DatasetError("miou requires query-mode predictions");
  const std::vector<QueryScore> scores =
      score_queries(predictions, dataset, level, specificity, workers);

  LevelScore out;
  if (averaging == Averaging::PerQuery) {
    double sum = 0.0;
    for (const QueryScore& s : scores) {
      if (!s.scored) continue;
      sum += s.iou_value;
      ++out.count;
    }
    if (out.count > 0) out.mean = sum / static_cast<double>(out.count);
    return out;
  }

  // Per-category macro average.
  std::map<std::string, std::pair<double, std::int64_t>> by_category;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!scores[i].scored) continue;
    auto& [sum, n] = by_category[predictions.queries[i].category];
    sum += scores[i].iou_value;
    ++n;
    ++out.count;
  }
  if (!by_category.empty()) {
    double macro = 0.0;
    for (const auto& [cat, acc] : by_category)
      macro += acc.first / static_cast<double>(acc.second);
    out.mean = macro / static_cast<double>(by_category.size());
  }
  return out;
}

std::map<std::string, LevelScore> per_category_miou(const PredictionSet& predictions,
                                                    const Dataset& dataset, Level level,
                                                    Specificity specificity, int workers) {
  const std::vector<QueryScore> scores =
      score_queries(predictions, dataset, level, specificity, workers);
  std::map<std::string, std::pair<double, std::int64_t>> by_category;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!scores[i].scored) continue;
    auto& [sum, n] = by_category[predictions.queries[i].category];
    sum += scores[i].iou_value;
    ++n;
  }
  std::map<std::string, LevelScore> out;
  for (const auto& [cat, acc] : by_category)
    out[cat] = {acc.first / static_cast<double>(acc.second), acc.second};
  return out;
}

LevelScore recognition_accuracy(const std::vector<RecognitionAnswer>& answers,
                                const Dataset& dataset, Level level,
                                Specificity specificity) {
  LevelScore out;
  std::int64_t correct = 0;
  for (const RecognitionAnswer& a : answers) {
    const CategoryNode& node = dataset.taxonomy.at(a.category);
    if (node.level != level || a.specificity != specificity) continue;
    const ImageRecord& img = dataset.image(a.image_id);
    const bool present = (node.level == Level::Object && img.object_path == a.category) ||
                         dataset.category_present(a.image_id, a.category);
    ++out.count;
    if (a.answer_yes == present) ++correct;
  }
  if (out.count > 0) out.mean = static_cast<double>(correct) / static_cast<double>(out.count);
  return out;
}

LevelScore abstention_rate(const PredictionSet& predictions, const Dataset& dataset,
                           Level level, Specificity specificity) {
  if (predictions.mode != PredictionMode::Query)
    throw DatasetError("abstention_rate requires query-mode predictions");
  LevelScore out;
  std::int64_t abstained = 0;
  for (const QueryPrediction& q : predictions.queries) {
    if (q.specificity != specificity) continue;
    if (dataset.taxonomy.at(q.category).level != level) continue;
    ++out.count;
    if (q.abstain || prediction_mask(q, dataset).area() == 0) ++abstained;
  }
  if (out.count > 0)
    out.mean = static_cast<double>(abstained) / static_cast<double>(out.count);
  return out;
}

MetricReport evaluate(const PredictionSet& predictions, const Dataset& dataset,
                      Averaging averaging, int workers) {
  MetricReport report;
  report.averaging = averaging;

  if (predictions.mode == PredictionMode::Semantic) {
    SecsCounts pooled;
    std::vector<SecsCounts> per_image(predictions.semantic.size());
    parallel_for(predictions.semantic.size(), workers, [&](size_t i) {
      per_image[i] = secs_counts(predictions.semantic[i], dataset.taxonomy);
    });
    for (const SecsCounts& c : per_image) {
      pooled.entailed += c.entailed;
      pooled.total += c.total;
    }
    report.secs_pixels = pooled.total;
    if (pooled.total > 0)
      report.secs = static_cast<double>(pooled.entailed) / static_cast<double>(pooled.total);
    return report;
  }

  for (Specificity spec : {Specificity::General, Specificity::Specific}) {
    const int si = spec_index(spec);
    for (int lvl = 0; lvl < 3; ++lvl) {
      report.miou[si][lvl] = miou(predictions, dataset, static_cast<Level>(lvl), averaging,
                                  spec, workers);
      report.abstention[si][lvl] =
          abstention_rate(predictions, dataset, static_cast<Level>(lvl), spec);
      auto per_cat =
          per_category_miou(predictions, dataset, static_cast<Level>(lvl), spec, workers);
      report.per_category_miou[si].insert(per_cat.begin(), per_cat.end());
    }
  }

  const PairSet all_pairs = build_pairs(predictions, dataset, workers);
  for (Specificity spec : {Specificity::General, Specificity::Specific}) {
    const int si = spec_index(spec);
    PairSet filtered;
    for (const MaskPair& p : all_pairs.pairs)
      if (p.specificity == spec) filtered.pairs.push_back(p);
    report.spcs[si] = spcs(filtered);
  }
  // Skip counts are not split by specificity inside build_pairs; recompute
  // per specificity for the report.
  for (Specificity spec : {Specificity::General, Specificity::Specific}) {
    const int si = spec_index(spec);
    PredictionSet subset;
    subset.mode = PredictionMode::Query;
    for (const QueryPrediction& q : predictions.queries)
      if (q.specificity == spec) subset.queries.push_back(q);
    const PairSet ps = build_pairs(subset, dataset, workers);
    report.skipped_s2p[si] = ps.skipped_s2p;
    report.skipped_p2o[si] = ps.skipped_p2o;
  }
  return report;
}

namespace {

ordered_json score_json(const LevelScore& s) {
  ordered_json j;
  j["count"] = s.count;
  if (s.mean)
    j["mean"] = *s.mean;
  else
    j["mean"] = nullptr;
  return j;
}

}  // namespace

std::string MetricReport::to_json() const {
  ordered_json doc;
  doc["method"] = method;
  doc["params"] = params;
  doc["averaging"] = averaging == Averaging::PerQuery ? "per-query" : "per-category";
  const char* spec_names[2] = {"general", "specific"};
  const char* level_names[3] = {"object", "part", "subpart"};
  for (int si = 0; si < 2; ++si) {
    ordered_json block;
    for (int lvl = 0; lvl < 3; ++lvl) block["miou"][level_names[lvl]] = score_json(miou[si][lvl]);
    ordered_json sp;
    sp["avg"] = spcs[si].avg ? ordered_json(*spcs[si].avg) : ordered_json(nullptr);
    sp["s2p"] = spcs[si].s2p ? ordered_json(*spcs[si].s2p) : ordered_json(nullptr);
    sp["p2o"] = spcs[si].p2o ? ordered_json(*spcs[si].p2o) : ordered_json(nullptr);
    sp["s2p_pairs"] = spcs[si].s2p_count;
    sp["p2o_pairs"] = spcs[si].p2o_count;
    sp["skipped_s2p"] = skipped_s2p[si];
    sp["skipped_p2o"] = skipped_p2o[si];
    block["spcs"] = sp;
    for (int lvl = 0; lvl < 3; ++lvl)
      block["abstention"][level_names[lvl]] = score_json(abstention[si][lvl]);
    for (int lvl = 0; lvl < 3; ++lvl)
      block["recognition"][level_names[lvl]] = score_json(recognition[si][lvl]);
    ordered_json per_cat = ordered_json::object();
    for (const auto& [cat, score] : per_category_miou[si]) per_cat[cat] = score_json(score);
    block["per_category_miou"] = per_cat;
    doc[spec_names[si]] = block;
  }
  doc["secs"] = secs ? ordered_json(*secs) : ordered_json(nullptr);
  doc["secs_pixels"] = secs_pixels;
  return doc.dump(2);
}

}  // namespace hiereval
