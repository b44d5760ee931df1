#pragma once

#include <optional>

#include "hiereval/dataset.hpp"

namespace hiereval {

enum class PairKind { S2P, P2O };

struct MaskPair {
  std::string image_id;
  std::string child_category;
  std::string parent_category;
  PairKind kind = PairKind::S2P;
  Specificity specificity = Specificity::General;
  double ratio = 0.0;  // |child n parent| / |child|
};

// The set R of Eq-style related prediction pairs, with skip accounting for
// abstained or empty children.
struct PairSet {
  std::vector<MaskPair> pairs;
  std::int64_t skipped_s2p = 0;
  std::int64_t skipped_p2o = 0;
};

struct SpcsResult {
  std::optional<double> avg;
  std::optional<double> s2p;
  std::optional<double> p2o;
  std::int64_t s2p_count = 0;
  std::int64_t p2o_count = 0;
};

struct LevelScore {
  std::optional<double> mean;  // fraction in [0, 1]
  std::int64_t count = 0;
};

enum class Averaging { PerQuery, PerCategory };

struct MetricReport {
  std::string method = "unknown";
  std::string params;
  Averaging averaging = Averaging::PerQuery;

  // Everything below is keyed per specificity (0 = general, 1 = specific).
  LevelScore miou[2][3];        // [specificity][level]
  SpcsResult spcs[2];
  std::int64_t skipped_s2p[2] = {0, 0};
  std::int64_t skipped_p2o[2] = {0, 0};
  LevelScore abstention[2][3];

  // Semantic mode only.
  std::optional<double> secs;
  std::int64_t secs_pixels = 0;  // |X| pooled over images

  // Recognition accuracy (fractions), Table-3 shaped.
  LevelScore recognition[2][3];

  // category path -> mean IoU, per specificity.
  std::map<std::string, LevelScore> per_category_miou[2];

  std::string to_json() const;
};

// Builds every related (child, parent) prediction pair per image and
// specificity. Abstained and empty-mask children are skipped and counted.
PairSet build_pairs(const PredictionSet& predictions, const Dataset& dataset,
                    int workers = 1);

SpcsResult spcs(const PairSet& pairs);

// Pooled-pixel SeCS over one semantic prediction. Null when |X| = 0.
struct SecsCounts {
  std::int64_t entailed = 0;
  std::int64_t total = 0;  // |X|
};
SecsCounts secs_counts(const SemanticPrediction& pred, const Taxonomy& taxonomy);
std::optional<double> secs(const SemanticPrediction& pred, const Taxonomy& taxonomy);

// Mean IoU at one level. Abstention on a present category scores 0; queries
// for categories absent from the ground truth are scored against an empty
// mask (abstentions on absent categories are excluded).
LevelScore miou(const PredictionSet& predictions, const Dataset& dataset, Level level,
                Averaging averaging, Specificity specificity, int workers = 1);

std::map<std::string, LevelScore> per_category_miou(const PredictionSet& predictions,
                                                    const Dataset& dataset, Level level,
                                                    Specificity specificity,
                                                    int workers = 1);

LevelScore recognition_accuracy(const std::vector<RecognitionAnswer>& answers,
                                const Dataset& dataset, Level level,
                                Specificity specificity);

LevelScore abstention_rate(const PredictionSet& predictions, const Dataset& dataset,
                           Level level, Specificity specificity);

// Rasterized payload of a query prediction; empty mask for abstentions.
BitMask prediction_mask(const QueryPrediction& pred, const Dataset& dataset);

// Full query-mode (or semantic-mode) evaluation into one report.
MetricReport evaluate(const PredictionSet& predictions, const Dataset& dataset,
                      Averaging averaging, int workers = 1);

}  // namespace hiereval
