#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hiereval/mask.hpp"
#include "hiereval/taxonomy.hpp"

namespace hiereval {

struct DatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Split { Train, Val, Test };
const char* split_name(Split s);
Split parse_split(const std::string& s);

enum class Specificity { General, Specific };
const char* specificity_name(Specificity s);
Specificity parse_specificity(const std::string& s);

struct ImageRecord {
  std::string image_id;
  int width = 0;
  int height = 0;
  Split split = Split::Train;
  std::string object_path;  // object-level category path
};

struct AnnotationRecord {
  std::string image_id;
  std::string category;  // path at any level
  Region region;
};

struct Dataset {
  Taxonomy taxonomy;
  std::vector<ImageRecord> images;
  std::vector<AnnotationRecord> annotations;

  std::map<std::string, size_t> image_index;                    // image_id -> index
  std::map<std::string, std::vector<size_t>> annotation_index;  // image_id -> annotation rows

  const ImageRecord& image(const std::string& id) const;

  // Union of all annotations of `category` in the image, rasterized.
  // Empty mask when the category has no annotations there.
  BitMask ground_truth_mask(const std::string& image_id, const std::string& category) const;

  bool category_present(const std::string& image_id, const std::string& category) const;
};

struct QueryPrediction {
  std::string image_id;
  std::string category;
  Specificity specificity = Specificity::General;
  // Exactly one payload.
  std::optional<std::vector<std::int64_t>> mask_rle;
  std::optional<BBox> box;
  bool abstain = false;
};

struct SemanticPrediction {
  std::string image_id;
  // Per-pixel node ids (row-major), -1 = background, indexed per level.
  std::vector<int> object_map;
  std::vector<int> part_map;
  std::vector<int> subpart_map;
  int width = 0;
  int height = 0;
};

enum class PredictionMode { Query, Semantic };

struct PredictionSet {
  PredictionMode mode = PredictionMode::Query;
  std::vector<QueryPrediction> queries;
  std::vector<SemanticPrediction> semantic;
};

struct RecognitionAnswer {
  std::string image_id;
  std::string category;
  Specificity specificity = Specificity::General;
  std::string prompt_kind;  // "box" | "mask"
  bool answer_yes = false;
};

struct ValidationCheck {
  std::string name;
  std::string expected;
  std::string actual;
  bool passed = true;
};

struct ValidationReport {
  std::int64_t image_count = 0;
  std::int64_t split_counts[3] = {0, 0, 0};
  std::int64_t annotation_counts[3] = {0, 0, 0};  // per level
  int category_counts[3] = {0, 0, 0};             // taxonomy level counts
  std::map<std::string, std::int64_t> per_category;  // path -> annotation count
  std::vector<ValidationCheck> checks;
  std::vector<std::string> errors;
  std::vector<std::string> notes;

  bool passed() const;
  std::string to_json() const;
};

Dataset load_dataset(const std::string& path, bool strict = false);
Dataset load_dataset_text(const std::string& text, const std::string& base_dir,
                          bool strict = false);

// Expected counts come from config keys like "images", "splits" (comma list),
// "subpart_categories", "subpart_annotations".
ValidationReport validate_dataset(const Dataset& dataset,
                                  const std::map<std::string, std::string>& expectations = {});

PredictionSet load_predictions(const std::string& path, const Dataset& dataset,
                               std::optional<PredictionMode> expected_mode = std::nullopt);
PredictionSet load_predictions_text(const std::string& text, const Dataset& dataset,
                                    std::optional<PredictionMode> expected_mode = std::nullopt);
std::string serialize_predictions(const PredictionSet& preds, const Dataset& dataset);

std::vector<RecognitionAnswer> load_recognition_answers(const std::string& path);
std::vector<RecognitionAnswer> load_recognition_answers_text(const std::string& text);

std::string serialize_dataset(const Dataset& dataset);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hiereval
