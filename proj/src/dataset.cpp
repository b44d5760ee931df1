#include "hiereval/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hiereval {

using nlohmann::json;
using nlohmann::ordered_json;

const char* split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "?";
}

Split parse_split(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  throw DatasetError("unknown split: " + s);
}

const char* specificity_name(Specificity s) {
  return s == Specificity::General ? "general" : "specific";
}

Specificity parse_specificity(const std::string& s) {
  if (s == "general") return Specificity::General;
  if (s == "specific") return Specificity::Specific;
  throw DatasetError("unknown specificity: " + s);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError("cannot write file: " + path);
  out << content;
}

const ImageRecord& Dataset::image(const std::string& id) const {
  auto it = image_index.find(id);
  if (it == image_index.end()) throw DatasetError("unknown image: " + id);
  return images[it->second];
}

BitMask Dataset::ground_truth_mask(const std::string& image_id,
                                   const std::string& category) const {
  const ImageRecord& img = image(image_id);
  Region merged;
  auto it = annotation_index.find(image_id);
  if (it != annotation_index.end()) {
    for (size_t row : it->second) {
      const AnnotationRecord& ann = annotations[row];
      if (ann.category != category) continue;
      for (const Ring& ring : ann.region.rings) merged.rings.push_back(ring);
    }
  }
  if (merged.rings.empty()) return BitMask(img.width, img.height);
  return rasterize(merged, img.width, img.height);
}

bool Dataset::category_present(const std::string& image_id, const std::string& category) const {
  auto it = annotation_index.find(image_id);
  if (it == annotation_index.end()) return false;
  for (size_t row : it->second)
    if (annotations[row].category == category) return true;
  return false;
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where, bool strict) {
  if (!strict) return;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known) throw DatasetError("unknown key '" + it.key() + "' in " + where);
  }
}

Region parse_rings(const json& rings_json) {
  Region region;
  for (const json& ring_json : rings_json) {
    Ring ring;
    for (const json& pt : ring_json) {
      if (!pt.is_array() || pt.size() != 2) throw DatasetError("vertex must be [x, y]");
      ring.vertices.push_back({pt[0].get<double>(), pt[1].get<double>()});
    }
    region.rings.push_back(std::move(ring));
  }
  return region;
}

json rings_to_json(const Region& region) {
  json rings = json::array();
  for (const Ring& ring : region.rings) {
    json r = json::array();
    for (const Point& p : ring.vertices) r.push_back(json::array({p.x, p.y}));
    rings.push_back(r);
  }
  return rings;
}

}  // namespace

Dataset load_dataset_text(const std::string& text, const std::string& base_dir, bool strict) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DatasetError(std::string("dataset parse error: ") + e.what());
  }
  reject_unknown(doc, {"version", "taxonomy", "images", "annotations"}, "dataset document",
                 strict);
  if (!doc.contains("version")) throw DatasetError("dataset document missing 'version'");

  Dataset ds;
  const json& tax = doc.at("taxonomy");
  if (tax.is_string()) {
    const std::filesystem::path p =
        std::filesystem::path(base_dir) / tax.get<std::string>();
    ds.taxonomy = load_taxonomy_file(p.string(), strict);
  } else {
    ds.taxonomy = load_taxonomy(tax.dump(), strict);
  }

  std::vector<std::string> errors;
  for (const json& img : doc.value("images", json::array())) {
    reject_unknown(img, {"id", "width", "height", "split", "object"}, "image entry", strict);
    ImageRecord rec;
    rec.image_id = img.at("id").get<std::string>();
    rec.width = img.at("width").get<int>();
    rec.height = img.at("height").get<int>();
    rec.split = parse_split(img.at("split").get<std::string>());
    rec.object_path = img.at("object").get<std::string>();
    if (rec.width <= 0 || rec.height <= 0)
      errors.push_back("image " + rec.image_id + ": non-positive dimensions");
    const CategoryNode* node = ds.taxonomy.find(rec.object_path);
    if (!node)
      errors.push_back("image " + rec.image_id + ": unknown object category " + rec.object_path);
    else if (node->level != Level::Object)
      errors.push_back("image " + rec.image_id + ": object field must name an object-level path");
    if (!ds.image_index.emplace(rec.image_id, ds.images.size()).second)
      errors.push_back("duplicate image id: " + rec.image_id);
    else
      ds.images.push_back(std::move(rec));
  }

  for (const json& ann : doc.value("annotations", json::array())) {
    reject_unknown(ann, {"image", "category", "rings"}, "annotation entry", strict);
    AnnotationRecord rec;
    rec.image_id = ann.at("image").get<std::string>();
    rec.category = ann.at("category").get<std::string>();
    rec.region = parse_rings(ann.at("rings"));
    auto img_it = ds.image_index.find(rec.image_id);
    if (img_it == ds.image_index.end()) {
      errors.push_back("annotation references unknown image: " + rec.image_id);
      continue;
    }
    const CategoryNode* node = ds.taxonomy.find(rec.category);
    if (!node) {
      errors.push_back("annotation on " + rec.image_id + ": unknown category " + rec.category);
      continue;
    }
    // Part/subpart annotations must belong to the image's object lineage.
    const ImageRecord& img = ds.images[img_it->second];
    if (node->path[0] != split_path(img.object_path)[0]) {
      errors.push_back("annotation on " + rec.image_id + ": category " + rec.category +
                       " outside object lineage " + img.object_path);
      continue;
    }
    ds.annotation_index[rec.image_id].push_back(ds.annotations.size());
    ds.annotations.push_back(std::move(rec));
  }

  if (!errors.empty()) {
    std::string msg = "dataset validation failed:";
    for (const std::string& e : errors) msg += "\n  - " + e;
    throw DatasetError(msg);
  }
  return ds;
}

Dataset load_dataset(const std::string& path, bool strict) {
  const std::string base = std::filesystem::path(path).parent_path().string();
  return load_dataset_text(read_file(path), base, strict);
}

std::string serialize_dataset(const Dataset& dataset) {
  ordered_json doc;
  doc["version"] = 1;
  doc["taxonomy"] = json::parse(serialize_taxonomy(dataset.taxonomy));
  ordered_json images = ordered_json::array();
  for (const ImageRecord& img : dataset.images) {
    ordered_json j;
    j["id"] = img.image_id;
    j["width"] = img.width;
    j["height"] = img.height;
    j["split"] = split_name(img.split);
    j["object"] = img.object_path;
    images.push_back(j);
  }
  doc["images"] = images;
  ordered_json anns = ordered_json::array();
  for (const AnnotationRecord& ann : dataset.annotations) {
    ordered_json j;
    j["image"] = ann.image_id;
    j["category"] = ann.category;
    j["rings"] = rings_to_json(ann.region);
    anns.push_back(j);
  }
  doc["annotations"] = anns;
  return doc.dump(2);
}

bool ValidationReport::passed() const {
  if (!errors.empty()) return false;
  for (const ValidationCheck& c : checks)
    if (!c.passed) return false;
  return true;
}

std::string ValidationReport::to_json() const {
  ordered_json doc;
  doc["images"] = image_count;
  doc["splits"] = {{"train", split_counts[0]}, {"val", split_counts[1]}, {"test", split_counts[2]}};
  doc["annotations"] = {{"object", annotation_counts[0]},
                        {"part", annotation_counts[1]},
                        {"subpart", annotation_counts[2]}};
  doc["categories"] = {{"object", category_counts[0]},
                       {"part", category_counts[1]},
                       {"subpart", category_counts[2]}};
  ordered_json per_cat = ordered_json::object();
  for (const auto& [path, count] : per_category) per_cat[path] = count;
  doc["per_category"] = per_cat;
  ordered_json checks_json = ordered_json::array();
  for (const ValidationCheck& c : checks) {
    checks_json.push_back({{"name", c.name},
                           {"expected", c.expected},
                           {"actual", c.actual},
                           {"passed", c.passed}});
  }
  doc["checks"] = checks_json;
  doc["errors"] = errors;
  doc["notes"] = notes;
  doc["passed"] = passed();
  return doc.dump(2);
}

ValidationReport validate_dataset(const Dataset& dataset,
                                  const std::map<std::string, std::string>& expectations) {
  ValidationReport report;
  report.image_count = static_cast<std::int64_t>(dataset.images.size());
  for (const ImageRecord& img : dataset.images)
    ++report.split_counts[static_cast<int>(img.split)];
  for (const AnnotationRecord& ann : dataset.annotations) {
    const CategoryNode& node = dataset.taxonomy.at(ann.category);
    ++report.annotation_counts[static_cast<int>(node.level)];
    ++report.per_category[ann.category];
  }
  for (int lvl = 0; lvl < 3; ++lvl)
    report.category_counts[lvl] = dataset.taxonomy.count(static_cast<Level>(lvl));
  report.notes = dataset.taxonomy.notes();

  auto check_int = [&report](const std::string& name, std::int64_t expected,
                             std::int64_t actual) {
    report.checks.push_back({name, std::to_string(expected), std::to_string(actual),
                             expected == actual});
  };

  for (const auto& [key, value] : expectations) {
    if (key == "images") {
      check_int("images", std::stoll(value), report.image_count);
    } else if (key == "splits") {
      std::vector<std::int64_t> want;
      std::stringstream ss(value);
      std::string tok;
      while (std::getline(ss, tok, ',')) want.push_back(std::stoll(tok));
      if (want.size() != 3) {
        report.errors.push_back("expectation 'splits' needs three comma-separated counts");
        continue;
      }
      check_int("splits.train", want[0], report.split_counts[0]);
      check_int("splits.val", want[1], report.split_counts[1]);
      check_int("splits.test", want[2], report.split_counts[2]);
    } else if (key == "object_categories") {
      check_int(key, std::stoll(value), report.category_counts[0]);
    } else if (key == "part_categories") {
      check_int(key, std::stoll(value), report.category_counts[1]);
    } else if (key == "subpart_categories") {
      check_int(key, std::stoll(value), report.category_counts[2]);
    } else if (key == "object_annotations") {
      check_int(key, std::stoll(value), report.annotation_counts[0]);
    } else if (key == "part_annotations") {
      check_int(key, std::stoll(value), report.annotation_counts[1]);
    } else if (key == "subpart_annotations") {
      check_int(key, std::stoll(value), report.annotation_counts[2]);
    } else {
      report.errors.push_back("unknown expectation key: " + key);
    }
  }
  return report;
}

namespace {

int level_id_or_throw(const Dataset& ds, const std::string& path, Level level,
                      const std::string& where) {
  const CategoryNode& node = ds.taxonomy.at(path);
  if (node.level != level)
    throw DatasetError(where + ": category " + path + " is not at the " +
                       level_name(level) + " level");
  return node.id;
}

std::vector<int> parse_label_map(const json& map_json, const Dataset& ds, Level level,
                                 int width, int height, const std::string& image_id) {
  if (!map_json.is_object() || !map_json.contains("palette") || !map_json.contains("rle"))
    throw DatasetError("label map must be {palette, rle}");
  std::vector<int> palette;  // palette index -> node id
  for (const json& entry : map_json.at("palette")) {
    palette.push_back(
        level_id_or_throw(ds, entry.get<std::string>(), level, "image " + image_id));
  }
  // Label-map RLE: alternating (palette value, run length) pairs, where
  // palette value 0 means background and k>0 means palette[k-1].
  const json& rle = map_json.at("rle");
  if (rle.size() % 2 != 0) throw DatasetError("label-map RLE needs (value, run) pairs");
  const std::int64_t total = static_cast<std::int64_t>(width) * height;
  std::vector<int> out;
  out.reserve(static_cast<size_t>(total));
  for (size_t i = 0; i + 1 < rle.size(); i += 2) {
    const std::int64_t value = rle[i].get<std::int64_t>();
    const std::int64_t run = rle[i + 1].get<std::int64_t>();
    if (run < 0) throw DatasetError("negative label-map run");
    if (value < 0 || value > static_cast<std::int64_t>(palette.size()))
      throw DatasetError("label-map value out of palette range");
    const int node_id = value == 0 ? -1 : palette[static_cast<size_t>(value - 1)];
    for (std::int64_t k = 0; k < run; ++k) out.push_back(node_id);
  }
  if (static_cast<std::int64_t>(out.size()) != total)
    throw DatasetError("label-map RLE does not sum to width*height for image " + image_id);
  return out;
}

json label_map_to_json(const std::vector<int>& map, const Dataset& ds) {
  std::vector<int> palette;                 // node ids in first-seen order
  std::map<int, std::int64_t> palette_pos;  // node id -> palette value
  json rle = json::array();
  size_t i = 0;
  while (i < map.size()) {
    const int node_id = map[i];
    size_t j = i;
    while (j < map.size() && map[j] == node_id) ++j;
    std::int64_t value = 0;
    if (node_id >= 0) {
      auto it = palette_pos.find(node_id);
      if (it == palette_pos.end()) {
        palette.push_back(node_id);
        value = static_cast<std::int64_t>(palette.size());
        palette_pos[node_id] = value;
      } else {
        value = it->second;
      }
    }
    rle.push_back(value);
    rle.push_back(static_cast<std::int64_t>(j - i));
    i = j;
  }
  json palette_json = json::array();
  for (int id : palette) palette_json.push_back(ds.taxonomy.at(id).path_string());
  return json{{"palette", palette_json}, {"rle", rle}};
}

}  // namespace

PredictionSet load_predictions_text(const std::string& text, const Dataset& dataset,
                                    std::optional<PredictionMode> expected_mode) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DatasetError(std::string("prediction parse error: ") + e.what());
  }
  if (!doc.contains("version")) throw DatasetError("prediction document missing 'version'");
  const std::string mode_str = doc.at("mode").get<std::string>();
  PredictionSet set;
  if (mode_str == "query")
    set.mode = PredictionMode::Query;
  else if (mode_str == "semantic")
    set.mode = PredictionMode::Semantic;
  else
    throw DatasetError("unknown prediction mode: " + mode_str);
  if (expected_mode && *expected_mode != set.mode)
    throw DatasetError("prediction file mode does not match requested mode");

  for (const json& pred : doc.value("predictions", json::array())) {
    const std::string image_id = pred.at("image").get<std::string>();
    const ImageRecord& img = dataset.image(image_id);

    if (set.mode == PredictionMode::Query) {
      QueryPrediction q;
      q.image_id = image_id;
      q.category = pred.at("category").get<std::string>();
      dataset.taxonomy.at(q.category);  // must exist
      q.specificity = parse_specificity(pred.value("specificity", "general"));
      int payloads = 0;
      if (pred.contains("mask")) {
        ++payloads;
        q.mask_rle = pred.at("mask").get<std::vector<std::int64_t>>();
        rle_decode(*q.mask_rle, img.width, img.height);  // validates run total
      }
      if (pred.contains("box")) {
        ++payloads;
        const json& b = pred.at("box");
        if (!b.is_array() || b.size() != 4)
          throw DatasetError("box must be [x_min, y_min, x_max, y_max]");
        q.box = BBox{b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
      }
      if (pred.contains("abstain") && pred.at("abstain").get<bool>()) {
        ++payloads;
        q.abstain = true;
      }
      if (payloads != 1)
        throw DatasetError("prediction for " + image_id +
                           " must carry exactly one of mask/box/abstain");
      set.queries.push_back(std::move(q));
    } else {
      SemanticPrediction s;
      s.image_id = image_id;
      s.width = img.width;
      s.height = img.height;
      s.object_map = parse_label_map(pred.at("object_map"), dataset, Level::Object,
                                     img.width, img.height, image_id);
      s.part_map = parse_label_map(pred.at("part_map"), dataset, Level::Part, img.width,
                                   img.height, image_id);
      s.subpart_map = parse_label_map(pred.at("subpart_map"), dataset, Level::Subpart,
                                      img.width, img.height, image_id);
      set.semantic.push_back(std::move(s));
    }
  }
  return set;
}

PredictionSet load_predictions(const std::string& path, const Dataset& dataset,
                               std::optional<PredictionMode> expected_mode) {
  return load_predictions_text(read_file(path), dataset, expected_mode);
}

std::string serialize_predictions(const PredictionSet& preds, const Dataset& dataset) {
  ordered_json doc;
  doc["version"] = 1;
  doc["mode"] = preds.mode == PredictionMode::Query ? "query" : "semantic";
  ordered_json out = ordered_json::array();
  if (preds.mode == PredictionMode::Query) {
    for (const QueryPrediction& q : preds.queries) {
      ordered_json j;
      j["image"] = q.image_id;
      j["category"] = q.category;
      j["specificity"] = specificity_name(q.specificity);
      if (q.mask_rle) j["mask"] = *q.mask_rle;
      if (q.box) j["box"] = {q.box->x_min, q.box->y_min, q.box->x_max, q.box->y_max};
      if (q.abstain) j["abstain"] = true;
      out.push_back(j);
    }
  } else {
    for (const SemanticPrediction& s : preds.semantic) {
      ordered_json j;
      j["image"] = s.image_id;
      j["object_map"] = label_map_to_json(s.object_map, dataset);
      j["part_map"] = label_map_to_json(s.part_map, dataset);
      j["subpart_map"] = label_map_to_json(s.subpart_map, dataset);
      out.push_back(j);
    }
  }
  doc["predictions"] = out;
  return doc.dump(2);
}

std::vector<RecognitionAnswer> load_recognition_answers_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DatasetError(std::string("recognition parse error: ") + e.what());
  }
  if (!doc.contains("version")) throw DatasetError("recognition document missing 'version'");
  std::vector<RecognitionAnswer> answers;
  for (const json& a : doc.value("answers", json::array())) {
    RecognitionAnswer rec;
    rec.image_id = a.at("image").get<std::string>();
    rec.category = a.at("category").get<std::string>();
    rec.specificity = parse_specificity(a.value("specificity", "general"));
    rec.prompt_kind = a.value("prompt_kind", "box");
    const std::string answer = a.at("answer").get<std::string>();
    if (answer != "yes" && answer != "no")
      throw DatasetError("recognition answer must be yes or no");
    rec.answer_yes = answer == "yes";
    answers.push_back(std::move(rec));
  }
  return answers;
}

std::vector<RecognitionAnswer> load_recognition_answers(const std::string& path) {
  return load_recognition_answers_text(read_file(path));
}

}  // namespace hiereval
