#include "hiereval/taxonomy.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hiereval {

using nlohmann::json;
using nlohmann::ordered_json;

const char* level_name(Level level) {
  switch (level) {
    case Level::Object: return "object";
    case Level::Part: return "part";
    case Level::Subpart: return "subpart";
  }
  return "?";
}

const char* level_letter(Level level) {
  switch (level) {
    case Level::Object: return "O";
    case Level::Part: return "P";
    case Level::Subpart: return "S";
  }
  return "?";
}

std::string join_path(const std::vector<std::string>& path) {
  std::string out;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) out += '/';
    out += path[i];
  }
  return out;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string CategoryNode::path_string() const { return join_path(path); }

const CategoryNode* Taxonomy::find(const std::string& path) const {
  auto it = path_index_.find(path);
  return it == path_index_.end() ? nullptr : &nodes_[static_cast<size_t>(it->second)];
}

const CategoryNode& Taxonomy::at(const std::string& path) const {
  const CategoryNode* node = find(path);
  if (!node) throw TaxonomyError("unknown category path: " + path);
  return *node;
}

const CategoryNode& Taxonomy::at(int id) const {
  if (id < 0 || static_cast<size_t>(id) >= nodes_.size())
    throw TaxonomyError("unknown category id: " + std::to_string(id));
  return nodes_[static_cast<size_t>(id)];
}

bool Taxonomy::entails(const CategoryNode& child, const CategoryNode& parent) const {
  if (static_cast<int>(child.level) != static_cast<int>(parent.level) + 1)
    throw TaxonomyError("entails requires child exactly one level below parent (" +
                        child.path_string() + " vs " + parent.path_string() + ")");
  return parent_ids_[static_cast<size_t>(child.id)] == parent.id;
}

bool Taxonomy::entails(int child_id, int parent_id) const {
  return entails(at(child_id), at(parent_id));
}

const std::string& Taxonomy::general_of(const std::string& specific_name) const {
  auto it = specific_to_general_.find(specific_name);
  if (it == specific_to_general_.end())
    throw TaxonomyError("unknown specific object name: " + specific_name);
  return it->second;
}

Taxonomy Taxonomy::build(std::vector<CategoryNode> nodes,
                         std::map<std::string, std::string> specific_to_general,
                         std::vector<std::string> notes) {
  Taxonomy t;
  std::vector<std::string> errors;

  std::map<std::string, int> index;
  for (size_t i = 0; i < nodes.size(); ++i) {
    CategoryNode& node = nodes[i];
    node.id = static_cast<int>(i);
    if (node.path.empty() || node.path.size() > 3) {
      errors.push_back("invalid path length for node " + std::to_string(i));
      continue;
    }
    node.level = static_cast<Level>(node.path.size() - 1);
    for (const std::string& name : node.path)
      if (name.empty()) errors.push_back("empty name in path: " + node.path_string());
    const std::string key = node.path_string();
    if (!index.emplace(key, node.id).second)
      errors.push_back("duplicate path: " + key);
  }

  std::vector<int> parents(nodes.size(), -1);
  for (const CategoryNode& node : nodes) {
    if (node.path.size() < 2) continue;
    std::vector<std::string> prefix(node.path.begin(), node.path.end() - 1);
    auto it = index.find(join_path(prefix));
    if (it == index.end()) {
      errors.push_back("dangling parent path for: " + node.path_string());
    } else {
      parents[static_cast<size_t>(node.id)] = it->second;
    }
  }

  // Each node chains to an object-level root in at most two hops; anything
  // longer means a malformed level assignment.
  for (const CategoryNode& node : nodes) {
    int cur = node.id;
    for (int hop = 0; hop < 3 && cur >= 0; ++hop) cur = parents[static_cast<size_t>(cur)];
    if (cur >= 0) errors.push_back("cycle or over-deep chain at: " + node.path_string());
  }

  if (!errors.empty()) {
    std::string msg = "taxonomy validation failed:";
    for (const std::string& e : errors) msg += "\n  - " + e;
    throw TaxonomyError(msg);
  }

  for (const CategoryNode& node : nodes) ++t.level_counts_[static_cast<int>(node.level)];
  t.nodes_ = std::move(nodes);
  t.parent_ids_ = std::move(parents);
  t.path_index_ = std::move(index);
  t.specific_to_general_ = std::move(specific_to_general);
  t.notes_ = std::move(notes);
  return t;
}

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where, bool strict) {
  if (!strict) return;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) known = true;
    if (!known) throw TaxonomyError("unknown key '" + it.key() + "' in " + where);
  }
}

}  // namespace

Taxonomy load_taxonomy(const std::string& text, bool strict) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw TaxonomyError(std::string("taxonomy parse error: ") + e.what());
  }
  if (!doc.is_object()) throw TaxonomyError("taxonomy document must be an object");
  reject_unknown_keys(doc, {"version", "objects", "notes"}, "taxonomy document", strict);
  if (!doc.contains("version")) throw TaxonomyError("taxonomy document missing 'version'");

  std::vector<CategoryNode> nodes;
  std::map<std::string, std::string> spec_map;
  std::vector<std::string> notes;
  if (doc.contains("notes"))
    for (const auto& n : doc["notes"]) notes.push_back(n.get<std::string>());

  for (const json& obj : doc.value("objects", json::array())) {
    reject_unknown_keys(obj, {"general", "specifics", "parts"}, "object entry", strict);
    const std::string general = obj.at("general").get<std::string>();
    CategoryNode object_node;
    object_node.path = {general};
    object_node.general_object_name = general;
    nodes.push_back(object_node);

    for (const json& spec : obj.value("specifics", json::array())) {
      const std::string name = spec.get<std::string>();
      if (!spec_map.emplace(name, general).second)
        throw TaxonomyError("specific object name mapped twice: " + name);
    }

    for (const json& part : obj.value("parts", json::array())) {
      reject_unknown_keys(part, {"name", "subparts"}, "part entry", strict);
      const std::string part_name = part.at("name").get<std::string>();
      CategoryNode part_node;
      part_node.path = {general, part_name};
      part_node.general_object_name = general;
      nodes.push_back(part_node);
      for (const json& sub : part.value("subparts", json::array())) {
        CategoryNode sub_node;
        sub_node.path = {general, part_name, sub.get<std::string>()};
        sub_node.general_object_name = general;
        nodes.push_back(sub_node);
      }
    }
  }
  return Taxonomy::build(std::move(nodes), std::move(spec_map), std::move(notes));
}

Taxonomy load_taxonomy_file(const std::string& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw TaxonomyError("cannot open taxonomy file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_taxonomy(buf.str(), strict);
}

std::string serialize_taxonomy(const Taxonomy& taxonomy) {
  ordered_json doc;
  doc["version"] = 1;
  if (!taxonomy.notes().empty()) doc["notes"] = taxonomy.notes();
  ordered_json objects = ordered_json::array();

  // Rebuild the nested layout from the flat node list, preserving order.
  std::map<std::string, size_t> object_pos;
  std::map<std::string, size_t> part_pos;
  for (const CategoryNode& node : taxonomy.nodes()) {
    if (node.level == Level::Object) {
      ordered_json obj;
      obj["general"] = node.path[0];
      obj["specifics"] = ordered_json::array();
      obj["parts"] = ordered_json::array();
      object_pos[node.path[0]] = objects.size();
      objects.push_back(obj);
    } else if (node.level == Level::Part) {
      ordered_json part;
      part["name"] = node.path[1];
      part["subparts"] = ordered_json::array();
      ordered_json& obj = objects[object_pos.at(node.path[0])];
      part_pos[join_path(node.path)] = obj["parts"].size();
      obj["parts"].push_back(part);
    } else {
      ordered_json& obj = objects[object_pos.at(node.path[0])];
      std::vector<std::string> prefix{node.path[0], node.path[1]};
      obj["parts"][part_pos.at(join_path(prefix))]["subparts"].push_back(node.path[2]);
    }
  }
  for (const auto& [specific, general] : taxonomy.specific_map()) {
    auto it = object_pos.find(general);
    if (it != object_pos.end()) objects[it->second]["specifics"].push_back(specific);
  }
  doc["objects"] = objects;
  return doc.dump(2);
}

}  // namespace hiereval
