#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hiereval {

enum class Level { Object = 0, Part = 1, Subpart = 2 };

const char* level_name(Level level);
const char* level_letter(Level level);  // "O", "P", "S"

struct TaxonomyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CategoryNode {
  int id = -1;
  std::vector<std::string> path;  // object[, part[, subpart]]
  Level level = Level::Object;
  std::string general_object_name;
  std::optional<std::string> specific_object_name;  // object-level only

  std::string path_string() const;
};

// Immutable three-level category forest. Node identity is the full path;
// leaf names may repeat under different parents.
class Taxonomy {
 public:
  const std::vector<CategoryNode>& nodes() const { return nodes_; }

  const CategoryNode* find(const std::string& path) const;
  const CategoryNode& at(const std::string& path) const;
  const CategoryNode& at(int id) const;
  bool contains(const std::string& path) const { return find(path) != nullptr; }

  // Parent id, or -1 for object nodes.
  int parent_id(int id) const { return parent_ids_.at(static_cast<size_t>(id)); }

  // True iff child is exactly one level below parent and chained to it.
  // Throws TaxonomyError on a level mismatch.
  bool entails(const CategoryNode& child, const CategoryNode& parent) const;
  bool entails(int child_id, int parent_id) const;

  // Maps a specific object name (e.g. "box turtle") to its super-category.
  const std::string& general_of(const std::string& specific_name) const;
  bool has_specific(const std::string& name) const {
    return specific_to_general_.count(name) != 0;
  }

  int count(Level level) const { return level_counts_[static_cast<int>(level)]; }

  const std::map<std::string, std::string>& specific_map() const {
    return specific_to_general_;
  }

  const std::vector<std::string>& notes() const { return notes_; }

  // Builds and validates; collects every violation into one error message.
  static Taxonomy build(std::vector<CategoryNode> nodes,
                        std::map<std::string, std::string> specific_to_general,
                        std::vector<std::string> notes = {});

 private:
  std::vector<CategoryNode> nodes_;          // indexed by id
  std::vector<int> parent_ids_;              // indexed by id
  std::map<std::string, int> path_index_;
  std::map<std::string, std::string> specific_to_general_;
  std::vector<std::string> notes_;
  int level_counts_[3] = {0, 0, 0};
};

// Parses the versioned taxonomy document (JSON text with keys
// {version, objects:[{general, specifics, parts:[{name, subparts}]}]}).
// Unknown keys are rejected when strict is true.
Taxonomy load_taxonomy(const std::string& text, bool strict = false);
Taxonomy load_taxonomy_file(const std::string& path, bool strict = false);

std::string serialize_taxonomy(const Taxonomy& taxonomy);

std::string join_path(const std::vector<std::string>& path);
std::vector<std::string> split_path(const std::string& path);

}  // namespace hiereval
