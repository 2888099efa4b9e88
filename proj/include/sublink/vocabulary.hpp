#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sublink {

// Ordered fixed candidate set. Entry position is the head column.
class EntityVocabulary {
 public:
  EntityVocabulary() = default;

  // Entries must be unique and non-empty; throws otherwise.
  explicit EntityVocabulary(std::vector<std::string> entries);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const std::string& id_of(std::size_t index) const { return entries_.at(index); }
  std::optional<std::size_t> index_of(std::string_view id) const;
  bool contains(std::string_view id) const { return index_of(id).has_value(); }

  std::optional<std::size_t> o_index() const { return o_index_; }
  // Throws Error(configuration) when the vocabulary has no O entry.
  std::size_t require_o_index() const;

  std::span<const std::string> entries() const { return entries_; }

  bool operator==(const EntityVocabulary& other) const { return entries_ == other.entries_; }

 private:
  std::vector<std::string> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::optional<std::size_t> o_index_;
};

// Input order, duplicates dropped, O appended when requested and absent.
EntityVocabulary build_vocabulary(std::span<const std::string> entity_ids, bool include_o);

// One identifier per line; line position is the column. An optional first
// line `#O=<index>` places O at that column, in which case O is not listed.
EntityVocabulary load_vocabulary(const std::filesystem::path& path);
EntityVocabulary parse_vocabulary(std::string_view content, const std::string& source = "<memory>");
void save_vocabulary(const std::filesystem::path& path, const EntityVocabulary& vocab);
std::string format_vocabulary(const EntityVocabulary& vocab);

}  // namespace sublink
