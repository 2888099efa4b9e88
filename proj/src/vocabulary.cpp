#include "sublink/vocabulary.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "sublink/error.hpp"
#include "sublink/types.hpp"

namespace sublink {

EntityVocabulary::EntityVocabulary(std::vector<std::string> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorKind::empty_vocabulary, "entity vocabulary is empty");
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].empty()) {
      throw Error(ErrorKind::parse, "empty entity identifier at index " + std::to_string(i));
    }
    if (!index_.emplace(entries_[i], i).second) {
      throw Error(ErrorKind::parse, "duplicate entity identifier '" + entries_[i] + "' at index " +
                                        std::to_string(i));
    }
    if (entries_[i] == kNonEntity) o_index_ = i;
  }
}

std::optional<std::size_t> EntityVocabulary::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t EntityVocabulary::require_o_index() const {
  if (!o_index_) throw Error(ErrorKind::configuration, "entity vocabulary has no O entry");
  return *o_index_;
}

EntityVocabulary build_vocabulary(std::span<const std::string> entity_ids, bool include_o) {
  std::vector<std::string> entries;
  std::unordered_set<std::string> seen;
  for (const auto& id : entity_ids) {
    if (seen.insert(id).second) entries.push_back(id);
  }
  if (entries.empty()) throw Error(ErrorKind::empty_vocabulary, "no entity identifiers given");
  if (include_o && !seen.contains(kNonEntity)) entries.emplace_back(kNonEntity);
  return EntityVocabulary(std::move(entries));
}

EntityVocabulary parse_vocabulary(std::string_view content, const std::string& source) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(content)};
  std::string line;
  std::optional<std::size_t> o_column;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first && line.rfind("#O=", 0) == 0) {
      first = false;
      try {
        std::size_t used = 0;
        o_column = std::stoul(line.substr(3), &used);
        if (used != line.size() - 3) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw Error(ErrorKind::parse, source + ":1: bad O header '" + line + "'");
      }
      continue;
    }
    first = false;
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  const std::size_t header_lines = o_column ? 1 : 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      throw Error(ErrorKind::parse, source + ":" + std::to_string(i + 1 + header_lines) +
                                        ": empty entity identifier");
    }
    if (o_column && lines[i] == kNonEntity) {
      throw Error(ErrorKind::parse, source + ":" + std::to_string(i + 1 + header_lines) +
                                        ": O listed although the header places it");
    }
  }
  if (o_column) {
    if (*o_column > lines.size()) {
      throw Error(ErrorKind::parse, source + ":1: O column " + std::to_string(*o_column) +
                                        " beyond " + std::to_string(lines.size()) + " entries");
    }
    lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(*o_column), kNonEntity);
  }
  if (lines.empty()) throw Error(ErrorKind::empty_vocabulary, source + ": no entity identifiers");
  try {
    return EntityVocabulary(std::move(lines));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse) throw Error(ErrorKind::parse, source + ": " + e.what());
    throw;
  }
}

EntityVocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open vocabulary file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_vocabulary(buffer.str(), path.string());
}

std::string format_vocabulary(const EntityVocabulary& vocab) {
  std::string out;
  if (vocab.o_index()) out += "#O=" + std::to_string(*vocab.o_index()) + "\n";
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (vocab.o_index() == i) continue;
    out += vocab.id_of(i);
    out += '\n';
  }
  return out;
}

void save_vocabulary(const std::filesystem::path& path, const EntityVocabulary& vocab) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write vocabulary file " + path.string());
  out << format_vocabulary(vocab);
}

}  // namespace sublink
