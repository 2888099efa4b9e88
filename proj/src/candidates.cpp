#include "sublink/candidates.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include "sublink/error.hpp"
#include "sublink/utf8.hpp"

namespace sublink {

std::string CandidateStore::normalize_surface(std::string_view surface) const {
  const auto trimmed = utf8::trim(surface);
  return options_.case_sensitive ? std::string(trimmed) : utf8::ascii_lower(trimmed);
}

CandidateStore CandidateStore::agnostic(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& entries, StoreOptions options) {
  CandidateStore store;
  store.kind_ = StoreKind::context_agnostic;
  store.options_ = options;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& [surface, entities] = entries[i];
    const auto key = store.normalize_surface(surface);
    if (entities.empty()) {
      throw Error(ErrorKind::parse, "entry " + std::to_string(i + 1) + ": empty candidate list for '" + surface + "'");
    }
    if (!store.surface_index_.emplace(key, store.by_surface_.size()).second) {
      throw Error(ErrorKind::parse, "entry " + std::to_string(i + 1) + ": duplicate mention '" + surface + "'");
    }
    store.by_surface_.emplace_back(key, entities);
  }
  return store;
}

CandidateStore CandidateStore::aware(const std::vector<AwareEntry>& entries, StoreOptions options) {
  CandidateStore store;
  store.kind_ = StoreKind::context_aware;
  store.options_ = options;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    AwareEntry entry = entries[i];
    entry.surface = store.normalize_surface(entry.surface);
    if (entry.entities.empty()) {
      throw Error(ErrorKind::parse, "entry " + std::to_string(i + 1) + ": empty candidate list");
    }
    if (entry.key.start >= entry.key.end) {
      throw Error(ErrorKind::parse, "entry " + std::to_string(i + 1) + ": empty occurrence span");
    }
    if (!store.occurrence_index_.emplace(entry.key, store.occurrences_.size()).second) {
      throw Error(ErrorKind::parse, "entry " + std::to_string(i + 1) + ": duplicate occurrence " +
                                        entry.key.doc_id + " [" + std::to_string(entry.key.start) + "," +
                                        std::to_string(entry.key.end) + ")");
    }
    // Surface fallback: union in first-seen order.
    auto [it, inserted] = store.surface_index_.try_emplace(entry.surface, store.by_surface_.size());
    if (inserted) store.by_surface_.emplace_back(entry.surface, std::vector<std::string>{});
    auto& merged = store.by_surface_[it->second].second;
    for (const auto& e : entry.entities) {
      if (std::find(merged.begin(), merged.end(), e) == merged.end()) merged.push_back(e);
    }
    store.occurrences_.push_back(std::move(entry));
  }
  return store;
}

std::optional<std::span<const std::string>> CandidateStore::lookup(std::string_view surface,
                                                                   const OccurrenceKey* occurrence) const {
  if (kind_ == StoreKind::context_aware && occurrence != nullptr) {
    if (const auto it = occurrence_index_.find(*occurrence); it != occurrence_index_.end()) {
      return std::span<const std::string>(occurrences_[it->second].entities);
    }
  }
  if (const auto it = surface_index_.find(normalize_surface(surface)); it != surface_index_.end()) {
    return std::span<const std::string>(by_surface_[it->second].second);
  }
  return std::nullopt;
}

std::size_t CandidateStore::entry_count() const {
  return kind_ == StoreKind::context_aware ? occurrences_.size() : by_surface_.size();
}

double CandidateStore::mean_list_length() const {
  std::size_t total = 0;
  if (kind_ == StoreKind::context_aware) {
    for (const auto& e : occurrences_) total += e.entities.size();
  } else {
    for (const auto& [surface, entities] : by_surface_) total += entities.size();
  }
  const auto n = entry_count();
  return n == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(n);
}

std::vector<std::string> split_entity_list(std::string_view field) {
  std::vector<std::string> out;
  std::string current;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const char c = field[i];
    if (c == '\\' && i + 1 < field.size() && (field[i + 1] == ',' || field[i + 1] == '\\')) {
      current.push_back(field[++i]);
    } else if (c == ',') {
      out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  out.push_back(std::move(current));
  return out;
}

std::string join_entity_list(std::span<const std::string> entities) {
  std::string out;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    if (i > 0) out.push_back(',');
    for (char c : entities[i]) {
      if (c == ',' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
  }
  return out;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t begin = 0;
  while (true) {
    const auto tab = line.find('\t', begin);
    fields.push_back(line.substr(begin, tab == std::string::npos ? std::string::npos : tab - begin));
    if (tab == std::string::npos) break;
    begin = tab + 1;
  }
  return fields;
}

std::size_t parse_offset(const std::string& field, const std::string& where) {
  std::size_t used = 0;
  try {
    if (field.empty() || field.front() == '-') throw std::invalid_argument("sign");
    const auto value = std::stoull(field, &used);
    if (used != field.size()) throw std::invalid_argument("trailing");
    return value;
  } catch (const std::exception&) {
    throw Error(ErrorKind::parse, where + ": bad offset '" + field + "'");
  }
}

std::vector<std::string> parse_entities(const std::string& field, const std::string& where) {
  auto entities = split_entity_list(field);
  for (const auto& e : entities) {
    if (e.empty()) throw Error(ErrorKind::parse, where + ": empty entity in candidate list");
  }
  return entities;
}

}  // namespace

CandidateStore parse_store(std::istream& in, StoreKind kind, StoreOptions options, const std::string& source) {
  std::vector<std::pair<std::string, std::vector<std::string>>> agnostic;
  std::vector<CandidateStore::AwareEntry> aware;
  // Duplicate keys are detected here so the error can name the line.
  const CandidateStore normalizer = CandidateStore::agnostic({}, options);
  std::unordered_set<std::string> seen_surfaces;
  std::set<OccurrenceKey> seen_occurrences;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto fields = split_tabs(line);
    if (kind == StoreKind::context_agnostic) {
      if (fields.size() != 2) throw Error(ErrorKind::parse, where + ": expected 2 tab-separated fields");
      if (!seen_surfaces.insert(normalizer.normalize_surface(fields[0])).second) {
        throw Error(ErrorKind::parse, where + ": duplicate mention '" + fields[0] + "'");
      }
      agnostic.emplace_back(fields[0], parse_entities(fields[1], where));
    } else {
      if (fields.size() != 5) throw Error(ErrorKind::parse, where + ": expected 5 tab-separated fields");
      OccurrenceKey key{fields[0], parse_offset(fields[1], where), parse_offset(fields[2], where)};
      if (key.start >= key.end) throw Error(ErrorKind::parse, where + ": empty occurrence span");
      if (!seen_occurrences.insert(key).second) {
        throw Error(ErrorKind::parse, where + ": duplicate occurrence");
      }
      aware.push_back({std::move(key), fields[3], parse_entities(fields[4], where)});
    }
  }
  return kind == StoreKind::context_agnostic ? CandidateStore::agnostic(agnostic, options)
                                             : CandidateStore::aware(aware, options);
}

CandidateStore load_store(const std::filesystem::path& path, StoreKind kind, StoreOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open candidate store " + path.string());
  return parse_store(in, kind, options, path.string());
}

void write_store(std::ostream& out, const CandidateStore& store) {
  if (store.kind() == StoreKind::context_agnostic) {
    for (const auto& [surface, entities] : store.surfaces()) {
      out << surface << '\t' << join_entity_list(entities) << '\n';
    }
    return;
  }
  for (const auto& e : store.occurrences()) {
    out << e.key.doc_id << '\t' << e.key.start << '\t' << e.key.end << '\t' << e.surface << '\t'
        << join_entity_list(e.entities) << '\n';
  }
}

CandidateStore project_context_agnostic(const CandidateStore& store) {
  if (store.kind() == StoreKind::context_agnostic) {
    throw Error(ErrorKind::configuration, "store is already context-agnostic");
  }
  return CandidateStore::agnostic(store.surfaces(), store.options());
}

RedirectTable RedirectTable::build(const std::vector<std::pair<std::string, std::string>>& pairs,
                                   const EntityVocabulary& vocab, std::size_t* dropped) {
  RedirectTable table;
  std::size_t skipped = 0;
  for (const auto& [from, to] : pairs) {
    if (vocab.contains(from) || !vocab.contains(to)) {
      ++skipped;
      continue;
    }
    const auto [it, inserted] = table.map_.emplace(from, to);
    if (!inserted && it->second != to) {
      throw Error(ErrorKind::parse, "redirect source '" + from + "' maps to both '" + it->second + "' and '" + to + "'");
    }
  }
  if (dropped != nullptr) *dropped = skipped;
  return table;
}

std::string_view RedirectTable::resolve(std::string_view entity) const {
  const auto it = map_.find(std::string(entity));
  return it == map_.end() ? entity : std::string_view(it->second);
}

std::vector<std::pair<std::string, std::string>> read_redirect_pairs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open redirect table " + path.string());
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorKind::parse, path.string() + ":" + std::to_string(line_no) + ": expected u<TAB>v");
    }
    pairs.emplace_back(fields[0], fields[1]);
  }
  return pairs;
}

RedirectTable load_redirects(const std::filesystem::path& path, const EntityVocabulary& vocab,
                             std::size_t* dropped) {
  return RedirectTable::build(read_redirect_pairs(path), vocab, dropped);
}

std::vector<SpanAnnotation> normalize_redirects(std::vector<SpanAnnotation> annotations, const RedirectTable& table) {
  for (auto& a : annotations) {
    const auto target = table.resolve(a.entity);
    if (target.data() != a.entity.data()) a.entity = std::string(target);
  }
  return annotations;
}

}  // namespace sublink
