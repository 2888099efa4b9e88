#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sublink/types.hpp"
#include "sublink/vocabulary.hpp"

namespace sublink {

enum class StoreKind { context_agnostic, context_aware };

struct StoreOptions {
  bool case_sensitive = true;
};

// A mention occurrence: document id plus scalar-offset span.
struct OccurrenceKey {
  std::string doc_id;
  std::size_t start = 0;
  std::size_t end = 0;

  auto operator<=>(const OccurrenceKey&) const = default;
};

// Mention-specific candidate lists. Context-aware stores are keyed by
// occurrence and fall back to the union of lists seen for the surface.
// Immutable once built.
class CandidateStore {
 public:
  struct AwareEntry {
    OccurrenceKey key;
    std::string surface;
    std::vector<std::string> entities;
  };

  CandidateStore() = default;

  // Throw Error(parse) on duplicate keys or empty lists.
  static CandidateStore agnostic(const std::vector<std::pair<std::string, std::vector<std::string>>>& entries,
                                 StoreOptions options = {});
  static CandidateStore aware(const std::vector<AwareEntry>& entries, StoreOptions options = {});

  StoreKind kind() const { return kind_; }
  const StoreOptions& options() const { return options_; }

  // Occurrence first (aware stores only), then surface. Surfaces are
  // trimmed of outer whitespace and, for case-insensitive stores, lowercased.
  std::optional<std::span<const std::string>> lookup(std::string_view surface,
                                                     const OccurrenceKey* occurrence = nullptr) const;

  // Mentions (agnostic) or occurrences (aware).
  std::size_t entry_count() const;
  double mean_list_length() const;

  // Surface -> list, in first-seen order of surfaces.
  const std::vector<std::pair<std::string, std::vector<std::string>>>& surfaces() const { return by_surface_; }
  const std::vector<AwareEntry>& occurrences() const { return occurrences_; }

  std::string normalize_surface(std::string_view surface) const;

 private:
  StoreKind kind_ = StoreKind::context_agnostic;
  StoreOptions options_;
  std::vector<std::pair<std::string, std::vector<std::string>>> by_surface_;
  std::unordered_map<std::string, std::size_t> surface_index_;
  std::vector<AwareEntry> occurrences_;
  std::map<OccurrenceKey, std::size_t> occurrence_index_;
};

// Agnostic: `surface<TAB>e1,e2,...`. Aware:
// `doc_id<TAB>start<TAB>end<TAB>surface<TAB>e1,e2,...`. Entity lists are
// comma-separated; "\," and "\\" escape a literal comma and backslash.
CandidateStore load_store(const std::filesystem::path& path, StoreKind kind, StoreOptions options = {});
CandidateStore parse_store(std::istream& in, StoreKind kind, StoreOptions options, const std::string& source);
void write_store(std::ostream& out, const CandidateStore& store);

std::vector<std::string> split_entity_list(std::string_view field);
std::string join_entity_list(std::span<const std::string> entities);

// Per-surface union of all occurrence lists, first-seen order.
CandidateStore project_context_agnostic(const CandidateStore& store);

// Single-hop redirect map u -> v with u outside and v inside the fixed
// vocabulary.
class RedirectTable {
 public:
  RedirectTable() = default;

  // Pairs that break the vocabulary condition are dropped and counted in
  // `dropped`; a source mapped to two different targets is an error.
  static RedirectTable build(const std::vector<std::pair<std::string, std::string>>& pairs,
                             const EntityVocabulary& vocab, std::size_t* dropped = nullptr);

  std::string_view resolve(std::string_view entity) const;
  std::size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }

 private:
  std::unordered_map<std::string, std::string> map_;
};

// `u<TAB>v` per line.
std::vector<std::pair<std::string, std::string>> read_redirect_pairs(const std::filesystem::path& path);
RedirectTable load_redirects(const std::filesystem::path& path, const EntityVocabulary& vocab,
                             std::size_t* dropped = nullptr);

std::vector<SpanAnnotation> normalize_redirects(std::vector<SpanAnnotation> annotations, const RedirectTable& table);

}  // namespace sublink
