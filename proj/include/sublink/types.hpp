#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace sublink {

// Reserved non-entity label.
inline constexpr const char* kNonEntity = "O";

// (start, end, entity) over raw text; offsets count Unicode scalar values,
// end is exclusive.
struct SpanAnnotation {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string entity;

  auto operator<=>(const SpanAnnotation&) const = default;
  bool operator==(const SpanAnnotation&) const = default;

  bool is_entity() const { return entity != kNonEntity; }
};

struct SubwordToken {
  std::string surface;
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t word_index = 0;
  bool is_punctuation = false;
  bool is_function_word = false;

  bool operator==(const SubwordToken&) const = default;
};

struct AnnotatedDocument {
  std::string id;
  std::string text;
  std::vector<SubwordToken> tokens;
  std::vector<SpanAnnotation> gold;
  std::vector<SpanAnnotation> predicted;

  bool operator==(const AnnotatedDocument&) const = default;
};

// Checks the document invariants (offsets within text, ascending tokens,
// non-overlapping spans). Throws Error(offset) naming the first violation.
void validate(const AnnotatedDocument& doc);

}  // namespace sublink
