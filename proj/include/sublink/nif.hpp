#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sublink/types.hpp"

namespace sublink::nif {

inline constexpr const char* kNifCore = "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#";
inline constexpr const char* kItsRdf = "http://www.w3.org/2005/11/its/rdf#";
inline constexpr const char* kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr const char* kDefaultKbPrefix = "http://en.wikipedia.org/wiki/";

// Offsets count Unicode scalar values of is_string.
struct Phrase {
  std::size_t begin_index = 0;
  std::size_t end_index = 0;
  std::optional<std::string> ta_ident_ref;

  auto operator<=>(const Phrase&) const = default;
  bool operator==(const Phrase&) const = default;
};

struct Document {
  std::string context_uri;
  std::string is_string;
  std::vector<Phrase> phrases;  // sorted by (begin, end)

  bool operator==(const Document&) const = default;
};

// Extracts the context carrying nif:isString and every phrase with
// nif:beginIndex/nif:endIndex that is not bound to another context.
// Malformed Turtle -> Error(parse); missing isString or bad offsets ->
// Error(protocol).
Document parse_nif(std::string_view body);

// Serializes the context and its phrases, ordered by (begin, end).
// Out-of-range phrases -> Error(protocol).
std::string emit_nif(const Document& document);

// The context of `document` with one phrase per entity annotation, linked to
// kb_prefix + identifier. Inbound phrases are not echoed.
std::string emit_nif(const Document& document, std::span<const SpanAnnotation> annotations,
                     std::string_view kb_prefix = kDefaultKbPrefix);

// Spaces become underscores; characters not allowed in an IRI are
// percent-encoded.
std::string entity_uri(std::string_view kb_prefix, std::string_view entity);
// Inverse of entity_uri for URIs under kb_prefix; nullopt otherwise.
std::optional<std::string> entity_from_uri(std::string_view kb_prefix, std::string_view uri);

}  // namespace sublink::nif
