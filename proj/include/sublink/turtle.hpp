#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sublink::turtle {

struct Term {
  enum class Kind { iri, blank, literal };
  Kind kind = Kind::iri;
  std::string value;     // expanded IRI, blank label, or lexical form
  std::string datatype;  // literals only; empty for plain strings
  std::string language;

  bool operator==(const Term&) const = default;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;
};

// Parses the Turtle subset used for NIF exchange: @prefix/@base and their
// SPARQL forms, IRIs, prefixed names, `a`, blank node labels, string
// literals (all four quote styles) with language tags or datatypes,
// numbers and booleans, and `;` / `,` lists. Anonymous blank nodes and
// collections are rejected. Throws Error(parse) with line and column.
std::vector<Triple> parse(std::string_view text);

// Escapes for use inside a double-quoted literal.
std::string escape_string(std::string_view value);

}  // namespace sublink::turtle
