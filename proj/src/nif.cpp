#include "sublink/nif.hpp"

#include <algorithm>
#include <map>

#include "sublink/error.hpp"
#include "sublink/turtle.hpp"
#include "sublink/utf8.hpp"

namespace sublink::nif {

namespace {

std::string nif(const char* local) { return std::string(kNifCore) + local; }

std::size_t parse_index(const turtle::Term& term, const char* what) {
  if (term.kind != turtle::Term::Kind::literal || term.value.empty() ||
      !std::all_of(term.value.begin(), term.value.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(ErrorKind::protocol, std::string("nif:") + what + " must be a non-negative integer");
  }
  try {
    return std::stoull(term.value);
  } catch (const std::exception&) {
    throw Error(ErrorKind::protocol, std::string("nif:") + what + " out of range");
  }
}

std::string subject_key(const turtle::Term& t) {
  return (t.kind == turtle::Term::Kind::blank ? "_:" : "") + t.value;
}

void check_phrase(const Phrase& p, std::size_t length) {
  if (p.begin_index >= p.end_index || p.end_index > length) {
    throw Error(ErrorKind::protocol, "phrase [" + std::to_string(p.begin_index) + "," + std::to_string(p.end_index) +
                                         ") outside a text of " + std::to_string(length) + " characters");
  }
}

}  // namespace

Document parse_nif(std::string_view body) {
  const auto triples = turtle::parse(body);
  const auto is_string = nif("isString");
  const auto begin_index = nif("beginIndex");
  const auto end_index = nif("endIndex");
  const auto reference_context = nif("referenceContext");
  const auto ta_ident_ref = std::string(kItsRdf) + "taIdentRef";

  Document doc;
  std::string context_key;
  for (const auto& t : triples) {
    if (t.predicate.value == is_string) {
      if (t.object.kind != turtle::Term::Kind::literal) throw Error(ErrorKind::protocol, "nif:isString is not a literal");
      doc.context_uri = t.subject.value;
      doc.is_string = t.object.value;
      context_key = subject_key(t.subject);
      break;
    }
  }
  if (context_key.empty()) throw Error(ErrorKind::protocol, "no nif:isString in request");

  struct Partial {
    std::optional<std::size_t> begin, end;
    std::optional<std::string> ref, context;
  };
  std::map<std::string, Partial> partial;
  std::vector<std::string> order;
  for (const auto& t : triples) {
    const auto key = subject_key(t.subject);
    if (key == context_key) continue;
    const auto& p = t.predicate.value;
    if (p != begin_index && p != end_index && p != ta_ident_ref && p != reference_context) continue;
    auto [it, inserted] = partial.try_emplace(key);
    if (inserted) order.push_back(key);
    if (p == begin_index) it->second.begin = parse_index(t.object, "beginIndex");
    else if (p == end_index) it->second.end = parse_index(t.object, "endIndex");
    else if (p == ta_ident_ref) it->second.ref = t.object.value;
    else it->second.context = subject_key(t.object);
  }

  const std::size_t length = utf8::length(doc.is_string);
  for (const auto& key : order) {
    const auto& p = partial.at(key);
    if (p.context && *p.context != context_key) continue;
    if (!p.begin || !p.end) continue;
    Phrase phrase{*p.begin, *p.end, p.ref};
    check_phrase(phrase, length);
    doc.phrases.push_back(std::move(phrase));
  }
  std::sort(doc.phrases.begin(), doc.phrases.end());
  return doc;
}

namespace {

std::string index_literal(std::size_t value) {
  return "\"" + std::to_string(value) + "\"^^xsd:nonNegativeInteger";
}

std::string phrase_uri(const std::string& context_uri, const Phrase& p) {
  const auto hash = context_uri.find('#');
  const std::string base = hash == std::string::npos ? context_uri : context_uri.substr(0, hash);
  return base + "#char=" + std::to_string(p.begin_index) + "," + std::to_string(p.end_index);
}

}  // namespace

std::string emit_nif(const Document& document) {
  const std::u32string text = utf8::decode(document.is_string);
  std::vector<Phrase> phrases = document.phrases;
  std::sort(phrases.begin(), phrases.end());
  for (const auto& p : phrases) check_phrase(p, text.size());

  std::string out;
  out += "@prefix nif: <" + std::string(kNifCore) + "> .\n";
  out += "@prefix itsrdf: <" + std::string(kItsRdf) + "> .\n";
  out += "@prefix xsd: <" + std::string(kXsd) + "> .\n\n";
  out += "<" + document.context_uri + ">\n";
  out += "    a nif:Context , nif:String , nif:RFC5147String ;\n";
  out += "    nif:isString \"" + turtle::escape_string(document.is_string) + "\"^^xsd:string ;\n";
  out += "    nif:beginIndex " + index_literal(0) + " ;\n";
  out += "    nif:endIndex " + index_literal(text.size()) + " .\n";
  for (const auto& p : phrases) {
    const auto anchor = utf8::encode(std::u32string_view(text).substr(p.begin_index, p.end_index - p.begin_index));
    out += "\n<" + phrase_uri(document.context_uri, p) + ">\n";
    out += "    a nif:Phrase , nif:String , nif:RFC5147String ;\n";
    out += "    nif:referenceContext <" + document.context_uri + "> ;\n";
    out += "    nif:anchorOf \"" + turtle::escape_string(anchor) + "\"^^xsd:string ;\n";
    out += "    nif:beginIndex " + index_literal(p.begin_index) + " ;\n";
    out += "    nif:endIndex " + index_literal(p.end_index);
    if (p.ta_ident_ref) out += " ;\n    itsrdf:taIdentRef <" + *p.ta_ident_ref + ">";
    out += " .\n";
  }
  return out;
}

std::string emit_nif(const Document& document, std::span<const SpanAnnotation> annotations,
                     std::string_view kb_prefix) {
  Document response{document.context_uri, document.is_string, {}};
  for (const auto& a : annotations) {
    if (!a.is_entity()) continue;
    response.phrases.push_back({a.start, a.end, entity_uri(kb_prefix, a.entity)});
  }
  return emit_nif(response);
}

std::string entity_uri(std::string_view kb_prefix, std::string_view entity) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string uri(kb_prefix);
  for (unsigned char c : entity) {
    if (c == ' ') {
      uri.push_back('_');
    } else if (c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
               c == '`' || c == '\\' || c == '%' || c == 0x7F) {
      uri.push_back('%');
      uri.push_back(kHex[c >> 4]);
      uri.push_back(kHex[c & 0xF]);
    } else {
      uri.push_back(static_cast<char>(c));
    }
  }
  return uri;
}

std::optional<std::string> entity_from_uri(std::string_view kb_prefix, std::string_view uri) {
  if (uri.substr(0, kb_prefix.size()) != kb_prefix) return std::nullopt;
  const auto local = uri.substr(kb_prefix.size());
  std::string entity;
  const auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  for (std::size_t i = 0; i < local.size(); ++i) {
    if (local[i] == '%' && i + 2 < local.size() && hex(local[i + 1]) >= 0 && hex(local[i + 2]) >= 0) {
      entity.push_back(static_cast<char>(hex(local[i + 1]) * 16 + hex(local[i + 2])));
      i += 2;
    } else {
      entity.push_back(local[i]);
    }
  }
  return entity;
}

}  // namespace sublink::nif
