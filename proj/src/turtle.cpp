#include "sublink/turtle.hpp"

#include <unordered_map>

#include "sublink/error.hpp"
#include "sublink/utf8.hpp"

namespace sublink::turtle {

namespace {

constexpr const char* kXsd = "http://www.w3.org/2001/XMLSchema#";
constexpr const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

bool is_name_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<Triple> run() {
    skip_ws();
    while (!at_end()) {
      if (peek() == '@') {
        directive_at();
      } else if (keyword_ahead("PREFIX")) {
        pos_ += 6;
        prefix_body(false);
      } else if (keyword_ahead("BASE")) {
        pos_ += 4;
        skip_ws();
        base_ = iri_ref();
      } else {
        statement();
      }
      skip_ws();
    }
    return std::move(triples_);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::parse, "turtle line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + message);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool keyword_ahead(std::string_view kw) const {
    if (text_.size() - pos_ < kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
      const char c = text_[pos_ + i];
      const char upper = (c >= 'a' && c <= 'z') ? static_cast<char>(c - 32) : c;
      if (upper != kw[i]) return false;
    }
    const char next = pos_ + kw.size() < text_.size() ? text_[pos_ + kw.size()] : ' ';
    return next == ' ' || next == '\t' || next == '\n' || next == '\r';
  }

  void directive_at() {
    ++pos_;
    if (text_.substr(pos_, 6) == "prefix") {
      pos_ += 6;
      prefix_body(true);
    } else if (text_.substr(pos_, 4) == "base") {
      pos_ += 4;
      skip_ws();
      base_ = iri_ref();
      expect('.');
    } else {
      fail("unknown directive");
    }
  }

  void prefix_body(bool needs_dot) {
    skip_ws();
    std::string name;
    while (!at_end() && peek() != ':') {
      if (!is_name_char(peek())) fail("bad prefix name");
      name.push_back(text_[pos_++]);
    }
    if (at_end()) fail("unterminated prefix declaration");
    ++pos_;
    skip_ws();
    prefixes_[name] = iri_ref();
    if (needs_dot) expect('.');
  }

  void statement() {
    const Term subject = subject_term();
    predicate_object_list(subject);
    expect('.');
  }

  void predicate_object_list(const Term& subject) {
    while (true) {
      skip_ws();
      const Term predicate = verb();
      while (true) {
        skip_ws();
        triples_.push_back({subject, predicate, object_term()});
        skip_ws();
        if (peek() != ',') break;
        ++pos_;
      }
      skip_ws();
      if (peek() != ';') return;
      while (peek() == ';') {
        ++pos_;
        skip_ws();
      }
      if (peek() == '.' || peek() == ']') return;
    }
  }

  Term subject_term() {
    skip_ws();
    const char c = peek();
    if (c == '<') return {Term::Kind::iri, iri_ref(), {}, {}};
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '[' || c == '(') fail("anonymous blank nodes and collections are not supported");
    return {Term::Kind::iri, prefixed_name(), {}, {}};
  }

  Term verb() {
    if (peek() == 'a') {
      const char next = peek(1);
      if (next == ' ' || next == '\t' || next == '\n' || next == '\r' || next == '<' || next == '"') {
        ++pos_;
        return {Term::Kind::iri, kRdfType, {}, {}};
      }
    }
    if (peek() == '<') return {Term::Kind::iri, iri_ref(), {}, {}};
    return {Term::Kind::iri, prefixed_name(), {}, {}};
  }

  Term object_term() {
    const char c = peek();
    if (c == '<') return {Term::Kind::iri, iri_ref(), {}, {}};
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '"' || c == '\'') return literal();
    if (c == '[' || c == '(') fail("anonymous blank nodes and collections are not supported");
    if ((c >= '0' && c <= '9') || c == '+' || c == '-' || (c == '.' && peek(1) >= '0' && peek(1) <= '9')) {
      return number();
    }
    if (text_.substr(pos_, 4) == "true" && !is_name_char(peek(4)) && peek(4) != ':') {
      pos_ += 4;
      return {Term::Kind::literal, "true", std::string(kXsd) + "boolean", {}};
    }
    if (text_.substr(pos_, 5) == "false" && !is_name_char(peek(5)) && peek(5) != ':') {
      pos_ += 5;
      return {Term::Kind::literal, "false", std::string(kXsd) + "boolean", {}};
    }
    return {Term::Kind::iri, prefixed_name(), {}, {}};
  }

  Term number() {
    std::string lexical;
    if (peek() == '+' || peek() == '-') lexical.push_back(text_[pos_++]);
    bool dot = false, exponent = false, digits = false;
    while (!at_end()) {
      const char c = peek();
      if (c >= '0' && c <= '9') {
        digits = true;
      } else if (c == '.' && !dot && !exponent && peek(1) >= '0' && peek(1) <= '9') {
        dot = true;
      } else if ((c == 'e' || c == 'E') && digits && !exponent) {
        exponent = true;
        lexical.push_back(text_[pos_++]);
        if (peek() == '+' || peek() == '-') lexical.push_back(text_[pos_++]);
        continue;
      } else {
        break;
      }
      lexical.push_back(text_[pos_++]);
    }
    if (!digits) fail("malformed number");
    const char* type = exponent ? "double" : dot ? "decimal" : "integer";
    return {Term::Kind::literal, lexical, std::string(kXsd) + type, {}};
  }

  Term blank_label() {
    pos_ += 2;
    std::string label;
    while (!at_end() && is_name_char(peek())) label.push_back(text_[pos_++]);
    while (!label.empty() && label.back() == '.') {
      label.pop_back();
      --pos_;
    }
    if (label.empty()) fail("empty blank node label");
    return {Term::Kind::blank, label, {}, {}};
  }

  std::string prefixed_name() {
    std::string prefix;
    while (!at_end() && peek() != ':') {
      if (!is_name_char(peek())) fail("expected an IRI or prefixed name");
      prefix.push_back(text_[pos_++]);
    }
    if (at_end()) fail("expected ':' in prefixed name");
    ++pos_;
    const auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) fail("undeclared prefix '" + prefix + "'");
    std::string local;
    while (!at_end()) {
      const char c = peek();
      if (c == '\\' && pos_ + 1 < text_.size()) {
        local.push_back(text_[pos_ + 1]);
        pos_ += 2;
      } else if (is_name_char(c) || c == ':' || c == '%') {
        local.push_back(c);
        ++pos_;
      } else {
        break;
      }
    }
    while (!local.empty() && local.back() == '.') {
      local.pop_back();
      --pos_;
    }
    return it->second + local;
  }

  char32_t hex_escape(std::size_t digits) {
    if (pos_ + digits > text_.size()) fail("truncated unicode escape");
    char32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      const char c = text_[pos_++];
      cp <<= 4;
      if (c >= '0' && c <= '9') cp |= static_cast<char32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') cp |= static_cast<char32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') cp |= static_cast<char32_t>(c - 'A' + 10);
      else fail("bad hex digit in unicode escape");
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("unicode escape outside the scalar range");
    return cp;
  }

  std::string iri_ref() {
    if (peek() != '<') fail("expected '<'");
    ++pos_;
    std::string iri;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      const char c = text_[pos_++];
      if (c == '>') break;
      if (c == '\\') {
        const char kind = text_[pos_++];
        if (kind == 'u') utf8::append(iri, hex_escape(4));
        else if (kind == 'U') utf8::append(iri, hex_escape(8));
        else fail("bad escape in IRI");
        continue;
      }
      if (static_cast<unsigned char>(c) <= 0x20 || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
          c == '`' || c == '<') {
        fail("illegal character in IRI");
      }
      iri.push_back(c);
    }
    // Relative references are resolved by plain concatenation with @base.
    if (!base_.empty() && iri.find(':') == std::string::npos) return base_ + iri;
    return iri;
  }

  Term literal() {
    const char quote = peek();
    const bool long_form = peek(1) == quote && peek(2) == quote;
    pos_ += long_form ? 3 : 1;
    std::string value;
    while (true) {
      if (at_end()) fail("unterminated string literal");
      const char c = text_[pos_];
      if (long_form) {
        if (c == quote && peek(1) == quote && peek(2) == quote) {
          // Up to two extra quotes may end the content.
          while (peek(3) == quote) {
            value.push_back(quote);
            ++pos_;
          }
          pos_ += 3;
          break;
        }
      } else {
        if (c == quote) {
          ++pos_;
          break;
        }
        if (c == '\n' || c == '\r') fail("newline in short string literal");
      }
      ++pos_;
      if (c != '\\') {
        value.push_back(c);
        continue;
      }
      if (at_end()) fail("unterminated escape");
      const char e = text_[pos_++];
      switch (e) {
        case 't': value.push_back('\t'); break;
        case 'b': value.push_back('\b'); break;
        case 'n': value.push_back('\n'); break;
        case 'r': value.push_back('\r'); break;
        case 'f': value.push_back('\f'); break;
        case '"': value.push_back('"'); break;
        case '\'': value.push_back('\''); break;
        case '\\': value.push_back('\\'); break;
        case 'u': utf8::append(value, hex_escape(4)); break;
        case 'U': utf8::append(value, hex_escape(8)); break;
        default: fail(std::string("bad string escape \\") + e);
      }
    }
    Term term{Term::Kind::literal, std::move(value), {}, {}};
    if (peek() == '@') {
      ++pos_;
      while (!at_end() && (is_name_char(peek()) && peek() != '.')) term.language.push_back(text_[pos_++]);
      if (term.language.empty()) fail("empty language tag");
    } else if (peek() == '^' && peek(1) == '^') {
      pos_ += 2;
      term.datatype = peek() == '<' ? iri_ref() : prefixed_name();
    }
    return term;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::string base_;
  std::unordered_map<std::string, std::string> prefixes_;
  std::vector<Triple> triples_;
};

}  // namespace

std::vector<Triple> parse(std::string_view text) {
  utf8::decode(text);  // rejects malformed UTF-8 up front
  return Parser(text).run();
}

std::string escape_string(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace sublink::turtle
