#include "sublink/types.hpp"

#include <algorithm>

#include "sublink/error.hpp"
#include "sublink/utf8.hpp"

namespace sublink {

namespace {

void check_spans(const AnnotatedDocument& doc, const std::vector<SpanAnnotation>& spans,
                 const char* what, std::size_t length) {
  std::vector<SpanAnnotation> sorted = spans;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& s = sorted[i];
    if (s.start >= s.end || s.end > length) {
      throw Error(ErrorKind::offset, "document " + doc.id + ": " + what + " span [" +
                                         std::to_string(s.start) + "," + std::to_string(s.end) +
                                         ") out of range");
    }
    if (i > 0 && sorted[i - 1].end > s.start) {
      throw Error(ErrorKind::offset, "document " + doc.id + ": overlapping " + what + " spans at " +
                                         std::to_string(s.start));
    }
  }
}

}  // namespace

void validate(const AnnotatedDocument& doc) {
  const std::u32string text = utf8::decode(doc.text);
  const std::size_t length = text.size();
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const auto& t = doc.tokens[i];
    if (t.start >= t.end || t.end > length) {
      throw Error(ErrorKind::offset, "document " + doc.id + ": token " + std::to_string(i) +
                                         " out of range");
    }
    if (utf8::encode(std::u32string_view(text).substr(t.start, t.end - t.start)) != t.surface) {
      throw Error(ErrorKind::offset, "document " + doc.id + ": token " + std::to_string(i) +
                                         " surface does not match the text");
    }
    if (i > 0) {
      const auto& prev = doc.tokens[i - 1];
      if (prev.end > t.start || prev.word_index > t.word_index) {
        throw Error(ErrorKind::offset, "document " + doc.id + ": token " + std::to_string(i) +
                                           " not in ascending order");
      }
    }
  }
  check_spans(doc, doc.gold, "gold", length);
  check_spans(doc, doc.predicted, "predicted", length);
}

}  // namespace sublink
