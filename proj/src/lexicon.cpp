#include "sublink/lexicon.hpp"

#include <algorithm>
#include <fstream>

#include "sublink/error.hpp"
#include "sublink/utf8.hpp"

namespace sublink {

const std::set<std::string>& default_function_words() {
  static const std::set<std::string> words = {
      // determiners
      "a", "an", "the", "this", "that", "these", "those", "some", "any", "each", "every",
      "either", "neither", "no", "another", "such",
      // conjunctions
      "and", "or", "but", "nor", "so", "yet", "for", "if", "because", "although", "though",
      "while", "whereas", "unless", "than", "whether",
      // prepositions
      "of", "in", "on", "at", "by", "to", "from", "with", "without", "into", "onto", "upon",
      "about", "above", "below", "after", "before", "between", "among", "through", "during",
      "over", "under", "against", "across", "along", "around", "behind", "beyond", "near",
      "off", "out", "up", "down", "since", "until", "via", "within", "per", "as",
      // auxiliaries
      "is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had", "having",
      "do", "does", "did", "will", "would", "shall", "should", "can", "could", "may", "might",
      "must", "'s", "not"};
  return words;
}

Lexicon::Lexicon() : function_words_(default_function_words()) {}

Lexicon::Lexicon(std::set<std::string> function_words, std::u32string punctuation)
    : function_words_(std::move(function_words)),
      punctuation_(std::move(punctuation)),
      default_punctuation_(false) {}

Lexicon Lexicon::with_stoplist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open stop-list " + path.string());
  Lexicon lexicon;
  lexicon.function_words_.clear();
  std::string line;
  while (std::getline(in, line)) {
    const auto word = utf8::trim(line);
    if (word.empty() || word.front() == '#') continue;
    lexicon.function_words_.insert(utf8::ascii_lower(word));
  }
  return lexicon;
}

bool Lexicon::is_punctuation(char32_t cp) const {
  if (default_punctuation_) return utf8::is_default_punctuation(cp);
  return punctuation_.find(cp) != std::u32string::npos;
}

bool Lexicon::is_punctuation(std::string_view surface) const {
  const auto cps = utf8::decode(surface);
  if (cps.empty()) return false;
  return std::all_of(cps.begin(), cps.end(), [this](char32_t cp) { return is_punctuation(cp); });
}

bool Lexicon::is_function_word(std::string_view surface) const {
  const auto upper = std::count_if(surface.begin(), surface.end(),
                                   [](char c) { return c >= 'A' && c <= 'Z'; });
  if (upper > 1) return false;
  return function_words_.contains(utf8::ascii_lower(surface));
}

}  // namespace sublink
