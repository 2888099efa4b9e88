#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>

namespace sublink {

// Punctuation characters and function words used to flag tokens and to
// reject trivial spans.
class Lexicon {
 public:
  // Default English stop-list and ASCII plus common typographic punctuation.
  Lexicon();
  Lexicon(std::set<std::string> function_words, std::u32string punctuation);

  // One word per line; blank lines and lines starting with '#' are skipped.
  static Lexicon with_stoplist(const std::filesystem::path& path);

  bool is_punctuation(char32_t cp) const;
  // True when every scalar of `surface` is punctuation.
  bool is_punctuation(std::string_view surface) const;

  // Case-insensitive for lowercase and capitalized forms; all-caps surfaces
  // with more than one letter (acronyms such as "US", "ON") never match.
  bool is_function_word(std::string_view surface) const;

  const std::set<std::string>& function_words() const { return function_words_; }

 private:
  std::set<std::string> function_words_;
  std::u32string punctuation_;
  bool default_punctuation_ = true;
};

const std::set<std::string>& default_function_words();

}  // namespace sublink
