#include "sublink/tokenizer.hpp"

#include <algorithm>

#include "sublink/error.hpp"
#include "sublink/utf8.hpp"

namespace sublink {

ReferenceTokenizer::ReferenceTokenizer(Lexicon lexicon, std::size_t max_piece)
    : lexicon_(std::move(lexicon)), max_piece_(max_piece) {
  if (max_piece_ == 0) throw Error(ErrorKind::configuration, "tokenizer piece length must be positive");
}

std::vector<SubwordToken> ReferenceTokenizer::tokenize(
    std::string_view text, std::span<const std::size_t> forced_boundaries) const {
  const std::u32string cps = utf8::decode(text);
  std::vector<SubwordToken> tokens;
  auto forced = forced_boundaries.begin();
  const auto is_forced = [&](std::size_t pos) {
    while (forced != forced_boundaries.end() && *forced < pos) ++forced;
    return forced != forced_boundaries.end() && *forced == pos;
  };
  const auto emit = [&](std::size_t start, std::size_t end, std::size_t word) {
    SubwordToken t;
    t.surface = utf8::encode(std::u32string_view(cps).substr(start, end - start));
    t.start = start;
    t.end = end;
    t.word_index = word;
    t.is_punctuation = end - start == 1 && lexicon_.is_punctuation(cps[start]);
    tokens.push_back(std::move(t));
  };

  std::size_t word = 0;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (utf8::is_space(cps[i])) {
      ++i;
      continue;
    }
    const std::size_t word_start = i;
    std::size_t word_end = i;
    while (word_end < cps.size() && !utf8::is_space(cps[word_end])) ++word_end;
    const std::size_t first_token = tokens.size();

    std::size_t piece_start = word_start;
    for (std::size_t pos = word_start; pos < word_end; ++pos) {
      if (lexicon_.is_punctuation(cps[pos])) {
        if (piece_start < pos) emit(piece_start, pos, word);
        emit(pos, pos + 1, word);
        piece_start = pos + 1;
        continue;
      }
      if (pos > piece_start && (pos - piece_start == max_piece_ || is_forced(pos))) {
        emit(piece_start, pos, word);
        piece_start = pos;
      }
    }
    if (piece_start < word_end) emit(piece_start, word_end, word);

    // Function-word status belongs to the whole word, so "between" flags
    // both of its pieces while the "a" piece of "Obama" is not flagged.
    const std::string word_text =
        utf8::encode(std::u32string_view(cps).substr(word_start, word_end - word_start));
    const bool function_word = lexicon_.is_function_word(word_text);
    for (std::size_t t = first_token; t < tokens.size(); ++t) {
      tokens[t].is_function_word = function_word;
    }

    ++word;
    i = word_end;
  }
  return tokens;
}

std::vector<SubwordToken> tokenize(const Tokenizer& tokenizer, std::string_view text,
                                   TokenizationMode mode,
                                   const std::vector<SpanAnnotation>* mentions) {
  if (mode == TokenizationMode::mention_agnostic) return tokenizer.tokenize(text, {});
  if (mentions == nullptr) {
    throw Error(ErrorKind::configuration, "mention-aware tokenization requires mentions");
  }
  const std::size_t length = utf8::length(text);
  std::vector<std::size_t> boundaries;
  boundaries.reserve(mentions->size() * 2);
  for (const auto& m : *mentions) {
    if (m.start >= m.end || m.end > length) {
      throw Error(ErrorKind::offset, "mention [" + std::to_string(m.start) + "," +
                                         std::to_string(m.end) + ") outside text of length " +
                                         std::to_string(length));
    }
    boundaries.push_back(m.start);
    boundaries.push_back(m.end);
  }
  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end()), boundaries.end());
  return tokenizer.tokenize(text, boundaries);
}

void flag_tokens(std::vector<SubwordToken>& tokens, const Lexicon& lexicon) {
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t j = i;
    std::string word;
    while (j < tokens.size() && tokens[j].word_index == tokens[i].word_index) {
      word += tokens[j].surface;
      ++j;
    }
    const bool function_word = lexicon.is_function_word(word);
    for (std::size_t k = i; k < j; ++k) {
      tokens[k].is_punctuation = lexicon.is_punctuation(tokens[k].surface) &&
                                 utf8::length(tokens[k].surface) == 1;
      tokens[k].is_function_word = function_word;
    }
    i = j;
  }
}

}  // namespace sublink
