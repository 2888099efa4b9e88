#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "sublink/lexicon.hpp"
#include "sublink/types.hpp"

namespace sublink {

enum class TokenizationMode { mention_agnostic, mention_aware };

// Deterministic text -> subword segmentation. `forced_boundaries` are
// scalar offsets at which a token boundary must fall; they are sorted and
// unique. Implementations assign word_index by whitespace segmentation.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<SubwordToken> tokenize(std::string_view text,
                                             std::span<const std::size_t> forced_boundaries) const = 0;
};

// Whitespace words cut into consecutive pieces of at most `max_piece`
// scalars; punctuation scalars are always singleton tokens.
class ReferenceTokenizer final : public Tokenizer {
 public:
  explicit ReferenceTokenizer(Lexicon lexicon = {}, std::size_t max_piece = 4);

  std::vector<SubwordToken> tokenize(std::string_view text,
                                     std::span<const std::size_t> forced_boundaries) const override;

  const Lexicon& lexicon() const { return lexicon_; }

 private:
  Lexicon lexicon_;
  std::size_t max_piece_;
};

// Mention-aware mode forces boundaries at every mention start and end;
// mention-agnostic mode ignores `mentions`. Throws Error(offset) for
// mentions outside the text and Error(configuration) for aware mode
// without mentions.
std::vector<SubwordToken> tokenize(const Tokenizer& tokenizer, std::string_view text,
                                   TokenizationMode mode,
                                   const std::vector<SpanAnnotation>* mentions = nullptr);

// Recomputes the punctuation / function-word flags of externally supplied
// tokens.
void flag_tokens(std::vector<SubwordToken>& tokens, const Lexicon& lexicon);

}  // namespace sublink
