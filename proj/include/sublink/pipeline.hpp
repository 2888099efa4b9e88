#pragma once

#include <memory>
#include <vector>

#include "sublink/aggregation.hpp"
#include "sublink/candidates.hpp"
#include "sublink/chunking.hpp"
#include "sublink/providers.hpp"
#include "sublink/tokenizer.hpp"
#include "sublink/vocabulary.hpp"

namespace sublink {

struct LinkerConfig {
  TokenizationMode tokenization = TokenizationMode::mention_agnostic;
  ChunkingConfig chunking;
  AggregationConfig aggregation;
};

// tokenize -> chunk -> score -> merge -> aggregate -> redirect-normalize.
// Immutable after construction; link() may be called concurrently.
class Linker {
 public:
  Linker(EntityVocabulary vocab, std::shared_ptr<const Tokenizer> tokenizer,
         std::shared_ptr<const ScoreProvider> provider, LinkerConfig config,
         std::shared_ptr<const CandidateStore> store = nullptr,
         std::shared_ptr<const RedirectTable> redirects = nullptr);

  // Tokenizes documents that arrive without tokens and refreshes token
  // flags otherwise. Mention-aware mode uses the gold spans as mentions.
  AnnotatedDocument prepare(AnnotatedDocument doc) const;

  // Document-level scores from chunked provider calls.
  LogitMatrix score(const AnnotatedDocument& prepared) const;

  std::vector<ScoredSpan> link(const AnnotatedDocument& prepared) const;

  const EntityVocabulary& vocabulary() const { return vocab_; }
  const LinkerConfig& config() const { return config_; }

 private:
  EntityVocabulary vocab_;
  std::shared_ptr<const Tokenizer> tokenizer_;
  std::shared_ptr<const ScoreProvider> provider_;
  LinkerConfig config_;
  std::shared_ptr<const CandidateStore> store_;
  std::shared_ptr<const RedirectTable> redirects_;
};

}  // namespace sublink
