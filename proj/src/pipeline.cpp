#include "sublink/pipeline.hpp"

#include "sublink/error.hpp"

namespace sublink {

Linker::Linker(EntityVocabulary vocab, std::shared_ptr<const Tokenizer> tokenizer,
               std::shared_ptr<const ScoreProvider> provider, LinkerConfig config,
               std::shared_ptr<const CandidateStore> store, std::shared_ptr<const RedirectTable> redirects)
    : vocab_(std::move(vocab)),
      tokenizer_(std::move(tokenizer)),
      provider_(std::move(provider)),
      config_(std::move(config)),
      store_(std::move(store)),
      redirects_(std::move(redirects)) {
  vocab_.require_o_index();
  if (provider_->vocab_size() != vocab_.size()) {
    throw Error(ErrorKind::configuration, "score provider covers " + std::to_string(provider_->vocab_size()) +
                                              " entities but the vocabulary has " + std::to_string(vocab_.size()));
  }
  if (config_.chunking.window <= config_.chunking.overlap) {
    throw Error(ErrorKind::configuration, "chunk window must exceed overlap");
  }
  if (config_.aggregation.k == 0 || config_.aggregation.k > vocab_.size()) {
    throw Error(ErrorKind::configuration, "top-k must lie in [1, " + std::to_string(vocab_.size()) + "]");
  }
  if (config_.aggregation.candidate_policy != CandidatePolicy::none && !store_) {
    throw Error(ErrorKind::configuration, "candidate policy set but no candidate store loaded");
  }
}

AnnotatedDocument Linker::prepare(AnnotatedDocument doc) const {
  if (doc.tokens.empty()) {
    doc.tokens = tokenize(*tokenizer_, doc.text, config_.tokenization, &doc.gold);
  } else {
    flag_tokens(doc.tokens, config_.aggregation.lexicon);
  }
  return doc;
}

LogitMatrix Linker::score(const AnnotatedDocument& prepared) const {
  const auto chunks = chunk(prepared.tokens, config_.chunking);
  std::vector<LogitMatrix> per_chunk;
  per_chunk.reserve(chunks.size());
  for (const auto& c : chunks) per_chunk.push_back(provider_->score(prepared, c));
  if (chunks.empty()) return LogitMatrix(0, vocab_.size());
  if (chunks.size() == 1 && per_chunk[0].rows() == chunks[0].size()) return std::move(per_chunk[0]);
  return merge_chunk_scores(chunks, per_chunk);
}

std::vector<ScoredSpan> Linker::link(const AnnotatedDocument& prepared) const {
  auto spans = aggregate_scored(prepared, score(prepared), vocab_, config_.aggregation, store_.get());
  if (redirects_) {
    for (auto& s : spans) s.span.entity = std::string(redirects_->resolve(s.span.entity));
  }
  return spans;
}

}  // namespace sublink
