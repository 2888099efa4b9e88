#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sublink/candidates.hpp"
#include "sublink/lexicon.hpp"
#include "sublink/matrix.hpp"
#include "sublink/types.hpp"
#include "sublink/vocabulary.hpp"

namespace sublink {

enum class Activation { sigmoid, softmax };
enum class CandidatePolicy { none, context_agnostic, context_aware };

struct AggregationConfig {
  std::size_t k = 10;
  Activation activation = Activation::sigmoid;
  CandidatePolicy candidate_policy = CandidatePolicy::none;
  Lexicon lexicon;
};

// Entity column with its probability.
struct EntityScore {
  std::size_t entity = 0;
  double probability = 0.0;

  bool operator==(const EntityScore&) const = default;
};

// Top-k entries of one subword, descending, ties to the lower column.
using SubwordPredictions = std::vector<EntityScore>;

// Throws Error(configuration) when k is zero or exceeds the vocabulary.
std::vector<SubwordPredictions> topk(const LogitMatrix& scores, std::size_t k,
                                     Activation activation = Activation::sigmoid);

// Index of the highest probability, ties to the lower entity column.
std::size_t top_entity(std::span<const EntityScore> scores);

struct WordAnnotation {
  std::size_t word_index = 0;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::size_t token_begin = 0;
  std::size_t token_end = 0;
  // Sorted by entity column.
  std::vector<EntityScore> entity_scores;
  std::size_t top_entity = 0;
};

// Union of the subwords' entities, each averaged over all subwords of the
// word (absent from a subword's top-k counts as 0). Offsets are left zero.
WordAnnotation word_distribution(std::span<const SubwordPredictions> subwords);

// A joined run of words, or a single word.
struct PhraseAnnotation {
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::size_t token_begin = 0;
  std::size_t token_end = 0;
  std::size_t word_begin = 0;
  std::size_t word_end = 0;
  std::vector<EntityScore> entity_scores;
  std::size_t top_entity = 0;

  double top_probability() const;
};

// Maximal runs of consecutive words sharing top_entity; merged scores are
// per-entity means over the run.
std::vector<PhraseAnnotation> join_spans(std::span<const WordAnnotation> words);

// Drops entities missing from the candidate list of `surface` and
// re-selects the top entity; the phrase becomes O when nothing survives.
// Unknown surfaces pass through unchanged.
PhraseAnnotation filter_by_candidates(PhraseAnnotation phrase, std::string_view surface, const CandidateStore& store,
                                      const EntityVocabulary& vocab, const OccurrenceKey* occurrence = nullptr);

// Sets single-punctuation-subword and single-function-word phrases to O and
// removes all O phrases.
std::vector<PhraseAnnotation> postprocess(std::vector<PhraseAnnotation> phrases, std::span<const SubwordToken> tokens,
                                          const Lexicon& lexicon, std::size_t o_index);

struct ScoredSpan {
  SpanAnnotation span;
  double score = 0.0;
};

// topk -> word_distribution -> join_spans -> filter_by_candidates ->
// postprocess. `doc` supplies id, text and tokens.
std::vector<ScoredSpan> aggregate_scored(const AnnotatedDocument& doc, const LogitMatrix& scores,
                                         const EntityVocabulary& vocab, const AggregationConfig& config,
                                         const CandidateStore* store = nullptr);

std::vector<SpanAnnotation> aggregate(const AnnotatedDocument& doc, const LogitMatrix& scores,
                                      const EntityVocabulary& vocab, const AggregationConfig& config,
                                      const CandidateStore* store = nullptr);

}  // namespace sublink
