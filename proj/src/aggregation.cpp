#include "sublink/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "sublink/error.hpp"
#include "sublink/head.hpp"
#include "sublink/utf8.hpp"

namespace sublink {

std::vector<SubwordPredictions> topk(const LogitMatrix& scores, std::size_t k, Activation activation) {
  if (k == 0 || k > scores.vocab_size()) {
    throw Error(ErrorKind::configuration, "top-k of " + std::to_string(k) + " over " +
                                              std::to_string(scores.vocab_size()) + " entities");
  }
  std::vector<SubwordPredictions> out(scores.rows());
  std::vector<std::size_t> order(scores.cols());
  // Small k: one pass keeping a sorted buffer, cheaper than nth_element over
  // a full index vector when the vocabulary is large.
  const bool bounded = k <= 64 && k * 8 < scores.cols();
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    const auto row = scores.row(r);
    const auto before = [&](std::size_t a, std::size_t b) { return row[a] > row[b] || (row[a] == row[b] && a < b); };
    const auto kth = order.begin() + static_cast<std::ptrdiff_t>(k);
    if (bounded) {
      std::size_t filled = 0;
      for (std::size_t c = 0; c < row.size(); ++c) {
        // Columns arrive in index order, so ties never displace earlier entries.
        if (filled == k && !(row[c] > row[order[k - 1]])) continue;
        std::size_t pos = filled < k ? filled++ : k - 1;
        while (pos > 0 && row[c] > row[order[pos - 1]]) {
          order[pos] = order[pos - 1];
          --pos;
        }
        order[pos] = c;
      }
    } else {
      std::iota(order.begin(), order.end(), 0);
      if (k < order.size()) std::nth_element(order.begin(), kth - 1, order.end(), before);
      std::sort(order.begin(), kth, before);
    }

    double log_norm = 0.0;
    if (activation == Activation::softmax) {
      const double max = row[order.front()];
      double sum = 0.0;
      for (double v : row) sum += std::exp(v - max);
      log_norm = max + std::log(sum);
    }
    auto& preds = out[r];
    preds.reserve(k);
    for (auto it = order.begin(); it != kth; ++it) {
      const double p = activation == Activation::sigmoid ? sigmoid(row[*it]) : std::exp(row[*it] - log_norm);
      preds.push_back({*it, p});
    }
  }
  return out;
}

std::size_t top_entity(std::span<const EntityScore> scores) {
  const EntityScore* best = nullptr;
  for (const auto& s : scores) {
    if (best == nullptr || s.probability > best->probability ||
        (s.probability == best->probability && s.entity < best->entity)) {
      best = &s;
    }
  }
  if (best == nullptr) throw Error(ErrorKind::shape, "no entity scores to choose from");
  return best->entity;
}

namespace {

// Mean over `count` distributions given as entity-sorted lists; absent
// entries count as zero.
std::vector<EntityScore> mean_of(const std::vector<const std::vector<EntityScore>*>& lists) {
  std::vector<EntityScore> merged;
  for (const auto* list : lists) merged.insert(merged.end(), list->begin(), list->end());
  std::stable_sort(merged.begin(), merged.end(),
                   [](const EntityScore& a, const EntityScore& b) { return a.entity < b.entity; });
  std::vector<EntityScore> out;
  for (const auto& s : merged) {
    if (!out.empty() && out.back().entity == s.entity) {
      out.back().probability += s.probability;
    } else {
      out.push_back(s);
    }
  }
  const double n = static_cast<double>(lists.size());
  for (auto& s : out) s.probability /= n;
  return out;
}

}  // namespace

WordAnnotation word_distribution(std::span<const SubwordPredictions> subwords) {
  if (subwords.empty()) throw Error(ErrorKind::shape, "word without subwords");
  std::vector<std::vector<EntityScore>> sorted;
  sorted.reserve(subwords.size());
  std::vector<const std::vector<EntityScore>*> lists;
  for (const auto& s : subwords) {
    auto& copy = sorted.emplace_back(s.begin(), s.end());
    std::sort(copy.begin(), copy.end(), [](const EntityScore& a, const EntityScore& b) { return a.entity < b.entity; });
  }
  for (const auto& s : sorted) lists.push_back(&s);
  WordAnnotation word;
  word.entity_scores = mean_of(lists);
  word.top_entity = top_entity(word.entity_scores);
  return word;
}

double PhraseAnnotation::top_probability() const {
  for (const auto& s : entity_scores) {
    if (s.entity == top_entity) return s.probability;
  }
  return 0.0;
}

std::vector<PhraseAnnotation> join_spans(std::span<const WordAnnotation> words) {
  std::vector<PhraseAnnotation> phrases;
  std::size_t i = 0;
  while (i < words.size()) {
    std::size_t j = i + 1;
    while (j < words.size() && words[j].top_entity == words[i].top_entity) ++j;
    PhraseAnnotation p;
    p.char_start = words[i].char_start;
    p.char_end = words[j - 1].char_end;
    p.token_begin = words[i].token_begin;
    p.token_end = words[j - 1].token_end;
    p.word_begin = words[i].word_index;
    p.word_end = words[j - 1].word_index + 1;
    if (j - i == 1) {
      p.entity_scores = words[i].entity_scores;
    } else {
      std::vector<const std::vector<EntityScore>*> lists;
      for (std::size_t w = i; w < j; ++w) lists.push_back(&words[w].entity_scores);
      p.entity_scores = mean_of(lists);
    }
    p.top_entity = words[i].top_entity;
    phrases.push_back(std::move(p));
    i = j;
  }
  return phrases;
}

PhraseAnnotation filter_by_candidates(PhraseAnnotation phrase, std::string_view surface, const CandidateStore& store,
                                      const EntityVocabulary& vocab, const OccurrenceKey* occurrence) {
  const auto candidates = store.lookup(surface, occurrence);
  if (!candidates) return phrase;
  const std::unordered_set<std::string_view> allowed(candidates->begin(), candidates->end());
  std::erase_if(phrase.entity_scores,
                [&](const EntityScore& s) { return !allowed.contains(vocab.id_of(s.entity)); });
  if (phrase.entity_scores.empty()) {
    phrase.top_entity = vocab.require_o_index();
  } else {
    phrase.top_entity = top_entity(phrase.entity_scores);
  }
  return phrase;
}

std::vector<PhraseAnnotation> postprocess(std::vector<PhraseAnnotation> phrases, std::span<const SubwordToken> tokens,
                                          const Lexicon& lexicon, std::size_t o_index) {
  for (auto& p : phrases) {
    if (p.top_entity == o_index) continue;
    if (p.token_end - p.token_begin == 1 && lexicon.is_punctuation(tokens[p.token_begin].surface)) {
      p.top_entity = o_index;
      continue;
    }
    if (p.word_end - p.word_begin == 1) {
      std::string word;
      for (std::size_t t = p.token_begin; t < p.token_end; ++t) word += tokens[t].surface;
      if (lexicon.is_function_word(word)) p.top_entity = o_index;
    }
  }
  std::erase_if(phrases, [&](const PhraseAnnotation& p) { return p.top_entity == o_index; });
  return phrases;
}

std::vector<ScoredSpan> aggregate_scored(const AnnotatedDocument& doc, const LogitMatrix& scores,
                                         const EntityVocabulary& vocab, const AggregationConfig& config,
                                         const CandidateStore* store) {
  const auto& tokens = doc.tokens;
  if (scores.rows() != tokens.size()) {
    throw Error(ErrorKind::shape, "document " + doc.id + ": " + std::to_string(scores.rows()) + " score rows for " +
                                      std::to_string(tokens.size()) + " tokens");
  }
  if (scores.vocab_size() != vocab.size()) {
    throw Error(ErrorKind::shape, "document " + doc.id + ": scores have " + std::to_string(scores.vocab_size()) +
                                      " columns for a vocabulary of " + std::to_string(vocab.size()));
  }
  if (config.candidate_policy != CandidatePolicy::none && store == nullptr) {
    throw Error(ErrorKind::configuration, "candidate filtering requested without a candidate store");
  }
  const std::size_t o_index = vocab.require_o_index();
  if (tokens.empty()) return {};

  const auto predictions = topk(scores, config.k, config.activation);
  std::vector<WordAnnotation> words;
  std::size_t t = 0;
  while (t < tokens.size()) {
    std::size_t end = t + 1;
    while (end < tokens.size() && tokens[end].word_index == tokens[t].word_index) ++end;
    auto word = word_distribution(std::span(predictions).subspan(t, end - t));
    word.word_index = tokens[t].word_index;
    word.char_start = tokens[t].start;
    word.char_end = tokens[end - 1].end;
    word.token_begin = t;
    word.token_end = end;
    words.push_back(std::move(word));
    t = end;
  }

  auto phrases = join_spans(words);
  if (config.candidate_policy != CandidatePolicy::none) {
    const std::u32string text = utf8::decode(doc.text);
    for (auto& p : phrases) {
      if (p.top_entity == o_index) continue;
      const auto surface = utf8::encode(std::u32string_view(text).substr(p.char_start, p.char_end - p.char_start));
      const OccurrenceKey occurrence{doc.id, p.char_start, p.char_end};
      p = filter_by_candidates(std::move(p), surface, *store, vocab,
                               config.candidate_policy == CandidatePolicy::context_aware ? &occurrence : nullptr);
    }
  }
  phrases = postprocess(std::move(phrases), tokens, config.lexicon, o_index);

  std::vector<ScoredSpan> out;
  out.reserve(phrases.size());
  for (const auto& p : phrases) {
    out.push_back({{p.char_start, p.char_end, vocab.id_of(p.top_entity)}, p.top_probability()});
  }
  return out;
}

std::vector<SpanAnnotation> aggregate(const AnnotatedDocument& doc, const LogitMatrix& scores,
                                      const EntityVocabulary& vocab, const AggregationConfig& config,
                                      const CandidateStore* store) {
  std::vector<SpanAnnotation> out;
  for (auto& s : aggregate_scored(doc, scores, vocab, config, store)) out.push_back(std::move(s.span));
  return out;
}

}  // namespace sublink
