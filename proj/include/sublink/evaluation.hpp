#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sublink/candidates.hpp"
#include "sublink/types.hpp"
#include "sublink/vocabulary.hpp"

namespace sublink {

enum class MatchMode { entity_linking, mention_detection };

struct MatchCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  MatchCounts& operator+=(const MatchCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

struct DocumentCounts {
  std::string doc_id;
  MatchCounts counts;
};

struct MatchReport {
  MatchCounts counts;
  double micro_p = 0.0;
  double micro_r = 0.0;
  double micro_f1 = 0.0;
  std::vector<DocumentCounts> per_document;
};

// Precision, recall and F1 with zero for empty denominators.
void fill_micro_scores(MatchReport& report);

struct EvaluationOptions {
  // Gold spans whose entity falls outside this vocabulary are not counted.
  // Without a vocabulary only O spans are excluded.
  const EntityVocabulary* vocabulary = nullptr;
  // Applied to gold entities before the vocabulary check.
  const RedirectTable* redirects = nullptr;
};

// Strong matching: exact (start, end, entity) for EL, exact (start, end) for
// MD. Predictions are deduplicated, counts pooled over documents.
// Predicted documents are aligned to gold by id; an id missing from gold is
// an Error(alignment).
MatchReport score(const std::vector<AnnotatedDocument>& gold, const std::vector<AnnotatedDocument>& predicted,
                  MatchMode mode, const EvaluationOptions& options = {});

inline MatchReport score_el(const std::vector<AnnotatedDocument>& gold,
                            const std::vector<AnnotatedDocument>& predicted, const EvaluationOptions& options = {}) {
  return score(gold, predicted, MatchMode::entity_linking, options);
}

inline MatchReport score_md(const std::vector<AnnotatedDocument>& gold,
                            const std::vector<AnnotatedDocument>& predicted, const EvaluationOptions& options = {}) {
  return score(gold, predicted, MatchMode::mention_detection, options);
}

// Micro F1 over non-O token labels.
double subword_f1(std::span<const std::size_t> gold, std::span<const std::size_t> predicted, std::size_t o_index);

// One JSON record: {mode, tp, fp, fn, precision, recall, f1, documents}.
std::string format_report_record(const MatchReport& report, MatchMode mode);
std::string format_report_table(const MatchReport& report, MatchMode mode);

}  // namespace sublink
