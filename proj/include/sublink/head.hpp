#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sublink/matrix.hpp"
#include "sublink/vocabulary.hpp"

namespace sublink {

// Negatives per batch when fine-tuning on the in-domain set and during
// general fine-tuning respectively.
inline constexpr std::size_t kInDomainNegativeQuota = 5000;
inline constexpr std::size_t kGeneralNegativeQuota = 10000;

// Score given to masked-out columns; finite so LogitMatrix stays finite.
inline constexpr double kMaskedScore = -1e30;

// scores = features * weights, no normalization.
LogitMatrix project(const FeatureMatrix& features, const HeadWeights& weights);

struct MiningConfig {
  std::size_t quota = kInDomainNegativeQuota;
  // Each row proposes this many of its highest-scoring incorrect columns.
  std::size_t hard_per_row = 10;
  std::uint64_t seed = 0;
};

// The selected example set for one batch. `columns` is the sorted union of
// positives and negatives.
struct SelectedExamples {
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  std::vector<std::size_t> columns;
};

// Gold columns of the batch, plus hard negatives pooled across rows (ranked
// by their best score in the batch, ties to the lower column), plus a
// seeded uniform fill so that exactly `quota` negatives are returned.
// Throws Error(infeasible_quota) when fewer than `quota` non-gold columns
// exist.
SelectedExamples mine_hard_negatives(const LogitMatrix& batch_scores,
                                     std::span<const std::size_t> gold_indices,
                                     const MiningConfig& config);

struct TrainingBatch {
  FeatureMatrix features;
  std::vector<std::size_t> gold_indices;  // one per feature row
  std::vector<std::size_t> examples;      // selected columns, N = size()
};

struct LossReport {
  double value = 0.0;
  std::vector<double> per_row;
  std::optional<HeadWeights> gradient;
};

// Binary cross-entropy with logits over the selected columns: for row i,
// L_i = -(1/N) sum_j [a_ij log s(p_ij) + (1 - a_ij) log(1 - s(p_ij))] where
// a_ij marks the row's gold column. `value` is the mean of L_i. The
// gradient with respect to W is filled when `with_gradient` is set and the
// batch carries features matching `scores`.
LossReport selection_loss(const TrainingBatch& batch, const LogitMatrix& scores, bool with_gradient = false);

// -log s(p) and -log(1 - s(p)) in overflow-safe form.
double softplus(double x);
double sigmoid(double x);

// Columns of `subset`, in subset order.
HeadWeights shrink_head(const HeadWeights& weights, const EntityVocabulary& vocab,
                        const EntityVocabulary& subset);

// Same width as `scores`; columns outside `subset` are set to kMaskedScore.
LogitMatrix mask_scores(const LogitMatrix& scores, const EntityVocabulary& vocab,
                        const EntityVocabulary& subset);

// Columns of `subset` in subset order, taken from full-vocabulary scores.
LogitMatrix select_columns(const LogitMatrix& scores, const EntityVocabulary& vocab,
                           const EntityVocabulary& subset);

}  // namespace sublink
