#include "sublink/head.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <random>

#include "sublink/error.hpp"

namespace sublink {

LogitMatrix project(const FeatureMatrix& features, const HeadWeights& weights) {
  if (features.dim() != weights.dim()) {
    throw Error(ErrorKind::shape, "feature dimension " + std::to_string(features.dim()) +
                                      " does not match head dimension " + std::to_string(weights.dim()));
  }
  LogitMatrix scores(features.rows(), weights.vocab_size());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    auto out = scores.row(i);
    const auto h = features.row(i);
    for (std::size_t k = 0; k < h.size(); ++k) {
      const double hk = h[k];
      if (hk == 0.0) continue;
      const auto w = weights.row(k);
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += hk * w[j];
    }
  }
  return scores;
}

SelectedExamples mine_hard_negatives(const LogitMatrix& batch_scores,
                                     std::span<const std::size_t> gold_indices,
                                     const MiningConfig& config) {
  const std::size_t kb = batch_scores.vocab_size();
  if (gold_indices.size() != batch_scores.rows()) {
    throw Error(ErrorKind::shape, std::to_string(gold_indices.size()) + " gold indices for " +
                                      std::to_string(batch_scores.rows()) + " score rows");
  }
  std::vector<bool> is_gold(kb, false);
  SelectedExamples out;
  for (std::size_t g : gold_indices) {
    if (g >= kb) throw Error(ErrorKind::shape, "gold index " + std::to_string(g) + " outside vocabulary");
    if (!is_gold[g]) out.positives.push_back(g);
    is_gold[g] = true;
  }
  std::sort(out.positives.begin(), out.positives.end());
  const std::size_t available = kb - out.positives.size();
  if (config.quota > available) {
    throw Error(ErrorKind::infeasible_quota, "negative quota " + std::to_string(config.quota) +
                                                 " exceeds the " + std::to_string(available) +
                                                 " non-gold columns");
  }

  // Per-row proposals, then a batch-level ranking by best score.
  std::vector<double> best(kb, -std::numeric_limits<double>::infinity());
  std::vector<bool> proposed(kb, false);
  std::vector<std::size_t> order;
  for (std::size_t r = 0; r < batch_scores.rows(); ++r) {
    const auto row = batch_scores.row(r);
    std::vector<std::size_t> cols;
    cols.reserve(available);
    for (std::size_t c = 0; c < kb; ++c) {
      if (!is_gold[c]) cols.push_back(c);
    }
    const std::size_t take = std::min(config.hard_per_row, cols.size());
    const auto by_score = [&](std::size_t a, std::size_t b) {
      return row[a] > row[b] || (row[a] == row[b] && a < b);
    };
    std::partial_sort(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(take), cols.end(), by_score);
    for (std::size_t t = 0; t < take; ++t) {
      const std::size_t c = cols[t];
      best[c] = std::max(best[c], row[c]);
      if (!proposed[c]) order.push_back(c);
      proposed[c] = true;
    }
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return best[a] > best[b] || (best[a] == best[b] && a < b);
  });
  if (order.size() > config.quota) order.resize(config.quota);

  std::vector<bool> taken = is_gold;
  for (std::size_t c : order) taken[c] = true;
  out.negatives = order;

  const std::size_t missing = config.quota - out.negatives.size();
  if (missing > 0) {
    std::vector<std::size_t> pool;
    pool.reserve(kb);
    for (std::size_t c = 0; c < kb; ++c) {
      if (!taken[c]) pool.push_back(c);
    }
    std::mt19937_64 rng(config.seed);
    std::sample(pool.begin(), pool.end(), std::back_inserter(out.negatives), missing, rng);
  }
  std::sort(out.negatives.begin(), out.negatives.end());

  out.columns = out.positives;
  out.columns.insert(out.columns.end(), out.negatives.begin(), out.negatives.end());
  std::sort(out.columns.begin(), out.columns.end());
  return out;
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

LossReport selection_loss(const TrainingBatch& batch, const LogitMatrix& scores, bool with_gradient) {
  const std::size_t n = scores.rows();
  const std::size_t big_n = batch.examples.size();
  if (big_n == 0) throw Error(ErrorKind::degenerate_batch, "no selected examples (N = 0)");
  if (n == 0) throw Error(ErrorKind::degenerate_batch, "batch has no rows");
  if (batch.gold_indices.size() != n) {
    throw Error(ErrorKind::shape, std::to_string(batch.gold_indices.size()) + " gold indices for " +
                                      std::to_string(n) + " score rows");
  }
  for (std::size_t c : batch.examples) {
    if (c >= scores.cols()) throw Error(ErrorKind::shape, "selected column " + std::to_string(c) + " outside scores");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto hits = std::count(batch.examples.begin(), batch.examples.end(), batch.gold_indices[i]);
    if (hits != 1) {
      throw Error(ErrorKind::degenerate_batch, "row " + std::to_string(i) + ": gold column appears " +
                                                   std::to_string(hits) + " times among selected examples");
    }
  }

  const bool gradient = with_gradient && batch.features.rows() == n;
  if (with_gradient && !gradient) {
    throw Error(ErrorKind::shape, "gradient requested but batch features do not match the scores");
  }

  LossReport report;
  report.per_row.resize(n);
  if (gradient) report.gradient = HeadWeights(batch.features.dim(), scores.cols());
  const double inv_n = 1.0 / static_cast<double>(big_n);
  const double inv_rows = 1.0 / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = scores.row(i);
    double sum = 0.0;
    for (std::size_t c : batch.examples) {
      const bool positive = c == batch.gold_indices[i];
      sum += positive ? softplus(-p[c]) : softplus(p[c]);
      if (gradient) {
        const double coeff = (sigmoid(p[c]) - (positive ? 1.0 : 0.0)) * inv_n * inv_rows;
        const auto h = batch.features.row(i);
        for (std::size_t k = 0; k < h.size(); ++k) (*report.gradient)(k, c) += coeff * h[k];
      }
    }
    report.per_row[i] = sum * inv_n;
    total += report.per_row[i];
  }
  report.value = total * inv_rows;
  return report;
}

namespace {

std::vector<std::size_t> subset_columns(const EntityVocabulary& vocab, const EntityVocabulary& subset,
                                        std::size_t width) {
  if (vocab.size() != width) {
    throw Error(ErrorKind::shape, "matrix has " + std::to_string(width) + " columns but the vocabulary has " +
                                      std::to_string(vocab.size()) + " entries");
  }
  std::vector<std::size_t> cols;
  cols.reserve(subset.size());
  for (const auto& id : subset.entries()) {
    const auto index = vocab.index_of(id);
    if (!index) throw Error(ErrorKind::unknown_entity, "subset entity '" + id + "' is not in the vocabulary");
    cols.push_back(*index);
  }
  return cols;
}

Matrix gather_columns(const Matrix& m, std::span<const std::size_t> cols) {
  Matrix out(m.rows(), cols.size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto src = m.row(r);
    auto dst = out.row(r);
    for (std::size_t j = 0; j < cols.size(); ++j) dst[j] = src[cols[j]];
  }
  return out;
}

}  // namespace

HeadWeights shrink_head(const HeadWeights& weights, const EntityVocabulary& vocab,
                        const EntityVocabulary& subset) {
  const auto cols = subset_columns(vocab, subset, weights.vocab_size());
  return HeadWeights(gather_columns(weights, cols));
}

LogitMatrix select_columns(const LogitMatrix& scores, const EntityVocabulary& vocab,
                           const EntityVocabulary& subset) {
  const auto cols = subset_columns(vocab, subset, scores.vocab_size());
  return LogitMatrix(gather_columns(scores, cols));
}

LogitMatrix mask_scores(const LogitMatrix& scores, const EntityVocabulary& vocab,
                        const EntityVocabulary& subset) {
  const auto cols = subset_columns(vocab, subset, scores.vocab_size());
  std::vector<bool> keep(scores.cols(), false);
  for (std::size_t c : cols) keep[c] = true;
  LogitMatrix masked = scores;
  for (std::size_t r = 0; r < masked.rows(); ++r) {
    auto row = masked.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!keep[c]) row[c] = kMaskedScore;
    }
  }
  return masked;
}

}  // namespace sublink
