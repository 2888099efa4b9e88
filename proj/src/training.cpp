#include "sublink/training.hpp"

#include <cmath>
#include <random>

#include "sublink/error.hpp"
#include "sublink/evaluation.hpp"

namespace sublink {

HeadWeights initial_weights(std::size_t dim, std::size_t vocab_size, double scale, std::uint64_t seed) {
  HeadWeights w(dim, vocab_size);
  if (scale <= 0.0) return w;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  for (double& v : w.values()) v = normal(rng);
  return w;
}

namespace {

std::size_t argmax(std::span<const double> row) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < row.size(); ++j) {
    if (row[j] > row[best]) best = j;
  }
  return best;
}

// Sparse Adam: moments and parameters move only for the given columns.
class SparseAdam {
 public:
  SparseAdam(std::size_t rows, std::size_t cols, double lr) : m_(rows, cols), v_(rows, cols), lr_(lr) {}

  void step(HeadWeights& w, const HeadWeights& grad, std::span<const std::size_t> columns) {
    ++t_;
    const double bias1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double bias2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    for (std::size_t r = 0; r < w.rows(); ++r) {
      for (std::size_t c : columns) {
        const double g = grad(r, c);
        double& m = m_(r, c);
        double& v = v_(r, c);
        m = kBeta1 * m + (1.0 - kBeta1) * g;
        v = kBeta2 * v + (1.0 - kBeta2) * g * g;
        w(r, c) -= lr_ * (m / bias1) / (std::sqrt(v / bias2) + kEpsilon);
      }
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;
  Matrix m_;
  Matrix v_;
  double lr_;
  std::size_t t_ = 0;
};

}  // namespace

double validation_subword_f1(const FeatureProvider& provider, const std::vector<AnnotatedDocument>& docs,
                             const EntityVocabulary& vocab, const HeadWeights& weights,
                             const ChunkingConfig& chunking) {
  std::vector<std::size_t> gold;
  std::vector<std::size_t> predicted;
  for (const auto& doc : docs) {
    const auto labels = token_gold_indices(doc, doc.gold, vocab);
    gold.insert(gold.end(), labels.begin(), labels.end());
    const auto chunks = chunk(doc.tokens, chunking);
    std::vector<LogitMatrix> scores;
    scores.reserve(chunks.size());
    for (const auto& c : chunks) scores.push_back(project(provider.features(doc, c), weights));
    const auto merged = merge_chunk_scores(chunks, scores);
    for (std::size_t r = 0; r < merged.rows(); ++r) predicted.push_back(argmax(merged.row(r)));
  }
  return subword_f1(gold, predicted, vocab.require_o_index());
}

TrainingResult train_head(const FeatureProvider& provider, const std::vector<AnnotatedDocument>& corpus,
                          const EntityVocabulary& vocab, const TrainingConfig& config,
                          const std::vector<AnnotatedDocument>* validation, const HeadWeights* initial,
                          const EpochCallback& on_epoch) {
  if (corpus.empty()) throw Error(ErrorKind::configuration, "training corpus is empty");
  if (config.learning_rate <= 0.0) throw Error(ErrorKind::configuration, "learning rate must be positive");
  TrainingResult result;
  result.weights = initial ? *initial : initial_weights(provider.dim(), vocab.size(), config.init_scale, config.seed);
  if (result.weights.dim() != provider.dim() || result.weights.vocab_size() != vocab.size()) {
    throw Error(ErrorKind::shape, "initial weights are " + std::to_string(result.weights.dim()) + "x" +
                                      std::to_string(result.weights.vocab_size()) + ", expected " +
                                      std::to_string(provider.dim()) + "x" + std::to_string(vocab.size()));
  }
  const auto& validation_docs = validation && !validation->empty() ? *validation : corpus;

  SparseAdam optimizer(result.weights.dim(), result.weights.vocab_size(), config.learning_rate);
  double best_f1 = -1.0;
  std::size_t stale = 0;
  std::size_t step = 0;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::size_t epoch_steps = 0;
    for (const auto& doc : corpus) {
      const auto labels = token_gold_indices(doc, doc.gold, vocab);
      for (const auto& c : chunk(doc.tokens, config.chunking)) {
        TrainingBatch batch;
        batch.features = provider.features(doc, c);
        batch.gold_indices.assign(labels.begin() + static_cast<std::ptrdiff_t>(c.token_start),
                                  labels.begin() + static_cast<std::ptrdiff_t>(c.token_end));
        const auto scores = project(batch.features, result.weights);

        MiningConfig mining;
        mining.hard_per_row = config.hard_per_row;
        mining.seed = config.seed + step;
        if (config.quota) {
          mining.quota = *config.quota;
        } else {
          std::vector<bool> seen(vocab.size(), false);
          std::size_t distinct = 0;
          for (std::size_t g : batch.gold_indices) {
            if (!seen[g]) {
              seen[g] = true;
              ++distinct;
            }
          }
          mining.quota = std::min(kInDomainNegativeQuota, vocab.size() - distinct);
        }
        const auto selected = mine_hard_negatives(scores, batch.gold_indices, mining);
        batch.examples = selected.columns;

        const auto loss = selection_loss(batch, scores, /*with_gradient=*/true);
        ++step;
        if (!std::isfinite(loss.value)) {
          throw Error(ErrorKind::divergence, "non-finite loss at step " + std::to_string(step) + " (epoch " +
                                                 std::to_string(epoch) + ", document " + doc.id + ")");
        }
        result.step_losses.push_back(loss.value);
        epoch_loss += loss.value;
        ++epoch_steps;
        optimizer.step(result.weights, *loss.gradient, selected.columns);
      }
    }

    EpochReport report;
    report.epoch = epoch;
    report.mean_loss = epoch_steps == 0 ? 0.0 : epoch_loss / static_cast<double>(epoch_steps);
    report.validation_f1 = validation_subword_f1(provider, validation_docs, vocab, result.weights, config.chunking);
    report.improved = report.validation_f1 > best_f1;
    if (report.improved) {
      best_f1 = report.validation_f1;
      stale = 0;
    } else {
      ++stale;
    }
    result.epochs.push_back(report);
    if (on_epoch) on_epoch(report);
    if (config.patience > 0 && stale >= config.patience) {
      result.stopped_early = true;
      break;
    }
  }
  return result;
}

}  // namespace sublink
