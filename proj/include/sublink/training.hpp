#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sublink/chunking.hpp"
#include "sublink/head.hpp"
#include "sublink/providers.hpp"
#include "sublink/types.hpp"
#include "sublink/vocabulary.hpp"

namespace sublink {

inline constexpr double kHeadLearningRate = 0.01;
inline constexpr double kEncoderLearningRate = 5e-5;

struct TrainingConfig {
  double learning_rate = kHeadLearningRate;
  std::size_t epochs = 3;
  // Negatives per step. Unset means min(kInDomainNegativeQuota, columns
  // left after the batch's gold columns).
  std::optional<std::size_t> quota;
  std::size_t hard_per_row = 10;
  std::uint64_t seed = 0;
  // Early stopping after this many epochs without a validation subword-F1
  // improvement; 0 disables it.
  std::size_t patience = 2;
  // Standard deviation of the seeded normal initialization of W.
  double init_scale = 0.01;
  ChunkingConfig chunking;

  // Recorded for reference; the encoder is not trained here.
  double encoder_learning_rate = kEncoderLearningRate;
  std::size_t frozen_encoder_layers = 4;
  std::size_t gradient_accumulation = 4;
};

struct EpochReport {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double validation_f1 = 0.0;
  bool improved = false;
};

struct TrainingResult {
  HeadWeights weights;
  std::vector<double> step_losses;
  std::vector<EpochReport> epochs;
  bool stopped_early = false;
};

using EpochCallback = std::function<void(const EpochReport&)>;

// Trains W with Adam-style sparse updates on the selected columns, mining
// negatives at every step; each chunk of each document is one step. The
// encoder features stay fixed. Throws Error(divergence) on a non-finite
// loss.
TrainingResult train_head(const FeatureProvider& provider, const std::vector<AnnotatedDocument>& corpus,
                          const EntityVocabulary& vocab, const TrainingConfig& config,
                          const std::vector<AnnotatedDocument>* validation = nullptr,
                          const HeadWeights* initial = nullptr, const EpochCallback& on_epoch = {});

HeadWeights initial_weights(std::size_t dim, std::size_t vocab_size, double scale, std::uint64_t seed);

// Subword F1 of argmax predictions over a document set.
double validation_subword_f1(const FeatureProvider& provider, const std::vector<AnnotatedDocument>& docs,
                             const EntityVocabulary& vocab, const HeadWeights& weights,
                             const ChunkingConfig& chunking);

}  // namespace sublink
