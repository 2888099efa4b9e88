#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "sublink/chunking.hpp"
#include "sublink/matrix.hpp"
#include "sublink/types.hpp"
#include "sublink/vocabulary.hpp"

namespace sublink {

// Produces per-subword entity scores for one chunk of a document. All
// providers are safe for concurrent const use.
class ScoreProvider {
 public:
  virtual ~ScoreProvider() = default;
  virtual std::size_t vocab_size() const = 0;
  // Rows equal chunk.size(), columns equal vocab_size().
  virtual LogitMatrix score(const AnnotatedDocument& doc, const Chunk& chunk) const = 0;
};

// Produces encoder features for one chunk of a document.
class FeatureProvider {
 public:
  virtual ~FeatureProvider() = default;
  virtual std::size_t dim() const = 0;
  virtual FeatureMatrix features(const AnnotatedDocument& doc, const Chunk& chunk) const = 0;
};

// File name used for a document's matrix: the id with characters outside
// [A-Za-z0-9._-] percent-encoded, plus ".splm".
std::string matrix_file_name(const std::string& doc_id);

// Document-level matrices stored one per file under a directory.
class FileScoreProvider final : public ScoreProvider {
 public:
  FileScoreProvider(std::filesystem::path directory, std::size_t vocab_size);
  std::size_t vocab_size() const override { return vocab_size_; }
  LogitMatrix score(const AnnotatedDocument& doc, const Chunk& chunk) const override;

 private:
  std::filesystem::path directory_;
  std::size_t vocab_size_;
};

class FileFeatureProvider final : public FeatureProvider {
 public:
  FileFeatureProvider(std::filesystem::path directory, std::size_t dim);
  std::size_t dim() const override { return dim_; }
  FeatureMatrix features(const AnnotatedDocument& doc, const Chunk& chunk) const override;

 private:
  std::filesystem::path directory_;
  std::size_t dim_;
};

class InMemoryFeatureProvider final : public FeatureProvider {
 public:
  InMemoryFeatureProvider(std::size_t dim, std::unordered_map<std::string, FeatureMatrix> by_document);
  std::size_t dim() const override { return dim_; }
  FeatureMatrix features(const AnnotatedDocument& doc, const Chunk& chunk) const override;

 private:
  std::size_t dim_;
  std::unordered_map<std::string, FeatureMatrix> by_document_;
};

// Features composed with head weights.
class HeadScoreProvider final : public ScoreProvider {
 public:
  HeadScoreProvider(std::shared_ptr<const FeatureProvider> features, HeadWeights weights);
  std::size_t vocab_size() const override { return weights_.vocab_size(); }
  LogitMatrix score(const AnnotatedDocument& doc, const Chunk& chunk) const override;

 private:
  std::shared_ptr<const FeatureProvider> features_;
  HeadWeights weights_;
};

struct MockConfig {
  double gold_probability = 0.9;
  double noise = 0.0;  // standard deviation added to every raw score
  std::uint64_t seed = 0;
};

// Synthesizes scores from gold annotations: the gold entity of a token (O
// outside gold spans) scores logit(q) and the remaining mass is spread
// uniformly. Documents without gold fall back to an oracle keyed by text.
class MockScoreProvider final : public ScoreProvider {
 public:
  MockScoreProvider(EntityVocabulary vocab, MockConfig config,
                    std::unordered_map<std::string, std::vector<SpanAnnotation>> gold_by_text = {});
  std::size_t vocab_size() const override { return vocab_.size(); }
  LogitMatrix score(const AnnotatedDocument& doc, const Chunk& chunk) const override;

 private:
  EntityVocabulary vocab_;
  MockConfig config_;
  std::size_t o_index_;
  std::unordered_map<std::string, std::vector<SpanAnnotation>> gold_by_text_;
};

// Per-token gold column: the entity of the gold span containing the token,
// O otherwise (also for entities outside the vocabulary).
std::vector<std::size_t> token_gold_indices(const AnnotatedDocument& doc,
                                            const std::vector<SpanAnnotation>& gold,
                                            const EntityVocabulary& vocab);

}  // namespace sublink
