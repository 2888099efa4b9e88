#include "sublink/providers.hpp"

#include <cmath>
#include <random>

#include "sublink/error.hpp"
#include "sublink/head.hpp"

namespace sublink {

std::string matrix_file_name(const std::string& doc_id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string name;
  for (unsigned char c : doc_id) {
    const bool safe = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                      c == '.' || c == '_' || c == '-';
    if (safe && !(name.empty() && c == '.')) {
      name.push_back(static_cast<char>(c));
    } else {
      name.push_back('%');
      name.push_back(kHex[c >> 4]);
      name.push_back(kHex[c & 0xF]);
    }
  }
  return name + ".splm";
}

namespace {

Matrix read_chunk_rows(const std::filesystem::path& path, const AnnotatedDocument& doc,
                       const Chunk& chunk, std::size_t expected_cols, const char* what) {
  const auto shape = read_matrix_shape(path);
  if (shape.rows != doc.tokens.size() || shape.cols != expected_cols) {
    throw Error(ErrorKind::shape, path.string() + ": " + what + " matrix is " + std::to_string(shape.rows) +
                                      "x" + std::to_string(shape.cols) + ", expected " +
                                      std::to_string(doc.tokens.size()) + "x" + std::to_string(expected_cols));
  }
  return read_matrix_rows(path, chunk.token_start, chunk.token_end);
}

}  // namespace

FileScoreProvider::FileScoreProvider(std::filesystem::path directory, std::size_t vocab_size)
    : directory_(std::move(directory)), vocab_size_(vocab_size) {
  if (!std::filesystem::is_directory(directory_)) {
    throw Error(ErrorKind::io, "logits directory " + directory_.string() + " does not exist");
  }
}

LogitMatrix FileScoreProvider::score(const AnnotatedDocument& doc, const Chunk& chunk) const {
  return LogitMatrix(read_chunk_rows(directory_ / matrix_file_name(doc.id), doc, chunk, vocab_size_, "logit"));
}

FileFeatureProvider::FileFeatureProvider(std::filesystem::path directory, std::size_t dim)
    : directory_(std::move(directory)), dim_(dim) {
  if (!std::filesystem::is_directory(directory_)) {
    throw Error(ErrorKind::io, "features directory " + directory_.string() + " does not exist");
  }
}

FeatureMatrix FileFeatureProvider::features(const AnnotatedDocument& doc, const Chunk& chunk) const {
  return FeatureMatrix(read_chunk_rows(directory_ / matrix_file_name(doc.id), doc, chunk, dim_, "feature"));
}

InMemoryFeatureProvider::InMemoryFeatureProvider(std::size_t dim,
                                                 std::unordered_map<std::string, FeatureMatrix> by_document)
    : dim_(dim), by_document_(std::move(by_document)) {
  for (const auto& [id, m] : by_document_) {
    if (m.dim() != dim_) throw Error(ErrorKind::shape, "features of " + id + " have the wrong dimension");
  }
}

FeatureMatrix InMemoryFeatureProvider::features(const AnnotatedDocument& doc, const Chunk& chunk) const {
  const auto it = by_document_.find(doc.id);
  if (it == by_document_.end()) throw Error(ErrorKind::io, "no features for document " + doc.id);
  const auto& m = it->second;
  if (m.rows() != doc.tokens.size()) {
    throw Error(ErrorKind::shape, "features of " + doc.id + " have " + std::to_string(m.rows()) +
                                      " rows for " + std::to_string(doc.tokens.size()) + " tokens");
  }
  FeatureMatrix out(chunk.size(), dim_);
  for (std::size_t r = 0; r < chunk.size(); ++r) {
    const auto src = m.row(chunk.token_start + r);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

HeadScoreProvider::HeadScoreProvider(std::shared_ptr<const FeatureProvider> features, HeadWeights weights)
    : features_(std::move(features)), weights_(std::move(weights)) {
  if (features_->dim() != weights_.dim()) {
    throw Error(ErrorKind::shape, "feature dimension " + std::to_string(features_->dim()) +
                                      " does not match head dimension " + std::to_string(weights_.dim()));
  }
}

LogitMatrix HeadScoreProvider::score(const AnnotatedDocument& doc, const Chunk& chunk) const {
  return project(features_->features(doc, chunk), weights_);
}

std::vector<std::size_t> token_gold_indices(const AnnotatedDocument& doc,
                                            const std::vector<SpanAnnotation>& gold,
                                            const EntityVocabulary& vocab) {
  const std::size_t o = vocab.require_o_index();
  std::vector<std::size_t> labels(doc.tokens.size(), o);
  for (const auto& span : gold) {
    const auto index = vocab.index_of(span.entity);
    if (!index) continue;
    for (std::size_t t = 0; t < doc.tokens.size(); ++t) {
      if (doc.tokens[t].start >= span.start && doc.tokens[t].end <= span.end) labels[t] = *index;
    }
  }
  return labels;
}

MockScoreProvider::MockScoreProvider(EntityVocabulary vocab, MockConfig config,
                                     std::unordered_map<std::string, std::vector<SpanAnnotation>> gold_by_text)
    : vocab_(std::move(vocab)),
      config_(config),
      o_index_(vocab_.require_o_index()),
      gold_by_text_(std::move(gold_by_text)) {
  if (!(config_.gold_probability > 0.0 && config_.gold_probability < 1.0)) {
    throw Error(ErrorKind::configuration, "mock gold probability must lie in (0, 1)");
  }
  if (vocab_.size() < 2) throw Error(ErrorKind::configuration, "mock provider needs at least two entities");
}

namespace {

double logit(double p) { return std::log(p / (1.0 - p)); }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

LogitMatrix MockScoreProvider::score(const AnnotatedDocument& doc, const Chunk& chunk) const {
  const std::vector<SpanAnnotation>* gold = &doc.gold;
  if (gold->empty()) {
    if (const auto it = gold_by_text_.find(doc.text); it != gold_by_text_.end()) gold = &it->second;
  }
  const auto labels = token_gold_indices(doc, *gold, vocab_);
  const double q = config_.gold_probability;
  const double hit = logit(q);
  const double miss = logit((1.0 - q) / static_cast<double>(vocab_.size() - 1));

  LogitMatrix scores(chunk.size(), vocab_.size(), miss);
  const std::uint64_t doc_seed = config_.seed ^ fnv1a(doc.id);
  for (std::size_t r = 0; r < chunk.size(); ++r) {
    const std::size_t token = chunk.token_start + r;
    auto row = scores.row(r);
    row[labels[token]] = hit;
    if (config_.noise > 0.0) {
      // Seeded per token so chunk boundaries do not change the noise.
      std::mt19937_64 rng(doc_seed + 0x9E3779B97F4A7C15ULL * (token + 1));
      std::normal_distribution<double> normal(0.0, config_.noise);
      for (double& v : row) v += normal(rng);
    }
  }
  return scores;
}

}  // namespace sublink
