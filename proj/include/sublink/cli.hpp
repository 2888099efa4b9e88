#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "sublink/pipeline.hpp"

namespace sublink::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitInput = 2;

// Everything needed to assemble a Linker. Every option can also be given
// as `key = value` in the file passed to --config.
struct PipelineOptions {
  std::string vocab;
  std::string provider = "mock";  // mock | file | head
  std::string logits_dir;
  std::string features_dir;
  std::string weights;
  std::string tokenizer_mode = "agnostic";  // agnostic | aware
  std::size_t window = kDefaultWindow;
  std::size_t overlap = kDefaultOverlap;
  std::size_t top_k = 10;
  std::string activation = "sigmoid";  // sigmoid | softmax
  std::string candidate_policy = "none";  // none | agnostic | aware
  std::string candidates;
  std::string candidate_kind = "agnostic";
  bool case_insensitive = false;
  std::string stoplist;
  std::string redirects;
  double mock_q = 0.9;
  double mock_noise = 0.0;
  std::string mock_gold;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

std::shared_ptr<const Linker> build_linker(const PipelineOptions& options);

struct LinkStats {
  std::size_t documents = 0;
  std::size_t records = 0;
  double seconds = 0.0;
  double documents_per_second() const { return seconds > 0 ? static_cast<double>(documents) / seconds : 0.0; }
};

// Links every document of the corpus and writes annotation records to
// `output` in input order. Throws sublink::Error.
LinkStats link_corpus(const PipelineOptions& options, const std::filesystem::path& corpus,
                      const std::filesystem::path& output);

struct TrainOptions {
  std::string corpus;
  std::string validation;
  std::string out;
  std::string init_weights;
  std::size_t epochs = 3;
  double learning_rate = 0.01;
  std::optional<std::size_t> quota;
  std::size_t hard_per_row = 10;
  std::size_t patience = 2;
  double init_scale = 0.01;
};

// Runs the command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sublink::cli
