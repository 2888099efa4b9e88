#include "sublink/chunking.hpp"

#include <algorithm>

#include "sublink/error.hpp"

namespace sublink {

std::vector<Chunk> chunk_ranges(std::size_t token_count, const ChunkingConfig& config) {
  if (config.window <= config.overlap) {
    throw Error(ErrorKind::configuration, "chunk window " + std::to_string(config.window) +
                                              " must exceed overlap " + std::to_string(config.overlap));
  }
  std::vector<Chunk> chunks;
  for (std::size_t start = 0; start < token_count; start += config.stride()) {
    const std::size_t end = std::min(start + config.window, token_count);
    chunks.push_back({start, end, {}});
    if (end == token_count) break;
  }
  return chunks;
}

std::vector<Chunk> chunk(std::span<const SubwordToken> tokens, const ChunkingConfig& config) {
  auto chunks = chunk_ranges(tokens.size(), config);
  for (auto& c : chunks) c.tokens = tokens.subspan(c.token_start, c.size());
  return chunks;
}

LogitMatrix merge_chunk_scores(std::span<const Chunk> chunks, std::span<const LogitMatrix> per_chunk) {
  if (chunks.size() != per_chunk.size()) {
    throw Error(ErrorKind::shape, std::to_string(per_chunk.size()) + " score matrices for " +
                                      std::to_string(chunks.size()) + " chunks");
  }
  if (chunks.empty()) return {};
  std::size_t rows = 0;
  const std::size_t cols = per_chunk.front().cols();
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    if (per_chunk[c].rows() != chunks[c].size() || per_chunk[c].cols() != cols) {
      throw Error(ErrorKind::shape, "chunk " + std::to_string(c) + " scores are " +
                                        std::to_string(per_chunk[c].rows()) + "x" +
                                        std::to_string(per_chunk[c].cols()) + ", expected " +
                                        std::to_string(chunks[c].size()) + "x" + std::to_string(cols));
    }
    rows = std::max(rows, chunks[c].token_end);
  }

  LogitMatrix merged(rows, cols);
  std::vector<std::size_t> cover(rows, 0);
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    for (std::size_t r = 0; r < chunks[c].size(); ++r) {
      const std::size_t token = chunks[c].token_start + r;
      auto dst = merged.row(token);
      const auto src = per_chunk[c].row(r);
      if (cover[token] == 0) {
        std::copy(src.begin(), src.end(), dst.begin());
      } else {
        for (std::size_t k = 0; k < cols; ++k) dst[k] += src[k];
      }
      ++cover[token];
    }
  }
  for (std::size_t token = 0; token < rows; ++token) {
    if (cover[token] == 0) {
      throw Error(ErrorKind::shape, "token " + std::to_string(token) + " not covered by any chunk");
    }
    if (cover[token] > 1) {
      const double n = static_cast<double>(cover[token]);
      for (double& v : merged.row(token)) v /= n;
    }
  }
  return merged;
}

}  // namespace sublink
