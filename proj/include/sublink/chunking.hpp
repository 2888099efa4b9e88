#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sublink/matrix.hpp"
#include "sublink/types.hpp"

namespace sublink {

inline constexpr std::size_t kDefaultWindow = 254;
inline constexpr std::size_t kDefaultOverlap = 20;

struct ChunkingConfig {
  std::size_t window = kDefaultWindow;
  std::size_t overlap = kDefaultOverlap;

  std::size_t stride() const { return window - overlap; }
};

// Token range [token_start, token_end) of a document plus a view of it.
struct Chunk {
  std::size_t token_start = 0;
  std::size_t token_end = 0;
  std::span<const SubwordToken> tokens;

  std::size_t size() const { return token_end - token_start; }
};

// Chunk k starts at k * stride; the last chunk is emitted short. Throws
// Error(configuration) when window <= overlap.
std::vector<Chunk> chunk(std::span<const SubwordToken> tokens, const ChunkingConfig& config = {});

// Token-index-only variant for callers without token objects.
std::vector<Chunk> chunk_ranges(std::size_t token_count, const ChunkingConfig& config = {});

// Rows of tokens covered by several chunks are averaged. Throws
// Error(shape) when a matrix does not match its chunk.
LogitMatrix merge_chunk_scores(std::span<const Chunk> chunks, std::span<const LogitMatrix> per_chunk);

}  // namespace sublink
