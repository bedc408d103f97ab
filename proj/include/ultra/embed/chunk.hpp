#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "ultra/error.hpp"

namespace ultra::embed {

inline constexpr std::size_t kMaxTokens = 512;
inline constexpr std::size_t kChunkOverlap = 50;

struct Window {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const Window&, const Window&) = default;
};

struct ChunkParams {
  std::size_t l_max = kMaxTokens;
  std::size_t overlap = kChunkOverlap;
};

struct ChunkPlan {
  std::size_t l_max = kMaxTokens;
  std::size_t overlap = kChunkOverlap;
  std::vector<Window> windows;
};

/// Overlapping token windows covering [0, token_count). Windows start every
/// l_max - overlap tokens; the last one is cut at token_count.
inline ChunkPlan plan_chunks(std::size_t token_count, std::size_t l_max = kMaxTokens,
                             std::size_t overlap = kChunkOverlap) {
  require(token_count >= 1, ErrorKind::invalid_argument, "plan_chunks: token count must be >= 1");
  require(l_max >= 1, ErrorKind::invalid_argument, "plan_chunks: l_max must be >= 1");
  require(overlap < l_max, ErrorKind::invalid_argument, "plan_chunks: overlap must be smaller than l_max");

  ChunkPlan plan{l_max, overlap, {}};
  const std::size_t stride = l_max - overlap;
  for (std::size_t start = 0;; start += stride) {
    const std::size_t end = std::min(start + l_max, token_count);
    plan.windows.push_back({start, end});
    if (end == token_count) break;
  }
  return plan;
}

inline ChunkPlan plan_chunks(std::size_t token_count, const ChunkParams& p) {
  return plan_chunks(token_count, p.l_max, p.overlap);
}

}  // namespace ultra::embed
