#pragma once

#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include "ultra/embed/chunk.hpp"
#include "ultra/embed/pool.hpp"
#include "ultra/embed/provider.hpp"
#include "ultra/error.hpp"
#include "ultra/text/utf8.hpp"

namespace ultra::embed {

/// Pools a token matrix, chunking it into overlapping windows when it is
/// longer than l_max. Each window is pooled on its own and the window
/// vectors are averaged without weights. Windows other than the first carry
/// no classification row, so cls pooling uses the text's row 0 for all.
inline std::vector<float> pool_chunked(const TokenEmbeddingMatrix& m, Pooling strategy,
                                       const ChunkParams& params = {}) {
  require(m.rows >= 1, ErrorKind::empty_input, "empty tokenization");
  const TokenRows all(m);
  const ChunkPlan plan = plan_chunks(m.rows, params);
  if (plan.windows.size() == 1) return pool(all, strategy);

  std::vector<double> acc(m.width, 0.0);
  for (const Window& w : plan.windows) {
    TokenRows chunk = all.slice(w.begin, w.end);
    std::vector<float> pooled;
    if (strategy == Pooling::cls) {
      require(m.has_cls, ErrorKind::invalid_argument, "cls pooling requires a classification-token row");
      pooled = pool(all.slice(0, 1), Pooling::cls);
    } else {
      pooled = pool(chunk, strategy);
    }
    for (std::size_t c = 0; c < m.width; ++c) acc[c] += pooled[c];
  }
  const double n = static_cast<double>(plan.windows.size());
  std::vector<float> out(m.width);
  for (std::size_t c = 0; c < m.width; ++c) out[c] = static_cast<float>(acc[c] / n);
  return out;
}

class Embedder {
 public:
  Embedder(std::shared_ptr<const TokenProvider> provider, ChunkParams chunking = {})
      : provider_(std::move(provider)), chunking_(chunking) {
    require(provider_ != nullptr, ErrorKind::invalid_argument, "embedder needs a provider");
  }

  std::size_t dim() const { return provider_->dim(); }
  const ChunkParams& chunking() const noexcept { return chunking_; }
  const TokenProvider& provider() const noexcept { return *provider_; }

  PooledEmbedding embed_text(std::string_view text_id, std::string_view text, Pooling strategy,
                             SourceKind kind) const {
    require(!utf8::trim(text).empty(), ErrorKind::empty_input,
            "cannot embed empty text (id '" + std::string(text_id) + "')");
    TokenEmbeddingMatrix m = provider_->tokens(text_id, text);
    require(m.width == dim(), ErrorKind::dimension_mismatch,
            "provider returned width " + std::to_string(m.width) + " for '" + std::string(text_id) + "'");
    m.validate();
    return {pool_chunked(m, strategy, chunking_), strategy, kind};
  }

 private:
  std::shared_ptr<const TokenProvider> provider_;
  ChunkParams chunking_;
};

}  // namespace ultra::embed
