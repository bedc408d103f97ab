#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ultra/error.hpp"

namespace ultra::embed {

inline constexpr std::size_t kModelDim = 768;

/// Token-level model output for one text: `rows` x `width` floats, row-major.
/// When `has_cls` is set, row 0 is the classification-token embedding.
struct TokenEmbeddingMatrix {
  std::size_t rows = 0;
  std::size_t width = 0;
  std::vector<float> values;
  bool has_cls = false;

  TokenEmbeddingMatrix() = default;
  TokenEmbeddingMatrix(std::size_t r, std::size_t w, bool cls = false)
      : rows(r), width(w), values(r * w, 0.0f), has_cls(cls) {}

  std::span<const float> row(std::size_t i) const { return {values.data() + i * width, width}; }
  std::span<float> row(std::size_t i) { return {values.data() + i * width, width}; }

  void validate() const {
    require(values.size() == rows * width, ErrorKind::dimension_mismatch,
            "token matrix holds " + std::to_string(values.size()) + " values, expected " +
                std::to_string(rows * width));
    for (float v : values) {
      require(std::isfinite(v), ErrorKind::non_finite, "token matrix contains a non-finite value");
    }
  }
};

/// Non-owning view over a contiguous row range of a token matrix.
struct TokenRows {
  std::span<const float> values;
  std::size_t rows = 0;
  std::size_t width = 0;
  bool has_cls = false;

  TokenRows() = default;
  TokenRows(const TokenEmbeddingMatrix& m)  // NOLINT(google-explicit-constructor)
      : values(m.values), rows(m.rows), width(m.width), has_cls(m.has_cls) {}
  TokenRows(std::span<const float> v, std::size_t r, std::size_t w, bool cls)
      : values(v), rows(r), width(w), has_cls(cls) {}

  std::span<const float> row(std::size_t i) const { return values.subspan(i * width, width); }

  TokenRows slice(std::size_t begin, std::size_t end) const {
    return {values.subspan(begin * width, (end - begin) * width), end - begin, width,
            has_cls && begin == 0};
  }
};

}  // namespace ultra::embed
