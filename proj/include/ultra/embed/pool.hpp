#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ultra/embed/matrix.hpp"
#include "ultra/error.hpp"

namespace ultra::embed {

enum class Pooling { mean, max, cls };
enum class SourceKind { headline, content, query };

inline const char* to_string(Pooling p) noexcept {
  switch (p) {
    case Pooling::mean: return "mean";
    case Pooling::max: return "max";
    case Pooling::cls: return "cls";
  }
  return "?";
}

inline Pooling parse_pooling(std::string_view s) {
  if (s == "mean") return Pooling::mean;
  if (s == "max") return Pooling::max;
  if (s == "cls") return Pooling::cls;
  fail(ErrorKind::invalid_argument, "unknown pooling strategy: " + std::string(s));
}

inline const char* to_string(SourceKind k) noexcept {
  switch (k) {
    case SourceKind::headline: return "headline";
    case SourceKind::content: return "content";
    case SourceKind::query: return "query";
  }
  return "?";
}

struct PooledEmbedding {
  std::vector<float> vector;
  Pooling strategy = Pooling::mean;
  SourceKind source_kind = SourceKind::content;
};

/// Column-wise mean (double accumulation), column-wise max, or row 0.
inline std::vector<float> pool(const TokenRows& tokens, Pooling strategy) {
  require(tokens.rows >= 1, ErrorKind::empty_input, "pool: matrix has no rows");
  const std::size_t w = tokens.width;
  std::vector<float> out(w);
  switch (strategy) {
    case Pooling::mean: {
      std::vector<double> acc(w, 0.0);
      for (std::size_t r = 0; r < tokens.rows; ++r) {
        const auto row = tokens.row(r);
        for (std::size_t c = 0; c < w; ++c) acc[c] += row[c];
      }
      const double n = static_cast<double>(tokens.rows);
      for (std::size_t c = 0; c < w; ++c) out[c] = static_cast<float>(acc[c] / n);
      break;
    }
    case Pooling::max: {
      std::fill(out.begin(), out.end(), -std::numeric_limits<float>::infinity());
      for (std::size_t r = 0; r < tokens.rows; ++r) {
        const auto row = tokens.row(r);
        for (std::size_t c = 0; c < w; ++c) out[c] = std::max(out[c], row[c]);
      }
      break;
    }
    case Pooling::cls: {
      require(tokens.has_cls, ErrorKind::invalid_argument,
              "cls pooling requires a classification-token row");
      const auto row = tokens.row(0);
      std::copy(row.begin(), row.end(), out.begin());
      break;
    }
  }
  return out;
}

}  // namespace ultra::embed
