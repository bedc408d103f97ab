#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ultra/embed/matrix.hpp"
#include "ultra/text/utf8.hpp"

namespace ultra::embed {

inline constexpr float kSyntheticClsOffset = 0.1f;

inline std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform in (0, 1], built from the top 53 bits so results do not depend on
/// the standard library's distribution implementations.
inline double unit_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

/// Fills `out` with independent standard normal draws (Box-Muller).
inline void fill_gaussian(std::mt19937_64& rng, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); i += 2) {
    const double r = std::sqrt(-2.0 * std::log(unit_open(rng)));
    const double t = 2.0 * std::numbers::pi * unit_open(rng);
    out[i] = r * std::cos(t);
    if (i + 1 < out.size()) out[i + 1] = r * std::sin(t);
  }
}

/// Unit-norm pseudo-random vector determined by (token, seed).
inline std::vector<float> synthetic_token_vector(std::string_view token, std::uint64_t seed,
                                                 std::size_t dim = kModelDim) {
  std::mt19937_64 rng(splitmix64(fnv1a64(token) ^ splitmix64(seed)));
  std::vector<double> g(dim);
  fill_gaussian(rng, g);
  double norm = 0.0;
  for (double v : g) norm += v * v;
  norm = std::sqrt(norm);
  std::vector<float> out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = static_cast<float>(g[i] / norm);
  return out;
}

/// Fixed per-seed displacement added to every classification row.
inline std::vector<float> synthetic_cls_offset(std::uint64_t seed, std::size_t dim = kModelDim) {
  auto v = synthetic_token_vector(std::string_view("\x01" "cls-offset"), seed, dim);
  for (float& x : v) x *= kSyntheticClsOffset;
  return v;
}

/// Deterministic stand-in for a transformer. Tokens are whitespace words;
/// row 0 is a classification row equal to normalize(mean of token rows) plus
/// a seeded offset, so texts sharing vocabulary share direction.
template <typename TokenSource>
TokenEmbeddingMatrix synthetic_embedding_with(std::string_view text, std::uint64_t seed,
                                              std::size_t dim, TokenSource&& token_vector) {
  const auto tokens = utf8::split_whitespace(text);
  TokenEmbeddingMatrix m(tokens.size() + 1, dim, true);
  std::vector<double> mean(dim, 0.0);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const std::vector<float>& v = token_vector(tokens[t]);
    auto row = m.row(t + 1);
    for (std::size_t c = 0; c < dim; ++c) {
      row[c] = v[c];
      mean[c] += v[c];
    }
  }
  double norm = 0.0;
  for (double v : mean) norm += v * v;
  norm = std::sqrt(norm);
  const auto offset = synthetic_cls_offset(seed, dim);
  auto cls = m.row(0);
  for (std::size_t c = 0; c < dim; ++c) {
    const double base = norm > 0.0 ? mean[c] / norm : 0.0;
    cls[c] = static_cast<float>(base + offset[c]);
  }
  return m;
}

inline TokenEmbeddingMatrix synthetic_embedding(std::string_view text, std::uint64_t seed,
                                                std::size_t dim = kModelDim) {
  std::vector<float> scratch;
  return synthetic_embedding_with(text, seed, dim, [&](const std::string& token) -> const std::vector<float>& {
    scratch = synthetic_token_vector(token, seed, dim);
    return scratch;
  });
}

}  // namespace ultra::embed
