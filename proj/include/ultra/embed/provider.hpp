#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ultra/embed/exchange.hpp"
#include "ultra/embed/matrix.hpp"
#include "ultra/embed/synthetic.hpp"
#include "ultra/error.hpp"

namespace ultra::embed {

enum class ProviderKind { exchange_file, synthetic };

struct EmbedderSpec {
  ProviderKind provider = ProviderKind::synthetic;
  std::string model_name = "urduhack/roberta-urdu-small";
  std::size_t dim = kModelDim;
  std::uint64_t seed = 7;
  std::vector<std::filesystem::path> exchange_paths;
};

inline void to_json(nlohmann::json& j, const EmbedderSpec& s) {
  j = nlohmann::json{{"provider", s.provider == ProviderKind::synthetic ? "synthetic" : "exchange_file"},
                     {"model_name", s.model_name},
                     {"dim", s.dim},
                     {"seed", s.seed}};
  auto paths = nlohmann::json::array();
  for (const auto& p : s.exchange_paths) paths.push_back(p.generic_string());
  j["exchange_paths"] = std::move(paths);
}

inline void from_json(const nlohmann::json& j, EmbedderSpec& s) {
  const auto provider = j.value("provider", std::string("synthetic"));
  if (provider == "synthetic") {
    s.provider = ProviderKind::synthetic;
  } else if (provider == "exchange_file") {
    s.provider = ProviderKind::exchange_file;
  } else {
    fail(ErrorKind::invalid_argument, "unknown embedding provider: " + provider);
  }
  s.model_name = j.value("model_name", s.model_name);
  s.dim = j.value("dim", s.dim);
  s.seed = j.value("seed", s.seed);
  s.exchange_paths.clear();
  if (j.contains("exchange_paths")) {
    for (const auto& p : j.at("exchange_paths")) s.exchange_paths.emplace_back(p.get<std::string>());
  }
}

/// Source of token-level embeddings. Implementations are read-only after
/// construction and safe to call concurrently.
class TokenProvider {
 public:
  virtual ~TokenProvider() = default;
  virtual std::size_t dim() const = 0;
  /// `text_id` keys precomputed providers; `text` feeds generative ones.
  virtual TokenEmbeddingMatrix tokens(std::string_view text_id, std::string_view text) const = 0;
};

class SyntheticProvider final : public TokenProvider {
 public:
  explicit SyntheticProvider(std::uint64_t seed, std::size_t dim = kModelDim) : seed_(seed), dim_(dim) {}

  std::size_t dim() const override { return dim_; }

  TokenEmbeddingMatrix tokens(std::string_view, std::string_view text) const override {
    return synthetic_embedding_with(text, seed_, dim_, [this](const std::string& token) -> const std::vector<float>& {
      return token_vector(token);
    });
  }

 private:
  // Token vectors are memoized; the returned reference stays valid because
  // unordered_map never relocates its nodes.
  const std::vector<float>& token_vector(const std::string& token) const {
    {
      std::shared_lock lock(mutex_);
      auto it = cache_.find(token);
      if (it != cache_.end()) return it->second;
    }
    auto v = synthetic_token_vector(token, seed_, dim_);
    std::unique_lock lock(mutex_);
    return cache_.try_emplace(token, std::move(v)).first->second;
  }

  std::uint64_t seed_;
  std::size_t dim_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::string, std::vector<float>> cache_;
};

/// Serves matrices from one or more exchange files, indexed by text id. The
/// index holds offsets only; values are read on demand.
class ExchangeProvider final : public TokenProvider {
 public:
  ExchangeProvider(const std::vector<std::filesystem::path>& paths, std::size_t dim = kModelDim) : dim_(dim) {
    require(!paths.empty(), ErrorKind::invalid_argument, "exchange provider needs at least one file");
    for (std::size_t f = 0; f < paths.size(); ++f) {
      auto reader = std::make_unique<ExchangeReader>(paths[f], static_cast<std::uint32_t>(dim));
      while (auto entry = reader->skip_next()) index_[entry->first] = {f, entry->second};
      readers_.push_back(std::move(reader));
    }
  }

  std::size_t dim() const override { return dim_; }
  bool contains(std::string_view text_id) const { return index_.find(std::string(text_id)) != index_.end(); }
  std::size_t size() const noexcept { return index_.size(); }

  TokenEmbeddingMatrix tokens(std::string_view text_id, std::string_view) const override {
    auto it = index_.find(std::string(text_id));
    if (it == index_.end()) {
      fail(ErrorKind::provider, "no exchange entry for text id '" + std::string(text_id) + "'");
    }
    std::lock_guard lock(mutex_);
    return readers_[it->second.first]->read_at(it->second.second).matrix;
  }

 private:
  std::size_t dim_;
  std::map<std::string, std::pair<std::size_t, std::uint64_t>> index_;
  std::vector<std::unique_ptr<ExchangeReader>> readers_;
  mutable std::mutex mutex_;
};

/// Exchange paths in `spec` are resolved against `base_dir` when relative.
inline std::shared_ptr<const TokenProvider> make_provider(const EmbedderSpec& spec,
                                                          const std::filesystem::path& base_dir = {}) {
  if (spec.provider == ProviderKind::synthetic) return std::make_shared<SyntheticProvider>(spec.seed, spec.dim);
  std::vector<std::filesystem::path> paths;
  for (const auto& p : spec.exchange_paths) paths.push_back(p.is_absolute() || base_dir.empty() ? p : base_dir / p);
  return std::make_shared<ExchangeProvider>(paths, spec.dim);
}

}  // namespace ultra::embed
