#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ultra/error.hpp"
#include "ultra/index/hnsw.hpp"
#include "ultra/io/binary.hpp"

namespace ultra::index {

using ArticleId = std::uint64_t;
using Metadata = std::map<std::string, std::string>;

enum class IndexKind : std::uint8_t { exact = 0, hnsw = 1 };

inline const char* to_string(IndexKind k) noexcept { return k == IndexKind::exact ? "exact" : "hnsw"; }

inline IndexKind parse_index_kind(std::string_view s) {
  if (s == "exact") return IndexKind::exact;
  if (s == "hnsw") return IndexKind::hnsw;
  fail(ErrorKind::invalid_argument, "unknown index kind: " + std::string(s));
}

inline void to_json(nlohmann::json& j, const HnswParams& p) {
  j = {{"m", p.m}, {"ef_construction", p.ef_construction}, {"ef_search", p.ef_search}, {"seed", p.seed}};
}

inline void from_json(const nlohmann::json& j, HnswParams& p) {
  p.m = j.value("m", p.m);
  p.ef_construction = j.value("ef_construction", p.ef_construction);
  p.ef_search = j.value("ef_search", p.ef_search);
  p.seed = j.value("seed", p.seed);
}

struct SearchHit {
  ArticleId article_id = 0;
  double score = 0.0;  // cosine similarity
  std::size_t rank = 0;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// Descending score, ascending article id on ties.
inline bool ranks_before(const SearchHit& a, const SearchHit& b) noexcept {
  return a.score > b.score || (a.score == b.score && a.article_id < b.article_id);
}

/// Immutable set of unit-normalized vectors keyed by article id, searchable
/// by cosine similarity with an exact scan or an HNSW graph.
class VectorCollection {
 public:
  VectorCollection() = default;

  /// Rows are normalized to unit length on the way in.
  static VectorCollection build(std::string name, std::size_t dim, std::span<const float> vectors,
                                std::span<const ArticleId> ids, std::vector<Metadata> metadata, IndexKind kind,
                                const HnswParams& params = {}) {
    require(dim >= 1, ErrorKind::invalid_argument, "collection dim must be >= 1");
    require(vectors.size() == ids.size() * dim, ErrorKind::dimension_mismatch,
            "collection '" + name + "': " + std::to_string(vectors.size()) + " values for " +
                std::to_string(ids.size()) + " ids of dim " + std::to_string(dim));
    require(metadata.size() == ids.size(), ErrorKind::invalid_argument,
            "collection '" + name + "': metadata count does not match id count");
    params.validate();

    VectorCollection c;
    c.name_ = std::move(name);
    c.dim_ = dim;
    c.kind_ = kind;
    c.params_ = params;
    c.ids_.assign(ids.begin(), ids.end());
    c.metadata_ = std::move(metadata);
    c.vectors_.resize(vectors.size());
    for (std::size_t r = 0; r < ids.size(); ++r) {
      const auto src = vectors.subspan(r * dim, dim);
      double norm = 0.0;
      for (float v : src) {
        require(std::isfinite(v), ErrorKind::non_finite, "collection '" + c.name_ + "': non-finite value in row " +
                                                             std::to_string(r));
        norm += static_cast<double>(v) * v;
      }
      norm = std::sqrt(norm);
      require(norm > 0.0, ErrorKind::invalid_argument,
              "collection '" + c.name_ + "': zero vector for id " + std::to_string(ids[r]));
      for (std::size_t i = 0; i < dim; ++i) c.vectors_[r * dim + i] = static_cast<float>(src[i] / norm);
    }
    c.index_rows();
    if (kind == IndexKind::hnsw) c.graph_ = HnswGraph::build(c.vectors_, dim, params);
    return c;
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  IndexKind kind() const noexcept { return kind_; }
  const HnswParams& params() const noexcept { return params_; }
  const std::vector<ArticleId>& ids() const noexcept { return ids_; }
  std::span<const float> vectors() const noexcept { return vectors_; }
  std::span<const float> vector(std::size_t row) const { return {vectors_.data() + row * dim_, dim_}; }
  const Metadata& metadata(std::size_t row) const { return metadata_.at(row); }
  const std::optional<HnswGraph>& graph() const noexcept { return graph_; }

  std::optional<std::size_t> row_of(ArticleId id) const {
    auto it = row_by_id_.find(id);
    if (it == row_by_id_.end()) return std::nullopt;
    return it->second;
  }

  /// Top-k by cosine. Exact collections scan; HNSW collections search the
  /// graph with the configured ef_search.
  std::vector<SearchHit> search(std::span<const float> query, std::size_t k) const {
    if (kind_ == IndexKind::hnsw) return search_hnsw(query, k, params_.effective_ef(k));
    return search_exact(query, k);
  }

  std::vector<SearchHit> search_exact(std::span<const float> query, std::size_t k) const {
    const auto q = prepare(query, k);
    std::vector<SearchHit> hits(size());
    for (std::size_t r = 0; r < size(); ++r) hits[r] = {ids_[r], score_row(r, q), 0};
    const std::size_t keep = std::min(k, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(), ranks_before);
    hits.resize(keep);
    for (std::size_t i = 0; i < hits.size(); ++i) hits[i].rank = i + 1;
    return hits;
  }

  std::vector<SearchHit> search_hnsw(std::span<const float> query, std::size_t k, std::size_t ef) const {
    require(graph_.has_value(), ErrorKind::invalid_argument, "collection '" + name_ + "' has no HNSW graph");
    const auto q = prepare(query, k);
    std::vector<float> qf(q.begin(), q.end());
    const auto rows = graph_->search(vectors_, qf, std::min(k, size()), std::max(ef, k));
    std::vector<SearchHit> hits;
    hits.reserve(rows.size());
    for (auto r : rows) hits.push_back({ids_[r], score_row(r, q), 0});
    std::sort(hits.begin(), hits.end(), ranks_before);
    for (std::size_t i = 0; i < hits.size(); ++i) hits[i].rank = i + 1;
    return hits;
  }

  // Collection file, little-endian:
  //   "ULVC" | version u32 | name (u32 len + bytes) | dim u32 | N u64 | kind u8 |
  //   m u32 | ef_construction u32 | ef_search u32 | seed u64 |
  //   vectors f32[N*dim] | ids u64[N] | metadata (u64 len + JSON lines) |
  //   [hnsw only] entry u32 | max_level i32 | per node: levels u32, then per
  //   level: count u32 + neighbor rows u32[count] | crc32 u32
  static constexpr std::uint32_t kFormatVersion = 1;

  void persist(const std::filesystem::path& path) const {
    io::BinaryWriter w;
    w.put_bytes("ULVC");
    w.put<std::uint32_t>(kFormatVersion);
    w.put_string(name_);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(dim_));
    w.put<std::uint64_t>(ids_.size());
    w.put<std::uint8_t>(static_cast<std::uint8_t>(kind_));
    w.put<std::uint32_t>(params_.m);
    w.put<std::uint32_t>(params_.ef_construction);
    w.put<std::uint32_t>(params_.ef_search);
    w.put<std::uint64_t>(params_.seed);
    w.put_array<float>(vectors_);
    w.put_array<std::uint64_t>(ids_);
    std::string meta;
    for (const auto& m : metadata_) {
      meta += nlohmann::json(m).dump();
      meta += '\n';
    }
    w.put<std::uint64_t>(meta.size());
    w.put_bytes(meta);
    if (kind_ == IndexKind::hnsw) {
      w.put<std::uint32_t>(graph_->entry_point());
      w.put<std::int32_t>(graph_->max_level());
      for (const auto& node : graph_->links()) {
        w.put<std::uint32_t>(static_cast<std::uint32_t>(node.size()));
        for (const auto& level : node) {
          w.put<std::uint32_t>(static_cast<std::uint32_t>(level.size()));
          w.put_array<std::uint32_t>(level);
        }
      }
    }
    w.put_checksum();
    w.save(path);
  }

  static VectorCollection open(const std::filesystem::path& path) {
    auto r = io::BinaryReader::from_file(path);
    r.expect_magic("ULVC", "vector collection");
    if (r.remaining() < 4) fail(ErrorKind::corrupt, "collection is truncated: " + path.string());
    const auto version = r.get<std::uint32_t>();
    require(version == kFormatVersion, ErrorKind::version_mismatch,
            "unsupported collection version " + std::to_string(version) + ": " + path.string());
    r.verify_checksum();

    VectorCollection c;
    c.name_ = r.get_string();
    c.dim_ = r.get<std::uint32_t>();
    const auto n = r.get<std::uint64_t>();
    const auto kind = r.get<std::uint8_t>();
    require(kind <= 1, ErrorKind::format, "unknown index kind in " + path.string());
    c.kind_ = static_cast<IndexKind>(kind);
    c.params_.m = r.get<std::uint32_t>();
    c.params_.ef_construction = r.get<std::uint32_t>();
    c.params_.ef_search = r.get<std::uint32_t>();
    c.params_.seed = r.get<std::uint64_t>();
    c.vectors_ = r.get_array<float>(n * c.dim_);
    c.ids_ = r.get_array<std::uint64_t>(n);
    const auto meta_len = r.get<std::uint64_t>();
    std::istringstream meta(r.get_bytes(meta_len));
    std::string line;
    while (std::getline(meta, line)) {
      try {
        c.metadata_.push_back(nlohmann::json::parse(line).get<Metadata>());
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::corrupt, "bad metadata block in " + path.string() + ": " + e.what());
      }
    }
    require(c.metadata_.size() == n, ErrorKind::corrupt, "metadata count mismatch in " + path.string());
    if (c.kind_ == IndexKind::hnsw) {
      const auto entry = r.get<std::uint32_t>();
      const auto max_level = r.get<std::int32_t>();
      std::vector<std::vector<HnswGraph::Links>> links(n);
      for (auto& node : links) {
        const auto levels = r.get<std::uint32_t>();
        require(levels <= 64, ErrorKind::corrupt, "implausible HNSW level count in " + path.string());
        node.resize(levels);
        for (auto& level : node) level = r.get_array<std::uint32_t>(r.get<std::uint32_t>());
      }
      c.graph_ = HnswGraph::from_parts(c.dim_, c.params_.m, entry, max_level, std::move(links));
    }
    require(r.remaining() == 4, ErrorKind::corrupt, "trailing bytes in " + path.string());
    c.index_rows();
    return c;
  }

 private:
  void index_rows() {
    row_by_id_.clear();
    row_by_id_.reserve(ids_.size());
    for (std::size_t r = 0; r < ids_.size(); ++r) {
      require(row_by_id_.emplace(ids_[r], r).second, ErrorKind::invalid_argument,
              "collection '" + name_ + "': duplicate id " + std::to_string(ids_[r]));
    }
  }

  std::vector<double> prepare(std::span<const float> query, std::size_t k) const {
    require(k >= 1, ErrorKind::invalid_argument, "search: k must be >= 1");
    require(!empty(), ErrorKind::empty_input, "search: collection '" + name_ + "' is empty");
    require(query.size() == dim_, ErrorKind::dimension_mismatch,
            "search: query has dim " + std::to_string(query.size()) + ", collection '" + name_ + "' has " +
                std::to_string(dim_));
    double norm = 0.0;
    for (float v : query) {
      require(std::isfinite(v), ErrorKind::non_finite, "search: non-finite query");
      norm += static_cast<double>(v) * v;
    }
    require(norm > 0.0, ErrorKind::invalid_argument, "search: zero query vector");
    norm = std::sqrt(norm);
    std::vector<double> q(dim_);
    for (std::size_t i = 0; i < dim_; ++i) q[i] = query[i] / norm;
    return q;
  }

  double score_row(std::size_t row, const std::vector<double>& q) const {
    const float* v = vectors_.data() + row * dim_;
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += static_cast<double>(v[i]) * q[i];
    return s;
  }

  std::string name_;
  std::size_t dim_ = 0;
  IndexKind kind_ = IndexKind::exact;
  HnswParams params_;
  std::vector<float> vectors_;
  std::vector<ArticleId> ids_;
  std::vector<Metadata> metadata_;
  std::optional<HnswGraph> graph_;
  std::unordered_map<ArticleId, std::size_t> row_by_id_;
};

inline std::vector<SearchHit> search_topk(const VectorCollection& collection, std::span<const float> query,
                                          std::size_t k) {
  return collection.search(query, k);
}

}  // namespace ultra::index
