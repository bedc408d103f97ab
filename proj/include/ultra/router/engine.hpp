#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ultra/corpus/clean.hpp"
#include "ultra/corpus/stopwords.hpp"
#include "ultra/corpus/types.hpp"
#include "ultra/embed/embedder.hpp"
#include "ultra/embed/provider.hpp"
#include "ultra/error.hpp"
#include "ultra/index/collection.hpp"
#include "ultra/reduce/pca.hpp"
#include "ultra/text/utf8.hpp"

namespace ultra::router {

using corpus::Article;
using corpus::ArticleId;

enum class PathwayKind { headline, content };

inline const char* to_string(PathwayKind k) noexcept { return k == PathwayKind::headline ? "headline" : "content"; }

inline PathwayKind parse_pathway_kind(std::string_view s) {
  if (s == "headline") return PathwayKind::headline;
  if (s == "content") return PathwayKind::content;
  fail(ErrorKind::invalid_argument, "unknown pathway: " + std::string(s));
}

/// One retrieval pipeline. `name` also picks the article field it indexes.
struct PathwayConfig {
  PathwayKind name = PathwayKind::headline;
  embed::Pooling pooling = embed::Pooling::cls;
  std::size_t d_prime = 64;
  index::IndexKind index_kind = index::IndexKind::hnsw;
  index::HnswParams hnsw;
  // Relative to the manifest directory once saved.
  std::filesystem::path pca_path;
  std::filesystem::path collection_path;

  friend bool operator==(const PathwayConfig&, const PathwayConfig&) = default;
};

inline PathwayConfig make_pathway(PathwayKind name, embed::Pooling pooling, std::size_t d_prime) {
  PathwayConfig p;
  p.name = name;
  p.pooling = pooling;
  p.d_prime = d_prime;
  return p;
}

struct EngineConfig {
  std::size_t theta = 150;
  std::size_t default_k = 15;
  PathwayConfig short_path = make_pathway(PathwayKind::headline, embed::Pooling::cls, 64);
  PathwayConfig long_path = make_pathway(PathwayKind::content, embed::Pooling::mean, 128);
  embed::EmbedderSpec embedder;
  embed::ChunkParams chunking;
  bool clean_queries = true;
  /// When set, stop words listed in this file are also removed from queries.
  std::optional<std::filesystem::path> query_stoplist;
  /// Caps the rows each PCA fit sees (0 fits on every article).
  std::size_t pca_max_rows = 0;
  std::uint64_t pca_seed = 0;

  /// Headline/cls/64 for short queries, content/mean/128 for long ones, θ=150.
  static EngineConfig paper_profile() { return {}; }

  void validate() const {
    require(theta >= 1, ErrorKind::invalid_argument, "engine config: theta must be >= 1");
    require(default_k >= 1, ErrorKind::invalid_argument, "engine config: default_k must be >= 1");
    require(embedder.dim >= 1, ErrorKind::invalid_argument, "engine config: embedder dim must be >= 1");
    for (const auto* p : {&short_path, &long_path}) {
      require(p->d_prime >= 1 && p->d_prime <= embedder.dim, ErrorKind::invalid_argument,
              std::string("engine config: ") + to_string(p->name) + " d_prime must be in [1, embedder dim]");
      p->hnsw.validate();
    }
  }
};

inline void to_json(nlohmann::json& j, const PathwayConfig& p) {
  j = {{"name", to_string(p.name)},
       {"pooling", embed::to_string(p.pooling)},
       {"d_prime", p.d_prime},
       {"index", index::to_string(p.index_kind)},
       {"hnsw", p.hnsw}};
  if (!p.pca_path.empty()) j["pca_model"] = p.pca_path.generic_string();
  if (!p.collection_path.empty()) j["collection"] = p.collection_path.generic_string();
}

inline void from_json(const nlohmann::json& j, PathwayConfig& p) {
  p.name = parse_pathway_kind(j.at("name").get<std::string>());
  if (j.contains("pooling")) p.pooling = embed::parse_pooling(j.at("pooling").get<std::string>());
  p.d_prime = j.value("d_prime", p.d_prime);
  if (j.contains("index")) p.index_kind = index::parse_index_kind(j.at("index").get<std::string>());
  if (j.contains("hnsw")) j.at("hnsw").get_to(p.hnsw);
  p.pca_path = j.value("pca_model", std::string());
  p.collection_path = j.value("collection", std::string());
}

inline void to_json(nlohmann::json& j, const EngineConfig& c) {
  j = {{"theta", c.theta},
       {"default_k", c.default_k},
       {"short_path", c.short_path},
       {"long_path", c.long_path},
       {"embedder", c.embedder},
       {"chunking", {{"max_tokens", c.chunking.l_max}, {"overlap", c.chunking.overlap}}},
       {"clean_queries", c.clean_queries},
       {"pca_max_rows", c.pca_max_rows},
       {"pca_seed", c.pca_seed}};
  if (c.query_stoplist) j["query_stoplist"] = c.query_stoplist->generic_string();
}

/// Missing keys keep their paper-profile values, so a config file only needs
/// the fields it changes.
inline void from_json(const nlohmann::json& j, EngineConfig& c) {
  c.theta = j.value("theta", c.theta);
  c.default_k = j.value("default_k", c.default_k);
  if (j.contains("short_path")) j.at("short_path").get_to(c.short_path);
  if (j.contains("long_path")) j.at("long_path").get_to(c.long_path);
  if (j.contains("embedder")) j.at("embedder").get_to(c.embedder);
  if (j.contains("chunking")) {
    c.chunking.l_max = j.at("chunking").value("max_tokens", c.chunking.l_max);
    c.chunking.overlap = j.at("chunking").value("overlap", c.chunking.overlap);
  }
  c.clean_queries = j.value("clean_queries", c.clean_queries);
  if (j.contains("query_stoplist")) c.query_stoplist = j.at("query_stoplist").get<std::string>();
  c.pca_max_rows = j.value("pca_max_rows", c.pca_max_rows);
  c.pca_seed = j.value("pca_seed", c.pca_seed);
}

enum class QueryKind { short_query, long_query };

struct Query {
  std::string text;  // trimmed raw text
  std::size_t char_len = 0;

  /// Trims and measures; ℓ(q) counts Unicode scalars before any cleaning.
  static Query make(std::string_view raw) {
    Query q;
    q.text = utf8::trim(utf8::normalize_input(raw));
    q.char_len = utf8::length(q.text);
    require(q.char_len > 0, ErrorKind::empty_input, "empty query");
    return q;
  }

  QueryKind kind(std::size_t theta) const noexcept {
    return char_len < theta ? QueryKind::short_query : QueryKind::long_query;
  }
};

inline const PathwayConfig& route(const Query& q, const EngineConfig& cfg) {
  require(q.char_len > 0, ErrorKind::empty_input, "empty query");
  return q.kind(cfg.theta) == QueryKind::short_query ? cfg.short_path : cfg.long_path;
}

struct Recommendation {
  ArticleId article_id = 0;
  std::string headline;
  std::string category;
  std::string full_content;
  double score = 0.0;
  std::size_t rank = 0;
  PathwayKind pathway_used = PathwayKind::headline;
};

inline void to_json(nlohmann::json& j, const Recommendation& r) {
  j = {{"rank", r.rank},
       {"article_id", r.article_id},
       {"score", r.score},
       {"pathway", to_string(r.pathway_used)},
       {"headline", r.headline},
       {"category", r.category},
       {"content", r.full_content}};
}

struct QueryOptions {
  std::optional<std::size_t> k;  // engine default_k when empty
  std::optional<ArticleId> exclude_id;
  /// Scan every vector instead of walking the HNSW graph.
  bool exact = false;
  /// Key for precomputed providers; derived from the text when empty.
  std::optional<std::string> query_id;
};

/// Loaded state of one pathway.
struct Pathway {
  PathwayConfig config;
  reduce::PcaModel model;
  index::VectorCollection collection;
};

inline std::string headline_text_id(ArticleId id) { return "headline:" + std::to_string(id); }
inline std::string content_text_id(ArticleId id) { return "content:" + std::to_string(id); }

/// Default exchange key for a query: "query:" + 16 hex digits of the FNV-1a
/// hash of the trimmed query text.
inline std::string query_text_id(std::string_view trimmed) {
  static const char* hex = "0123456789abcdef";
  std::uint64_t h = embed::fnv1a64(trimmed);
  std::string s = "query:";
  for (int shift = 60; shift >= 0; shift -= 4) s += hex[(h >> shift) & 0xF];
  return s;
}

class Engine {
 public:
  Engine(EngineConfig cfg, Pathway short_path, Pathway long_path, std::shared_ptr<const embed::TokenProvider> provider,
         std::optional<corpus::StopList> query_stops = std::nullopt)
      : cfg_(std::move(cfg)),
        short_(std::move(short_path)),
        long_(std::move(long_path)),
        embedder_(std::move(provider), cfg_.chunking),
        query_stops_(std::move(query_stops)) {
    cfg_.validate();
    for (const Pathway* p : {&short_, &long_}) {
      require(p->model.input_dim == embedder_.dim(), ErrorKind::dimension_mismatch,
              std::string(to_string(p->config.name)) + " PCA model expects " + std::to_string(p->model.input_dim) +
                  " inputs, embedder produces " + std::to_string(embedder_.dim()));
      require(p->model.d_prime == p->collection.dim() && p->config.d_prime == p->collection.dim(),
              ErrorKind::dimension_mismatch,
              std::string(to_string(p->config.name)) + " pathway: PCA output and collection dim differ");
    }
  }

  const EngineConfig& config() const noexcept { return cfg_; }
  const Pathway& short_pathway() const noexcept { return short_; }
  const Pathway& long_pathway() const noexcept { return long_; }
  const embed::Embedder& embedder() const noexcept { return embedder_; }

  const Pathway& pathway_for(const Query& q) const {
    return q.kind(cfg_.theta) == QueryKind::short_query ? short_ : long_;
  }

  /// Reduced, un-normalized query vector on the pathway `q` routes to.
  std::vector<float> query_vector(const Query& q, const QueryOptions& opts = {}) const {
    const Pathway& p = pathway_for(q);
    std::string text = cfg_.clean_queries ? corpus::clean_text(q.text) : q.text;
    if (query_stops_) text = corpus::remove_stopwords(text, *query_stops_).text;
    require(!utf8::trim(text).empty(), ErrorKind::empty_input, "query has no content left after cleaning");
    const std::string id = opts.query_id ? *opts.query_id : query_text_id(q.text);
    const auto pooled = embedder_.embed_text(id, text, p.config.pooling, embed::SourceKind::query);
    return p.model.transform(pooled.vector);
  }

  std::vector<Recommendation> recommend(const Query& q, const QueryOptions& opts = {}) const {
    const std::size_t k = opts.k.value_or(cfg_.default_k);
    require(k >= 1, ErrorKind::invalid_argument, "k must be >= 1");
    const Pathway& p = pathway_for(q);
    const auto v = query_vector(q, opts);

    const std::size_t depth = std::min(k + (opts.exclude_id ? 1 : 0), p.collection.size());
    auto hits = opts.exact ? p.collection.search_exact(v, depth) : p.collection.search(v, depth);

    std::vector<Recommendation> out;
    for (const auto& h : hits) {
      if (opts.exclude_id && h.article_id == *opts.exclude_id) continue;
      if (out.size() == k) break;
      const auto& meta = p.collection.metadata(*p.collection.row_of(h.article_id));
      Recommendation r;
      r.article_id = h.article_id;
      r.headline = meta_value(meta, "headline");
      r.category = meta_value(meta, "category");
      r.full_content = meta_value(meta, "content");
      r.score = h.score;
      r.rank = out.size() + 1;
      r.pathway_used = p.config.name;
      out.push_back(std::move(r));
    }
    return out;
  }

  std::vector<Recommendation> recommend(std::string_view text, const QueryOptions& opts = {}) const {
    return recommend(Query::make(text), opts);
  }

  /// Writes both PCA models, both collections and manifest.json into `dir`.
  /// Returns the manifest path.
  std::filesystem::path save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    EngineConfig cfg = cfg_;
    auto write = [&](const Pathway& p, PathwayConfig& pc, const char* slot) {
      const std::string stem = std::string(slot) + "-" + to_string(p.config.name);
      pc.pca_path = stem + ".pca";
      pc.collection_path = stem + ".ulvc";
      reduce::save_model(p.model, dir / pc.pca_path);
      p.collection.persist(dir / pc.collection_path);
    };
    write(short_, cfg.short_path, "short");
    write(long_, cfg.long_path, "long");
    if (query_stops_) {
      cfg.query_stoplist = "query-stopwords.txt";
      std::ofstream stops(dir / *cfg.query_stoplist);
      for (const auto& w : query_stops_->entries()) stops << w << '\n';
      if (!stops) fail(ErrorKind::io, "cannot write query stop list in " + dir.string());
    }
    nlohmann::json manifest = {{"format", "ultra-engine"}, {"version", kManifestVersion}, {"config", cfg}};
    const auto path = dir / "manifest.json";
    std::ofstream out(path);
    if (!out) fail(ErrorKind::io, "cannot write " + path.string());
    out << manifest.dump(2) << '\n';
    if (!out) fail(ErrorKind::io, "write failed: " + path.string());
    return path;
  }

  static constexpr int kManifestVersion = 1;

  static Engine load(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) fail(ErrorKind::not_found, "cannot open manifest: " + manifest_path.string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::format, "manifest is not valid JSON: " + manifest_path.string() + ": " + e.what());
    }
    require(j.is_object() && j.value("format", std::string()) == "ultra-engine", ErrorKind::format,
            "not an engine manifest: " + manifest_path.string());
    require(j.value("version", 0) == kManifestVersion, ErrorKind::version_mismatch,
            "unsupported manifest version in " + manifest_path.string());
    EngineConfig cfg;
    try {
      j.at("config").get_to(cfg);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::format, "bad manifest config in " + manifest_path.string() + ": " + e.what());
    }
    const auto base = manifest_path.parent_path();
    auto resolve = [&](const std::filesystem::path& p) { return p.is_absolute() ? p : base / p; };
    auto load_pathway = [&](const PathwayConfig& pc) {
      require(!pc.pca_path.empty() && !pc.collection_path.empty(), ErrorKind::format,
              std::string("manifest lacks file paths for the ") + to_string(pc.name) + " pathway");
      return Pathway{pc, reduce::load_model(resolve(pc.pca_path)),
                     index::VectorCollection::open(resolve(pc.collection_path))};
    };
    std::optional<corpus::StopList> stops;
    if (cfg.query_stoplist) stops = corpus::StopList::load(resolve(*cfg.query_stoplist));
    auto provider = embed::make_provider(cfg.embedder, base);
    Pathway s = load_pathway(cfg.short_path);
    Pathway l = load_pathway(cfg.long_path);
    return Engine(cfg, std::move(s), std::move(l), std::move(provider), std::move(stops));
  }

 private:
  static std::string meta_value(const index::Metadata& m, const char* key) {
    auto it = m.find(key);
    return it == m.end() ? std::string() : it->second;
  }

  EngineConfig cfg_;
  Pathway short_;
  Pathway long_;
  embed::Embedder embedder_;
  std::optional<corpus::StopList> query_stops_;
};

namespace detail {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

inline std::string_view field(const Article& a, PathwayKind k) {
  return k == PathwayKind::headline ? std::string_view(a.headline) : std::string_view(a.content);
}

inline std::string text_id(const Article& a, PathwayKind k) {
  return k == PathwayKind::headline ? headline_text_id(a.id) : content_text_id(a.id);
}

}  // namespace detail

/// Offline build: embed every headline and content, fit one PCA per pathway,
/// index both. Failures are rethrown as StageError naming the stage.
inline Engine build_engine(const std::vector<Article>& articles, const EngineConfig& cfg,
                           std::shared_ptr<const embed::TokenProvider> provider = nullptr,
                           const std::filesystem::path& base_dir = {}) {
  detail::stage("config", [&] {
    cfg.validate();
    require(!articles.empty(), ErrorKind::empty_input, "no articles to index");
  });
  if (!provider) provider = detail::stage("provider", [&] { return embed::make_provider(cfg.embedder, base_dir); });
  const embed::Embedder embedder(provider, cfg.chunking);
  require(embedder.dim() == cfg.embedder.dim, ErrorKind::dimension_mismatch,
          "provider dim does not match embedder spec");

  std::vector<ArticleId> ids;
  std::vector<index::Metadata> metadata;
  for (const auto& a : articles) {
    ids.push_back(a.id);
    metadata.push_back({{"headline", a.headline}, {"content", a.content}, {"category", a.category}});
  }

  auto build_pathway = [&](const PathwayConfig& pc) {
    const std::string name = to_string(pc.name);
    const std::size_t dim = embedder.dim();
    std::vector<float> pooled(articles.size() * dim);
    detail::stage(("embed-" + name).c_str(), [&] {
      for (std::size_t i = 0; i < articles.size(); ++i) {
        const auto& a = articles[i];
        const auto e = embedder.embed_text(detail::text_id(a, pc.name), detail::field(a, pc.name), pc.pooling,
                                           pc.name == PathwayKind::headline ? embed::SourceKind::headline
                                                                            : embed::SourceKind::content);
        std::copy(e.vector.begin(), e.vector.end(), pooled.begin() + static_cast<std::ptrdiff_t>(i * dim));
      }
    });
    reduce::PcaOptions popts;
    popts.allow_rank_padding = true;
    popts.max_rows = cfg.pca_max_rows;
    popts.subsample_seed = cfg.pca_seed;
    auto model = detail::stage(("pca-" + name).c_str(),
                               [&] { return reduce::pca_fit(pooled, articles.size(), dim, pc.d_prime, popts); });
    auto collection = detail::stage(("index-" + name).c_str(), [&] {
      std::vector<float> reduced(articles.size() * pc.d_prime);
      for (std::size_t i = 0; i < articles.size(); ++i) {
        const auto r = model.transform(std::span<const float>(pooled.data() + i * dim, dim));
        std::copy(r.begin(), r.end(), reduced.begin() + static_cast<std::ptrdiff_t>(i * pc.d_prime));
      }
      return index::VectorCollection::build(name, pc.d_prime, reduced, ids, metadata, pc.index_kind, pc.hnsw);
    });
    return Pathway{pc, std::move(model), std::move(collection)};
  };

  Pathway s = build_pathway(cfg.short_path);
  Pathway l = build_pathway(cfg.long_path);
  std::optional<corpus::StopList> stops;
  if (cfg.query_stoplist) {
    stops = detail::stage("query-stoplist", [&] {
      const auto& p = *cfg.query_stoplist;
      return corpus::StopList::load(p.is_absolute() || base_dir.empty() ? p : base_dir / p);
    });
  }
  return Engine(cfg, std::move(s), std::move(l), std::move(provider), std::move(stops));
}

}  // namespace ultra::router
