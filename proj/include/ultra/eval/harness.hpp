#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ultra/embed/embedder.hpp"
#include "ultra/error.hpp"
#include "ultra/eval/metrics.hpp"
#include "ultra/index/collection.hpp"
#include "ultra/reduce/pca.hpp"
#include "ultra/reduce/reducer.hpp"
#include "ultra/text/utf8.hpp"

namespace ultra::eval {

/// A reducer together with the exact collection of the corpus it reduced.
struct ReducedSpace {
  std::string label;
  std::shared_ptr<const reduce::Reducer> reducer;
  index::VectorCollection collection;
};

/// Reduces every row of `full` (N x reducer.input_dim) and indexes the
/// result exactly.
inline ReducedSpace reduce_collection(std::string label, std::shared_ptr<const reduce::Reducer> reducer,
                                      std::span<const float> full, std::span<const index::ArticleId> ids) {
  require(reducer != nullptr, ErrorKind::invalid_argument, "reduce_collection: no reducer");
  const std::size_t in = reducer->input_dim();
  const std::size_t out = reducer->output_dim();
  require(full.size() == ids.size() * in, ErrorKind::dimension_mismatch, "reduce_collection: bad vector block");
  std::vector<float> reduced(ids.size() * out);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto r = reducer->reduce(full.subspan(i * in, in));
    std::copy(r.begin(), r.end(), reduced.begin() + static_cast<std::ptrdiff_t>(i * out));
  }
  auto col = index::VectorCollection::build(label, out, reduced, ids, std::vector<index::Metadata>(ids.size()),
                                            index::IndexKind::exact);
  return {std::move(label), std::move(reducer), std::move(col)};
}

inline RetrievalRun run_queries(const index::VectorCollection& col, const std::vector<std::vector<float>>& queries,
                                const std::vector<QueryId>& query_ids, std::size_t k, std::string label) {
  RetrievalRun run(std::move(label));
  for (std::size_t i = 0; i < queries.size(); ++i) {
    std::vector<ArticleId> ids;
    for (const auto& h : col.search_exact(queries[i], k)) ids.push_back(h.article_id);
    run.add(query_ids[i], std::move(ids));
  }
  return run;
}

/// Top-k fidelity of each reduced space against exact search in the full
/// space. `queries` are full-dimensional; each candidate reduces them with
/// its own reducer.
inline ComparisonTable compare_reducers(const index::VectorCollection& ground_truth,
                                        const std::vector<ReducedSpace>& candidates,
                                        const std::vector<std::vector<float>>& queries,
                                        const std::vector<QueryId>& query_ids, std::size_t k) {
  require(!candidates.empty(), ErrorKind::invalid_argument, "compare_reducers: no candidates");
  require(!queries.empty(), ErrorKind::empty_input, "compare_reducers: no queries");
  require(queries.size() == query_ids.size(), ErrorKind::invalid_argument,
          "compare_reducers: query and id counts differ");
  require(k >= 1 && k <= ground_truth.size(), ErrorKind::invalid_argument,
          "compare_reducers: k must be in [1, collection size]");
  std::vector<ArticleId> truth_ids = ground_truth.ids();
  std::sort(truth_ids.begin(), truth_ids.end());
  for (const auto& c : candidates) {
    std::vector<ArticleId> ids = c.collection.ids();
    std::sort(ids.begin(), ids.end());
    require(ids == truth_ids, ErrorKind::invalid_argument,
            "compare_reducers: '" + c.label + "' does not hold the ground-truth article ids");
    require(c.reducer && c.reducer->input_dim() == ground_truth.dim(), ErrorKind::dimension_mismatch,
            "compare_reducers: '" + c.label + "' reducer does not accept ground-truth vectors");
  }

  const RetrievalRun truth = run_queries(ground_truth, queries, query_ids, k, "ground-truth");
  ComparisonTable table;
  table.k = k;
  for (const auto& c : candidates) {
    std::vector<std::vector<float>> reduced;
    reduced.reserve(queries.size());
    for (const auto& q : queries) reduced.push_back(c.reducer->reduce(q));
    table.reports.push_back(overlap_at_k(truth, run_queries(c.collection, reduced, query_ids, k, c.label), k));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Dimension sweep

struct LengthQuery {
  std::size_t length = 0;  // characters
  std::size_t source = 0;  // index into the held-out texts
  std::string text;
};

/// For each length L, `per_length` queries cut as L-character slices at a
/// random offset from randomly chosen held-out texts at least L long.
inline std::vector<LengthQuery> make_length_queries(const std::vector<std::string>& held_out,
                                                    const std::vector<std::size_t>& lengths, std::size_t per_length,
                                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> text_len(held_out.size());
  for (std::size_t i = 0; i < held_out.size(); ++i) text_len[i] = utf8::length(held_out[i]);
  std::vector<LengthQuery> out;
  for (std::size_t L : lengths) {
    require(L >= 1, ErrorKind::invalid_argument, "query length must be >= 1");
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < held_out.size(); ++i) {
      if (text_len[i] >= L) eligible.push_back(i);
    }
    require(!eligible.empty(), ErrorKind::invalid_argument,
            "no held-out text has " + std::to_string(L) + " characters");
    for (std::size_t n = 0; n < per_length; ++n) {
      const std::size_t src = eligible[rng() % eligible.size()];
      const std::size_t start = rng() % (text_len[src] - L + 1);
      std::string slice = utf8::substr(held_out[src], start, L);
      // A slice of pure whitespace cannot be embedded; take the text's head instead.
      if (utf8::trim(slice).empty()) slice = utf8::prefix(held_out[src], L);
      out.push_back({L, src, std::move(slice)});
    }
  }
  return out;
}

struct SweepCell {
  std::size_t dim = 0;
  std::size_t query_length = 0;
  std::size_t queries = 0;
  double mean_percent = 0.0;
  double mean_jaccard = 0.0;
};

struct SweepReport {
  std::size_t k = 0;
  std::vector<SweepCell> cells;  // dims outer, lengths inner

  nlohmann::json to_json() const {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& x : cells) {
      c.push_back({{"dim", x.dim},
                   {"query_length", x.query_length},
                   {"queries", x.queries},
                   {"mean_overlap_percent", x.mean_percent},
                   {"mean_jaccard", x.mean_jaccard}});
    }
    return {{"k", k}, {"cells", c}};
  }

  std::string to_table() const {
    std::map<std::size_t, std::map<std::size_t, double>> grid;
    std::vector<std::size_t> lengths;
    for (const auto& x : cells) {
      grid[x.dim][x.query_length] = x.mean_percent;
      if (std::find(lengths.begin(), lengths.end(), x.query_length) == lengths.end()) {
        lengths.push_back(x.query_length);
      }
    }
    std::string out = "mean top-" + std::to_string(k) + " overlap (%) by dimension and query length\n";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%-8s", "dim");
    out += buf;
    for (auto L : lengths) {
      std::snprintf(buf, sizeof buf, " %8zu", L);
      out += buf;
    }
    out += '\n';
    for (const auto& [d, row] : grid) {
      std::snprintf(buf, sizeof buf, "%-8zu", d);
      out += buf;
      for (auto L : lengths) {
        std::snprintf(buf, sizeof buf, " %8.1f", row.at(L));
        out += buf;
      }
      out += '\n';
    }
    return out;
  }
};

/// Grid of mean overlap@k against full-dimensional exact search, one cell
/// per (PCA dimension, query length). `corpus` is N x D row-major pooled
/// embeddings; `queries` maps each query length to D-dimensional vectors.
inline SweepReport sweep_dimensions(std::span<const float> corpus, std::span<const index::ArticleId> ids,
                                    std::size_t full_dim,
                                    const std::map<std::size_t, std::vector<std::vector<float>>>& queries,
                                    const std::vector<std::size_t>& dims, std::size_t k) {
  require(!dims.empty() && !queries.empty(), ErrorKind::invalid_argument, "sweep: need dims and queries");
  for (auto d : dims) {
    require(d >= 1 && d <= full_dim, ErrorKind::invalid_argument,
            "sweep: dimension " + std::to_string(d) + " outside [1, " + std::to_string(full_dim) + "]");
  }
  const auto truth = index::VectorCollection::build("ground-truth", full_dim, corpus, ids,
                                                    std::vector<index::Metadata>(ids.size()), index::IndexKind::exact);
  SweepReport rep;
  rep.k = k;
  reduce::PcaOptions popts;
  popts.allow_rank_padding = true;
  for (auto d : dims) {
    auto reducer = std::make_shared<reduce::PcaReducer>(reduce::pca_fit(corpus, ids.size(), full_dim, d, popts));
    const auto space = reduce_collection("PCA-" + std::to_string(d), reducer, corpus, ids);
    for (const auto& [len, qs] : queries) {
      std::vector<QueryId> qids;
      for (std::size_t i = 0; i < qs.size(); ++i) qids.push_back("L" + std::to_string(len) + "-" + std::to_string(i));
      const auto table = compare_reducers(truth, {space}, qs, qids, k);
      const auto& r = table.reports.front();
      rep.cells.push_back({d, len, qs.size(), r.mean_percent, r.mean_jaccard});
    }
  }
  return rep;
}

/// Text-level sweep: embeds corpus texts and length-controlled query slices
/// with `embedder` and `pooling`, then runs the vector-level sweep.
inline SweepReport sweep_dimensions(const embed::Embedder& embedder, embed::Pooling pooling,
                                    const std::vector<std::string>& corpus_texts,
                                    const std::vector<std::string>& held_out, const std::vector<std::size_t>& dims,
                                    const std::vector<std::size_t>& lengths, std::size_t per_length, std::size_t k,
                                    std::uint64_t seed) {
  require(!corpus_texts.empty(), ErrorKind::empty_input, "sweep: empty corpus");
  const std::size_t D = embedder.dim();
  std::vector<float> corpus(corpus_texts.size() * D);
  std::vector<index::ArticleId> ids(corpus_texts.size());
  for (std::size_t i = 0; i < corpus_texts.size(); ++i) {
    ids[i] = i;
    const auto e = embedder.embed_text("content:" + std::to_string(i), corpus_texts[i], pooling,
                                       embed::SourceKind::content);
    std::copy(e.vector.begin(), e.vector.end(), corpus.begin() + static_cast<std::ptrdiff_t>(i * D));
  }
  std::map<std::size_t, std::vector<std::vector<float>>> queries;
  std::size_t n = 0;
  for (const auto& q : make_length_queries(held_out, lengths, per_length, seed)) {
    const auto e = embedder.embed_text("sweep:" + std::to_string(n++), q.text, pooling, embed::SourceKind::query);
    queries[q.length].push_back(e.vector);
  }
  return sweep_dimensions(corpus, ids, D, queries, dims, k);
}

}  // namespace ultra::eval
