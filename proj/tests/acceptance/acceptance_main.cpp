// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ultra/ultra.hpp"

using namespace ultra;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail.clear();
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& s) {
    if (!pass) return;
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int failures = 0;

void criterion(const std::string& name, std::optional<double> limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string timing = fmt("%.2f s", secs);
  if (limit_s) {
    timing += fmt(", limit %.0f s", *limit_s);
    if (secs >= *limit_s) {
      o.pass = false;
      o.detail += (o.detail.empty() ? "" : "; ") + std::string("over time limit");
    }
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %s: %s (%s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), timing.c_str());
  std::fflush(stdout);
}

std::vector<std::uint64_t> iota_ids(std::uint64_t from, std::size_t n) {
  std::vector<std::uint64_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = from + i;
  return v;
}

// ---------------------------------------------------------------------------

Outcome metric_reproduction() {
  Outcome o;
  const std::size_t tp[] = {9, 10, 4, 6, 8};
  const double expected[] = {0.9, 1.0, 0.4, 0.6, 0.8};
  eval::RetrievalRun run("table-4");
  eval::Qrels qrels;
  for (std::size_t q = 0; q < 5; ++q) {
    const auto qid = "Q" + std::to_string(q + 1);
    const auto list = iota_ids(100 * q, 10);
    for (std::size_t i = 0; i < 10; ++i) qrels.add(qid, list[i], i < tp[q] ? 1 : 0);
    run.add(qid, list);
  }
  const auto rep = eval::precision_at_k(run, qrels, 10);
  for (std::size_t q = 0; q < 5; ++q) {
    o.check(rep.per_query[q].precision == expected[q],
            "Q" + std::to_string(q + 1) + " precision " + fmt("%.17g", rep.per_query[q].precision));
  }
  // 37/50 is the nearest double to 0.74, so exact equality is the right test.
  o.check(rep.mean_precision == 0.74, "mean precision " + fmt("%.17g", rep.mean_precision));

  eval::RetrievalRun truth("truth"), pca("PCA");
  truth.add("Q1", iota_ids(0, 50));
  auto shared = iota_ids(7, 43);
  for (std::uint64_t x = 900; x < 907; ++x) shared.push_back(x);
  pca.add("Q1", shared);
  const auto cmp = eval::overlap_at_k(truth, pca, 50);
  const auto& row = cmp.rows.front();
  o.check(row.overlap == 43, "overlap " + std::to_string(row.overlap));
  o.check(std::abs(row.percent - 86.0) < 1e-12, "overlap percent " + fmt("%.6f", row.percent));
  o.check(std::abs(row.jaccard - 0.754) <= 0.0005, "Jaccard " + fmt("%.6f", row.jaccard));
  o.check(eval::jaccard_at_k(43, 50) == row.jaccard, "jaccard_at_k disagrees with the report");
  o.note("precisions 0.9 1.0 0.4 0.6 0.8, mean " + fmt("%.2f", rep.mean_precision) + "; overlap 43/50 = " +
         fmt("%.1f%%", row.percent) + ", Jaccard " + fmt("%.4f", row.jaccard));
  return o;
}

Outcome pooling_suite() {
  Outcome o;
  oracle::Rng rng(2024);
  double worst_mean = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t T = 1 + rng.index(64), w = 1 + rng.index(96);
    embed::TokenEmbeddingMatrix m(T, w, true);
    m.values = rng.gaussian_block(T, w);
    const auto mean = embed::pool(m, embed::Pooling::mean);
    const auto mx = embed::pool(m, embed::Pooling::max);
    const auto cls = embed::pool(m, embed::Pooling::cls);
    const auto ref_mean = oracle::column_mean(m.values, w, 0, T);
    const auto ref_max = oracle::column_max(m.values, w, 0, T);
    for (std::size_t c = 0; c < w; ++c) {
      worst_mean = std::max(worst_mean, std::abs(double(mean[c]) - ref_mean[c]));
      o.check(std::abs(double(mx[c]) - ref_max[c]) <= 1e-6, "max mismatch in trial " + std::to_string(trial));
      o.check(cls[c] == m.values[c], "cls is not row 0 in trial " + std::to_string(trial));
    }
  }
  o.check(worst_mean <= 1e-6, "mean pooling error " + fmt("%.3g", worst_mean));

  std::size_t plans = 0;
  const std::pair<std::size_t, std::size_t> configs[] = {{512, 50}, {128, 0}, {64, 63}, {10, 3}, {1, 0}};
  for (const auto& [l_max, overlap] : configs) {
    for (std::size_t T = 1; T <= 2000; ++T) {
      const auto plan = embed::plan_chunks(T, l_max, overlap);
      const auto why = oracle::check_windows(plan.windows, T, l_max, overlap);
      ++plans;
      if (!why.empty()) {
        o.check(false, "chunk plan T=" + std::to_string(T) + " l_max=" + std::to_string(l_max) + ": " + why);
        return o;
      }
    }
  }
  o.note("200 matrices, worst mean error " + fmt("%.2g", worst_mean) + "; " + std::to_string(plans) +
         " chunk plans over T=1..2000 valid");
  return o;
}

Outcome pca_suite() {
  Outcome o;
  oracle::Rng rng(808);
  double worst_ortho = 0.0, worst_iso = 0.0, tightest_margin = INFINITY;
  std::size_t comparisons = 0;
  for (int fixture = 0; fixture < 50; ++fixture) {
    const std::size_t n = 20, d = 8;
    // Anisotropic columns so components are well separated.
    Eigen::MatrixXd x(n, d);
    oracle::Mat rows(n, std::vector<double>(d));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        rows[i][j] = rng.gaussian() * (1.0 + double(j)) + rng.uniform(-1, 1);
        x(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
      }
    }
    const auto mean = oracle::column_means(rows);

    for (std::size_t k = 1; k <= d; ++k) {
      const auto model = reduce::pca_fit(x, k);
      oracle::Mat basis(k);
      for (std::size_t a = 0; a < k; ++a) {
        const auto ca = model.component(a);
        basis[a].assign(ca.begin(), ca.end());
        for (std::size_t b = 0; b < k; ++b) {
          const auto cb = model.component(b);
          double dot = 0.0;
          for (std::size_t i = 0; i < d; ++i) dot += ca[i] * cb[i];
          worst_ortho = std::max(worst_ortho, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
        // Sign rule: the largest-magnitude entry is non-negative.
        std::size_t arg = 0;
        for (std::size_t i = 1; i < d; ++i) {
          if (std::abs(ca[i]) > std::abs(ca[arg])) arg = i;
        }
        o.check(ca[arg] >= 0.0, "sign rule broken");
      }
      if (k < d) {
        const double pca_err = oracle::reconstruction_error(rows, mean, basis);
        double best = INFINITY;
        for (int t = 0; t < 1000; ++t) {
          best = std::min(best, oracle::reconstruction_error(rows, mean, oracle::random_orthonormal_rows(rng, k, d)));
        }
        ++comparisons;
        o.check(pca_err <= best * (1.0 + 1e-12),
                "PCA reconstruction " + fmt("%.6g", pca_err) + " worse than random " + fmt("%.6g", best));
        tightest_margin = std::min(tightest_margin, (best - pca_err) / best);
      } else {
        // Full rank: pairwise distances survive the projection.
        std::vector<std::vector<double>> y;
        for (const auto& r : rows) y.push_back(model.transform_exact(std::span<const double>(r)));
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = a + 1; b < n; ++b) {
            double dx = 0, dy = 0;
            for (std::size_t i = 0; i < d; ++i) dx += (rows[a][i] - rows[b][i]) * (rows[a][i] - rows[b][i]);
            for (std::size_t i = 0; i < d; ++i) dy += (y[a][i] - y[b][i]) * (y[a][i] - y[b][i]);
            worst_iso = std::max(worst_iso, std::abs(std::sqrt(dx) - std::sqrt(dy)));
          }
        }
      }
    }

    // Repeated fits, and a fit on the rows in another order, give the same axes.
    const auto first = reduce::pca_fit(x, 4);
    const auto second = reduce::pca_fit(x, 4);
    o.check(first == second, "repeated fits differ");
    Eigen::MatrixXd shuffled = x.colwise().reverse();
    const auto third = reduce::pca_fit(shuffled, 4);
    for (std::size_t i = 0; i < first.components.size(); ++i) {
      o.check(std::abs(first.components[i] - third.components[i]) < 1e-9, "sign flips under row reordering");
      if (!o.pass) return o;
    }
  }
  o.check(worst_ortho <= 1e-5, "orthonormality error " + fmt("%.3g", worst_ortho));
  o.check(worst_iso <= 1e-5, "isometry error " + fmt("%.3g", worst_iso));
  o.note("50 fixtures: orthonormality " + fmt("%.1e", worst_ortho) + ", isometry " + fmt("%.1e", worst_iso) + ", " +
         std::to_string(comparisons) + " reconstruction comparisons against 1000 random projections each, smallest margin " +
         fmt("%.2g", tightest_margin));
  return o;
}

Outcome exact_oracle() {
  Outcome o;
  oracle::Rng rng(31337);
  const std::size_t d = 64;
  std::size_t queries = 0, tie_fixtures = 0;
  for (int fixture = 0; fixture < 100; ++fixture) {
    const std::size_t n = 1 + rng.index(1000);
    auto rows = rng.gaussian_block(n, d);
    // Exact and scaled duplicates of earlier rows create score ties.
    const std::size_t dups = n > 1 ? rng.index(std::min<std::size_t>(n, 40)) : 0;
    for (std::size_t t = 0; t < dups; ++t) {
      const std::size_t src = rng.index(n), dst = rng.index(n);
      const float scale = t % 2 ? 1.0f : 2.0f;
      for (std::size_t i = 0; i < d; ++i) rows[dst * d + i] = rows[src * d + i] * scale;
    }
    tie_fixtures += dups > 0;
    std::vector<std::uint64_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng.engine());
    for (auto& id : ids) id = id * 3 + 1;
    const auto col = index::VectorCollection::build("oracle", d, rows, ids, std::vector<index::Metadata>(n),
                                                    index::IndexKind::exact);
    for (int q = 0; q < 5; ++q) {
      std::vector<float> query;
      if (q % 2 == 0) {
        const std::size_t r = rng.index(n);
        query.assign(rows.begin() + long(r * d), rows.begin() + long((r + 1) * d));
      } else {
        query = rng.gaussian_block(1, d);
      }
      const std::size_t k = 1 + rng.index(std::min<std::size_t>(n + 5, 60));
      std::vector<std::uint64_t> got;
      for (const auto& h : col.search_exact(query, k)) got.push_back(h.article_id);
      const auto want = oracle::scan_sort_topk(rows, ids, d, query, k);
      ++queries;
      if (got != want) {
        o.check(false, "fixture " + std::to_string(fixture) + " query " + std::to_string(q) + " differs");
        return o;
      }
    }
  }
  o.note("100 fixtures (" + std::to_string(tie_fixtures) + " with duplicated vectors), " + std::to_string(queries) +
         " queries identical to scan-sort");
  return o;
}

Outcome hnsw_recall() {
  Outcome o;
  oracle::Rng rng(10000);
  const std::size_t n = 10000, d = 64, k = 10;
  const auto rows = rng.gaussian_block(n, d);
  const auto ids = iota_ids(0, n);
  const auto col = index::VectorCollection::build("gauss", d, rows, ids, std::vector<index::Metadata>(n),
                                                  index::IndexKind::hnsw);
  o.check(col.size() == n && col.dim() == d, "collection shape");
  double total = 0.0, wide128 = 0.0, wide256 = 0.0;
  for (int q = 0; q < 100; ++q) {
    const auto query = rng.gaussian_block(1, d);
    std::set<std::uint64_t> truth;
    for (const auto& h : col.search_exact(query, k)) truth.insert(h.article_id);
    auto overlap = [&](const std::vector<index::SearchHit>& hits) {
      std::size_t hit = 0;
      for (const auto& h : hits) hit += truth.count(h.article_id);
      return double(hit) / double(k);
    };
    total += overlap(col.search(query, k));
    wide128 += overlap(col.search_hnsw(query, k, 128));
    wide256 += overlap(col.search_hnsw(query, k, 256));
  }
  const double recall = total / 100.0;
  const std::string context = " at ef_search=" + std::to_string(index::HnswParams{}.effective_ef(k)) +
                              " (ef_search=128 gives " + fmt("%.4f", wide128 / 100.0) + ", 256 gives " +
                              fmt("%.4f", wide256 / 100.0) + ")";
  o.check(recall >= 0.95, "mean overlap@10 " + fmt("%.4f", recall) + context);
  o.note("mean overlap@10 " + fmt("%.4f", recall) + context + " over 100 queries, 10000 x 64, m=16 efC=200");
  return o;
}

// Scalar count of UTF-8 text, counted from lead bytes.
std::size_t count_scalars(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

Outcome routing() {
  Outcome o;
  const auto cfg = router::EngineConfig::paper_profile();
  o.check(cfg.theta == 150, "theta");
  auto of_len = [](std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += (i % 6 == 5 && i + 1 < n) ? " " : "ب";
    return s;
  };
  const auto q149 = router::Query::make(of_len(149));
  const auto q150 = router::Query::make(of_len(150));
  o.check(q149.char_len == 149 && router::route(q149, cfg).name == router::PathwayKind::headline,
          "length 149 not routed to headline");
  o.check(q150.char_len == 150 && router::route(q150, cfg).name == router::PathwayKind::content,
          "length 150 not routed to content");

  // Random texts (no edge whitespace, already composed) against an
  // independent length count and a random threshold.
  oracle::Rng rng(150);
  const std::vector<std::string> pieces{"ب", "ک", "ہ", "ی", "۔", "،", "a", "Z", "7", "۳", " ", "😀", "ﷺ", "‌", "!"};
  std::size_t short_seen = 0, long_seen = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t len = 1 + rng.index(400);
    std::string s = "ب";
    while (count_scalars(s) < len) s += pieces[rng.index(pieces.size())];
    if (s.back() == ' ') s.back() = 'x';
    const std::size_t theta = 1 + rng.index(400);
    auto c = cfg;
    c.theta = theta;
    const auto q = router::Query::make(s);
    const bool is_short = count_scalars(s) < theta;
    const auto expected = is_short ? router::PathwayKind::headline : router::PathwayKind::content;
    (is_short ? short_seen : long_seen)++;
    if (router::route(q, c).name != expected || q.char_len != count_scalars(s)) {
      o.check(false, "trial " + std::to_string(t) + " routed against its length");
      return o;
    }
  }
  o.note("149 -> headline, 150 -> content; 1000 random queries (" + std::to_string(short_seen) + " short, " +
         std::to_string(long_seen) + " long) routed by length alone");
  return o;
}

// ---------------------------------------------------------------------------
// Shared synthetic corpus for the end-to-end and fidelity criteria.

struct Fixture {
  corpus::SyntheticCorpus gen{make_options()};
  std::vector<corpus::Article> articles = gen.articles();
  embed::Embedder embedder{std::make_shared<embed::SyntheticProvider>(embed::EmbedderSpec{}.seed)};
  std::vector<float> content_mean;  // N x 768, mean pooled

  static corpus::SyntheticCorpusOptions make_options() {
    corpus::SyntheticCorpusOptions o;
    o.articles = 5000;
    o.categories = 5;
    o.seed = 42;
    return o;
  }

  void embed_contents() {
    if (!content_mean.empty()) return;
    const std::size_t D = embedder.dim();
    content_mean.resize(articles.size() * D);
    for (std::size_t i = 0; i < articles.size(); ++i) {
      const auto v = embedder.embed_text("content:" + std::to_string(i), articles[i].content, embed::Pooling::mean,
                                         embed::SourceKind::content).vector;
      std::copy(v.begin(), v.end(), content_mean.begin() + long(i * D));
    }
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

Outcome end_to_end() {
  Outcome o;
  auto& f = fixture();
  const auto& arts = f.articles;
  o.check(arts.size() == 5000, "corpus size " + std::to_string(arts.size()));
  f.embed_contents();
  const std::size_t D = f.embedder.dim();

  // Fixture construction check on the pooled 768-d vectors of both pathways.
  std::vector<float> headline_cls(arts.size() * D);
  for (std::size_t i = 0; i < arts.size(); ++i) {
    const auto v = f.embedder.embed_text("headline:" + std::to_string(i), arts[i].headline, embed::Pooling::cls,
                                         embed::SourceKind::headline).vector;
    std::copy(v.begin(), v.end(), headline_cls.begin() + long(i * D));
  }
  oracle::Rng rng(5000);
  std::string cos_note;
  for (const auto* block : {&headline_cls, &f.content_mean}) {
    double same = 0, cross = 0;
    std::size_t ns = 0, nc = 0;
    while (ns < 2000 || nc < 2000) {
      const std::size_t a = rng.index(arts.size()), b = rng.index(arts.size());
      if (a == b) continue;
      const double c = oracle::cosine(block->data() + a * D, block->data() + b * D, D);
      if (arts[a].category == arts[b].category) {
        if (ns < 2000) same += c, ++ns;
      } else if (nc < 2000) {
        cross += c, ++nc;
      }
    }
    same /= double(ns);
    cross /= double(nc);
    const char* which = block == &headline_cls ? "headline/cls" : "content/mean";
    o.check(same >= 0.6, std::string(which) + " same-category cosine " + fmt("%.3f", same));
    o.check(cross <= 0.2, std::string(which) + " cross-category cosine " + fmt("%.3f", cross));
    cos_note += std::string(cos_note.empty() ? "" : ", ") + which + " cosine same " + fmt("%.2f", same) + " cross " +
                fmt("%.2f", cross);
  }

  const auto engine = router::build_engine(arts, router::EngineConfig::paper_profile());
  o.check(engine.short_pathway().collection.size() == 5000 && engine.long_pathway().collection.size() == 5000,
          "collection sizes");

  std::mt19937_64 qrng(777);
  const std::size_t cats = f.gen.options().categories;
  std::map<router::PathwayKind, std::pair<double, std::size_t>> precision;
  for (int kind = 0; kind < 2; ++kind) {
    for (std::size_t i = 0; i < 50; ++i) {
      const std::size_t c = i % cats;
      const auto text = kind == 0 ? f.gen.short_query(c, qrng) : f.gen.long_query(c, qrng);
      const auto want = kind == 0 ? router::PathwayKind::headline : router::PathwayKind::content;
      router::QueryOptions opts;
      opts.k = 10;
      const auto recs = engine.recommend(text, opts);
      o.check(recs.size() == 10, "short result list");
      std::size_t hit = 0;
      for (const auto& r : recs) {
        o.check(r.pathway_used == want, "query routed to the wrong pathway");
        hit += r.category == corpus::SyntheticCorpus::category_name(c);
      }
      precision[want].first += double(hit) / 10.0;
      precision[want].second += 1;
    }
  }
  const double p_short = precision[router::PathwayKind::headline].first / 50.0;
  const double p_long = precision[router::PathwayKind::content].first / 50.0;
  o.check(p_short >= 0.9, "headline pathway category-P@10 " + fmt("%.3f", p_short));
  o.check(p_long >= 0.9, "content pathway category-P@10 " + fmt("%.3f", p_long));

  std::size_t self_hits = 0;
  std::vector<std::uint64_t> misses;
  router::QueryOptions one;
  one.k = 1;
  for (const auto& a : arts) {
    const auto recs = engine.recommend(a.content, one);
    if (!recs.empty() && recs.front().article_id == a.id) {
      ++self_hits;
    } else if (misses.size() < 5) {
      misses.push_back(a.id);
    }
  }
  std::string miss_list;
  for (auto m : misses) miss_list += " " + std::to_string(m);
  o.check(self_hits == arts.size(),
          "self-retrieval rank-1 for " + std::to_string(self_hits) + "/5000 (first misses:" + miss_list + ")");
  o.note(cos_note + "; category-P@10 headline " + fmt("%.3f", p_short) + " content " + fmt("%.3f", p_long) +
         "; self-retrieval " + std::to_string(self_hits) + "/5000");
  return o;
}

Outcome reducer_fidelity() {
  Outcome o;
  auto& f = fixture();
  f.embed_contents();
  const std::size_t D = f.embedder.dim(), n = f.articles.size();
  const auto ids = iota_ids(0, n);
  const auto truth = index::VectorCollection::build("ground-truth", D, f.content_mean, ids,
                                                    std::vector<index::Metadata>(n), index::IndexKind::exact);
  auto pca = std::make_shared<reduce::PcaReducer>(reduce::pca_fit(f.content_mean, n, D, 128));
  std::vector<eval::ReducedSpace> spaces;
  spaces.push_back(eval::reduce_collection("identity", std::make_shared<reduce::IdentityReducer>(D), f.content_mean, ids));
  spaces.push_back(eval::reduce_collection("PCA-128", pca, f.content_mean, ids));
  spaces.push_back(eval::reduce_collection(
      "RP-128", std::make_shared<reduce::RandomProjectionReducer>(D, 128, 7, pca->model().mean), f.content_mean, ids));

  // Held-out queries: fresh long texts drawn from each category.
  std::mt19937_64 qrng(4242);
  std::vector<std::vector<float>> queries;
  std::vector<eval::QueryId> qids;
  for (std::size_t i = 0; i < 100; ++i) {
    const auto text = f.gen.long_query(i % f.gen.options().categories, qrng);
    queries.push_back(
        f.embedder.embed_text("held:" + std::to_string(i), text, embed::Pooling::mean, embed::SourceKind::query).vector);
    qids.push_back("H" + std::to_string(i + 1));
  }
  const auto table = eval::compare_reducers(truth, spaces, queries, qids, 50);
  const auto& id = table.reports[0];
  const auto& p = table.reports[1];
  const auto& r = table.reports[2];
  o.check(id.mean_jaccard == 1.0, "identity mean Jaccard " + fmt("%.6f", id.mean_jaccard));
  o.check(p.mean_overlap > r.mean_overlap,
          "PCA-128 mean overlap@50 " + fmt("%.2f", p.mean_overlap) + " not above random projection " +
              fmt("%.2f", r.mean_overlap));
  o.note("identity Jaccard " + fmt("%.3f", id.mean_jaccard) + "; mean overlap@50 PCA-128 " +
         fmt("%.2f", p.mean_overlap) + " (" + fmt("%.1f%%", p.mean_percent) + ") vs random projection " +
         fmt("%.2f", r.mean_overlap) + " (" + fmt("%.1f%%", r.mean_percent) + ")");
  return o;
}

}  // namespace

int main() {
  criterion("metric reproduction", 1.0, metric_reproduction);
  criterion("pooling and chunk plans", 10.0, pooling_suite);
  criterion("PCA suite", 60.0, pca_suite);
  criterion("exact index vs scan-sort oracle", 30.0, exact_oracle);
  criterion("HNSW recall", 120.0, hnsw_recall);
  criterion("routing", std::nullopt, routing);
  criterion("end-to-end synthetic retrieval", 300.0, end_to_end);
  criterion("reducer fidelity harness", std::nullopt, reducer_fidelity);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
