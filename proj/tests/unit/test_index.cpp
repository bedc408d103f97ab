#include <gtest/gtest.h>

#include <fstream>

#include "oracles.hpp"
#include "ultra/index/collection.hpp"

using namespace ultra;
using namespace ultra::index;

namespace {

std::vector<ArticleId> seq_ids(std::size_t n, ArticleId start = 0) {
  std::vector<ArticleId> ids(n);
  std::iota(ids.begin(), ids.end(), start);
  return ids;
}

std::vector<Metadata> meta_for(const std::vector<ArticleId>& ids) {
  std::vector<Metadata> m;
  for (auto id : ids) m.push_back({{"headline", "سرخی " + std::to_string(id)}, {"category", "کھیل"}});
  return m;
}

VectorCollection make(const std::vector<float>& v, const std::vector<ArticleId>& ids, std::size_t dim,
                      IndexKind kind = IndexKind::exact, HnswParams p = {}) {
  return VectorCollection::build("content", dim, v, ids, meta_for(ids), kind, p);
}

std::vector<ArticleId> ids_of(const std::vector<SearchHit>& hits) {
  std::vector<ArticleId> out;
  for (const auto& h : hits) out.push_back(h.article_id);
  return out;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::invalid_argument;
}

double overlap(const std::vector<SearchHit>& a, const std::vector<SearchHit>& b) {
  std::set<ArticleId> s;
  for (const auto& h : a) s.insert(h.article_id);
  std::size_t o = 0;
  for (const auto& h : b) o += s.count(h.article_id);
  return static_cast<double>(o) / static_cast<double>(a.size());
}

}  // namespace

TEST(Collection, OrthonormalFixture) {
  const std::vector<float> v{1, 0, 0, 0, 1, 0, 0, 0, 1};
  for (auto kind : {IndexKind::exact, IndexKind::hnsw}) {
    const auto c = make(v, {10, 11, 12}, 3, kind);
    EXPECT_EQ(c.size(), 3u);
    const std::vector<float> q{0.2f, 0.9f, 0.5f};
    EXPECT_EQ(ids_of(c.search(q, 3)), (std::vector<ArticleId>{11, 12, 10}));
  }
}

TEST(Collection, BuildErrors) {
  const std::vector<float> v{1, 0, 0, 1};
  EXPECT_EQ(kind_of([&] { make(v, {4, 4}, 2); }), ErrorKind::invalid_argument);
  EXPECT_EQ(kind_of([&] { make({1, 0, 0, 0}, {1, 2}, 2); }), ErrorKind::invalid_argument);
  EXPECT_EQ(kind_of([&] { make({1, 0, 0}, {1, 2}, 2); }), ErrorKind::dimension_mismatch);
  EXPECT_EQ(kind_of([&] { make({1, NAN, 0, 1}, {1, 2}, 2); }), ErrorKind::non_finite);
  HnswParams bad;
  bad.m = 1;
  EXPECT_EQ(kind_of([&] { make(v, {1, 2}, 2, IndexKind::hnsw, bad); }), ErrorKind::invalid_argument);
}

TEST(Collection, RowsAreUnitNormalized) {
  oracle::Rng rng(1);
  const auto v = rng.gaussian_block(50, 7);
  const auto c = make(v, seq_ids(50), 7);
  for (std::size_t r = 0; r < 50; ++r) {
    double n = 0;
    for (float x : c.vector(r)) n += static_cast<double>(x) * x;
    EXPECT_NEAR(std::sqrt(n), 1.0, 1e-5);
  }
}

TEST(Collection, LargeBuildUnderBothKinds) {
  oracle::Rng rng(2);
  const std::size_t n = 3000, d = 32;
  const auto v = rng.gaussian_block(n, d);
  const auto ids = seq_ids(n);
  const auto exact = make(v, ids, d);
  const auto hnsw = make(v, ids, d, IndexKind::hnsw);
  EXPECT_EQ(exact.size(), n);
  EXPECT_EQ(hnsw.size(), n);
  EXPECT_EQ(exact.dim(), d);
  EXPECT_EQ(hnsw.dim(), d);
  ASSERT_TRUE(hnsw.graph().has_value());
  EXPECT_FALSE(exact.graph().has_value());
}

TEST(Search, SelfSimilarityIsOne) {
  oracle::Rng rng(3);
  const auto v = rng.gaussian_block(200, 16);
  for (auto kind : {IndexKind::exact, IndexKind::hnsw}) {
    const auto c = make(v, seq_ids(200, 1000), 16, kind);
    for (std::size_t r = 0; r < 200; r += 17) {
      const std::vector<float> q(v.begin() + r * 16, v.begin() + (r + 1) * 16);
      const auto hits = c.search(q, 1);
      ASSERT_EQ(hits.size(), 1u);
      EXPECT_EQ(hits[0].article_id, 1000 + r);
      EXPECT_NEAR(hits[0].score, 1.0, 1e-5);
      EXPECT_EQ(hits[0].rank, 1u);
    }
  }
}

TEST(Search, OrthogonalQueryFallsBackToIdOrder) {
  const std::vector<float> v{1, 0, 0, 0, 1, 0, 0.6f, 0.8f, 0, -1, 0, 0};
  const auto c = make(v, {5, 3, 9, 1}, 3);
  const auto hits = c.search(std::vector<float>{0, 0, 2}, 4);
  EXPECT_EQ(ids_of(hits), (std::vector<ArticleId>{1, 3, 5, 9}));
  for (std::size_t i = 0; i < hits.size(); ++i) {
    EXPECT_EQ(hits[i].score, 0.0);
    EXPECT_EQ(hits[i].rank, i + 1);
  }
}

TEST(Search, HandComputedCosines) {
  // id -> cosine with the query: 0 -> 0.5, 1 -> 0.7, 2 -> 0.1, 3 -> 0.3, 4 -> 0.9.
  const std::vector<double> cosines{0.5, 0.7, 0.1, 0.3, 0.9};
  std::vector<float> v;
  for (std::size_t i = 0; i < cosines.size(); ++i) {
    const double scale = 0.5 + static_cast<double>(i);
    v.push_back(static_cast<float>(scale * cosines[i]));
    v.push_back(static_cast<float>(scale * std::sqrt(1 - cosines[i] * cosines[i])));
  }
  const auto c = make(v, seq_ids(5), 2);
  const auto hits = c.search(std::vector<float>{3, 0}, 3);
  EXPECT_EQ(ids_of(hits), (std::vector<ArticleId>{4, 1, 0}));
  EXPECT_NEAR(hits[0].score, 0.9, 1e-6);
  EXPECT_NEAR(hits[1].score, 0.7, 1e-6);
  EXPECT_NEAR(hits[2].score, 0.5, 1e-6);
}

TEST(Search, ExactMatchesScanSortOracle) {
  oracle::Rng rng(4);
  for (int fixture = 0; fixture < 30; ++fixture) {
    const std::size_t n = 1 + rng.index(400), d = 1 + rng.index(24);
    auto v = rng.gaussian_block(n, d);
    // Exact duplicates and scaled copies produce genuine score ties.
    for (std::size_t dup = 0; dup < n / 5; ++dup) {
      const std::size_t from = rng.index(n), to = rng.index(n);
      const float s = rng.index(2) ? 1.0f : 2.0f;
      for (std::size_t i = 0; i < d; ++i) v[to * d + i] = s * v[from * d + i];
    }
    std::vector<ArticleId> ids = seq_ids(n, 50);
    std::shuffle(ids.begin(), ids.end(), rng.engine());
    const auto c = make(v, ids, d);
    for (int q = 0; q < 5; ++q) {
      std::vector<float> query(d);
      if (q == 0) {
        const std::size_t r = rng.index(n);
        std::copy(v.begin() + r * d, v.begin() + (r + 1) * d, query.begin());
      } else {
        for (auto& x : query) x = static_cast<float>(rng.gaussian());
      }
      const std::size_t k = 1 + rng.index(n + 5);
      EXPECT_EQ(ids_of(c.search(query, k)), oracle::scan_sort_topk(v, ids, d, query, k));
    }
  }
}

TEST(Search, ScoreIsCosineOfRawInputs) {
  oracle::Rng rng(5);
  const std::size_t n = 100, d = 12;
  auto v = rng.gaussian_block(n, d);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= static_cast<float>(1 + i % 7);
  const auto c = make(v, seq_ids(n), d);
  const auto query = rng.gaussian_block(1, d);
  for (const auto& h : c.search(query, n)) {
    EXPECT_NEAR(h.score, oracle::cosine(v.data() + h.article_id * d, query.data(), d), 1e-5);
  }
}

TEST(Search, KBeyondNAndErrors) {
  const std::vector<float> v{1, 0, 0, 1, 1, 1};
  for (auto kind : {IndexKind::exact, IndexKind::hnsw}) {
    const auto c = make(v, {1, 2, 3}, 2, kind);
    EXPECT_EQ(c.search(std::vector<float>{1, 0}, 8).size(), 3u);
    EXPECT_EQ(kind_of([&] { c.search(std::vector<float>{1, 0}, 0); }), ErrorKind::invalid_argument);
    EXPECT_EQ(kind_of([&] { c.search(std::vector<float>{1, 0, 0}, 1); }), ErrorKind::dimension_mismatch);
    EXPECT_EQ(kind_of([&] { c.search(std::vector<float>{0, 0}, 1); }), ErrorKind::invalid_argument);
    EXPECT_EQ(kind_of([&] { c.search(std::vector<float>{INFINITY, 0}, 1); }), ErrorKind::non_finite);
  }
  const auto empty = VectorCollection::build("headline", 2, {}, {}, {}, IndexKind::exact);
  EXPECT_EQ(kind_of([&] { search_topk(empty, std::vector<float>{1, 0}, 1); }), ErrorKind::empty_input);
}

TEST(Search, HnswReturnsEveryRowWhenAskedFor) {
  oracle::Rng rng(6);
  const std::size_t n = 500, d = 8;
  const auto v = rng.gaussian_block(n, d);
  const auto c = make(v, seq_ids(n), d, IndexKind::hnsw);
  const auto q = rng.gaussian_block(1, d);
  const auto hits = c.search(q, n);
  EXPECT_EQ(ids_of(hits), oracle::scan_sort_topk(v, seq_ids(n), d, q, n));
}

TEST(Search, RecallGrowsWithEfSearch) {
  oracle::Rng rng(7);
  const std::size_t n = 4000, d = 48;
  const auto v = rng.gaussian_block(n, d);
  HnswParams p;
  p.m = 4;
  p.ef_construction = 16;
  const auto c = make(v, seq_ids(n), d, IndexKind::hnsw, p);
  std::vector<std::vector<float>> queries;
  for (int i = 0; i < 100; ++i) queries.push_back(rng.gaussian_block(1, d));
  double previous = -1.0, first = -1.0;
  for (std::size_t ef : {10, 20, 40, 80, 160, 320}) {
    double total = 0;
    for (const auto& q : queries) total += overlap(c.search_exact(q, 10), c.search_hnsw(q, 10, ef));
    const double mean = total / static_cast<double>(queries.size());
    EXPECT_GE(mean, previous) << "ef=" << ef;
    if (first < 0) first = mean;
    previous = mean;
  }
  // The sparse graph makes small ef visibly lossy, so the sweep has signal.
  EXPECT_GT(previous, first + 0.1);
}

TEST(Persist, RoundTripPreservesEverything) {
  oracle::TempDir dir;
  oracle::Rng rng(8);
  const std::size_t n = 300, d = 10;
  const auto v = rng.gaussian_block(n, d);
  std::vector<ArticleId> ids = seq_ids(n, 7);
  std::shuffle(ids.begin(), ids.end(), rng.engine());
  for (auto kind : {IndexKind::exact, IndexKind::hnsw}) {
    auto meta = meta_for(ids);
    meta[3]["content"] = "لمبا متن\nدوسری سطر \"اقتباس\"";
    const auto c = VectorCollection::build("headline", d, v, ids, meta, kind);
    const auto path = dir / (std::string(to_string(kind)) + ".ulvc");
    c.persist(path);
    const auto back = VectorCollection::open(path);
    EXPECT_EQ(back.name(), "headline");
    EXPECT_EQ(back.kind(), kind);
    EXPECT_EQ(back.params(), c.params());
    EXPECT_EQ(back.ids(), c.ids());
    ASSERT_EQ(back.vectors().size(), c.vectors().size());
    EXPECT_EQ(std::memcmp(back.vectors().data(), c.vectors().data(), c.vectors().size() * sizeof(float)), 0);
    for (std::size_t r = 0; r < n; ++r) EXPECT_EQ(back.metadata(r), c.metadata(r));
    EXPECT_EQ(back.graph().has_value(), kind == IndexKind::hnsw);
    if (kind == IndexKind::hnsw) {
      EXPECT_TRUE(*back.graph() == *c.graph());
    }
    for (int q = 0; q < 20; ++q) {
      const auto query = rng.gaussian_block(1, d);
      EXPECT_EQ(back.search(query, 15), c.search(query, 15));
    }
  }
}

TEST(Persist, SingleVectorStore) {
  oracle::TempDir dir;
  make({0.3f, 0.4f}, {42}, 2).persist(dir / "one.ulvc");
  const auto c = VectorCollection::open(dir / "one.ulvc");
  const auto hits = c.search(std::vector<float>{1, 1}, 5);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].article_id, 42u);
}

TEST(Persist, DetectsDamage) {
  oracle::TempDir dir;
  oracle::Rng rng(9);
  make(rng.gaussian_block(20, 4), seq_ids(20), 4, IndexKind::hnsw).persist(dir / "c.ulvc");
  const auto size = std::filesystem::file_size(dir / "c.ulvc");
  auto damaged = [&](const std::string& name, std::size_t offset, const std::string& bytes) {
    std::filesystem::copy_file(dir / "c.ulvc", dir / name);
    std::fstream f(dir / name, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(static_cast<std::streamoff>(offset));
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    return dir / name;
  };
  EXPECT_EQ(kind_of([&] { VectorCollection::open(damaged("crc.ulvc", size - 2, "\x01")); }), ErrorKind::corrupt);
  EXPECT_EQ(kind_of([&] { VectorCollection::open(damaged("body.ulvc", 80, "\x7f\x7f")); }), ErrorKind::corrupt);
  EXPECT_EQ(kind_of([&] { VectorCollection::open(damaged("magic.ulvc", 0, "XLVC")); }), ErrorKind::format);
  EXPECT_EQ(kind_of([&] { VectorCollection::open(damaged("ver.ulvc", 4, std::string("\x02\0\0\0", 4))); }),
            ErrorKind::version_mismatch);
  EXPECT_EQ(kind_of([&] { VectorCollection::open(dir / "absent.ulvc"); }), ErrorKind::not_found);
}

TEST(Params, JsonAndDefaults) {
  HnswParams p;
  EXPECT_EQ(p.effective_ef(10), 64u);
  EXPECT_EQ(p.effective_ef(30), 120u);
  p.ef_search = 5;
  EXPECT_EQ(p.effective_ef(10), 10u);
  p.m = 24;
  const auto back = nlohmann::json(p).get<HnswParams>();
  EXPECT_EQ(back, p);
  EXPECT_EQ(parse_index_kind("hnsw"), IndexKind::hnsw);
  EXPECT_THROW(parse_index_kind("faiss"), Error);
}
