#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ultra/embed/synthetic.hpp"
#include "ultra/error.hpp"

namespace ultra::index {

struct HnswParams {
  std::uint32_t m = 16;
  std::uint32_t ef_construction = 200;
  std::uint32_t ef_search = 0;  // 0 selects max(4k, 64)
  std::uint64_t seed = 100;

  std::size_t effective_ef(std::size_t k) const {
    const std::size_t ef = ef_search != 0 ? ef_search : std::max<std::size_t>(4 * k, 64);
    return std::max(ef, k);
  }

  void validate() const {
    require(m >= 2, ErrorKind::invalid_argument, "hnsw: m must be >= 2");
    require(ef_construction >= 1, ErrorKind::invalid_argument, "hnsw: ef_construction must be >= 1");
  }

  friend bool operator==(const HnswParams&, const HnswParams&) = default;
};

namespace detail {

inline float dot(const float* a, const float* b, std::size_t n) noexcept {
  float s = 0.0f;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

struct Candidate {
  float dist;
  std::uint32_t id;
};

// Strict order on (distance, id) so every heap decision is deterministic.
struct Nearer {
  bool operator()(const Candidate& a, const Candidate& b) const noexcept {
    return a.dist < b.dist || (a.dist == b.dist && a.id < b.id);
  }
};
struct Farther {
  bool operator()(const Candidate& a, const Candidate& b) const noexcept { return Nearer{}(b, a); }
};

class VisitList {
 public:
  explicit VisitList(std::size_t n) : tags_(n, 0) {}
  void reset() {
    if (++epoch_ == 0) {
      std::fill(tags_.begin(), tags_.end(), 0);
      epoch_ = 1;
    }
  }
  bool first_visit(std::uint32_t id) {
    if (tags_[id] == epoch_) return false;
    tags_[id] = epoch_;
    return true;
  }

 private:
  std::vector<std::uint32_t> tags_;
  std::uint32_t epoch_ = 1;
};

}  // namespace detail

/// Hierarchical navigable small-world graph over unit vectors, distance
/// 1 - dot. Vectors are not owned: callers pass the same row-major block to
/// build() and search().
class HnswGraph {
 public:
  using Links = std::vector<std::uint32_t>;

  HnswGraph() = default;

  static HnswGraph build(std::span<const float> data, std::size_t dim, const HnswParams& params) {
    params.validate();
    require(dim > 0 && data.size() % dim == 0, ErrorKind::dimension_mismatch, "hnsw: bad data block");
    HnswGraph g;
    g.dim_ = dim;
    g.m_ = params.m;
    g.data_ = data.data();
    const std::size_t n = data.size() / dim;
    g.links_.resize(n);
    std::mt19937_64 rng(params.seed);
    const double ml = 1.0 / std::log(static_cast<double>(params.m));
    detail::VisitList visits(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int level = std::min(static_cast<int>(std::floor(-std::log(embed::unit_open(rng)) * ml)), 30);
      g.insert(static_cast<std::uint32_t>(i), level, params.ef_construction, visits);
    }
    g.data_ = nullptr;
    return g;
  }

  /// Rows of the (up to) k nearest stored vectors, nearest first.
  std::vector<std::uint32_t> search(std::span<const float> data, std::span<const float> query, std::size_t k,
                                    std::size_t ef) const {
    if (links_.empty() || k == 0) return {};
    Searcher s{data.data(), dim_, *this};
    detail::VisitList visits(links_.size());
    detail::Candidate ep{s.dist(query.data(), entry_), entry_};
    for (int lev = max_level_; lev > 0; --lev) ep = s.greedy(query.data(), ep, lev);
    auto found = s.layer(query.data(), {ep}, std::max(ef, k), 0, visits);
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < found.size() && i < k; ++i) out.push_back(found[i].id);
    return out;
  }

  std::size_t size() const noexcept { return links_.size(); }
  std::uint32_t entry_point() const noexcept { return entry_; }
  int max_level() const noexcept { return max_level_; }
  std::uint32_t m() const noexcept { return m_; }
  /// links()[node][level] lists neighbor rows.
  const std::vector<std::vector<Links>>& links() const noexcept { return links_; }

  static HnswGraph from_parts(std::size_t dim, std::uint32_t m, std::uint32_t entry, int max_level,
                              std::vector<std::vector<Links>> links) {
    HnswGraph g;
    g.dim_ = dim;
    g.m_ = m;
    g.entry_ = entry;
    g.max_level_ = max_level;
    g.links_ = std::move(links);
    const std::size_t n = g.links_.size();
    if (n == 0) return g;
    require(entry < n, ErrorKind::corrupt, "hnsw: entry point out of range");
    require(max_level >= 0 && g.links_[entry].size() == static_cast<std::size_t>(max_level) + 1,
            ErrorKind::corrupt, "hnsw: entry level mismatch");
    for (const auto& node : g.links_) {
      require(!node.empty() && node.size() <= static_cast<std::size_t>(max_level) + 1, ErrorKind::corrupt,
              "hnsw: node level out of range");
      for (const auto& level : node) {
        for (auto id : level) require(id < n, ErrorKind::corrupt, "hnsw: neighbor out of range");
      }
    }
    return g;
  }

  friend bool operator==(const HnswGraph& a, const HnswGraph& b) {
    return a.dim_ == b.dim_ && a.m_ == b.m_ && a.entry_ == b.entry_ && a.max_level_ == b.max_level_ &&
           a.links_ == b.links_;
  }

 private:
  struct Searcher {
    const float* data;
    std::size_t dim;
    const HnswGraph& g;

    float dist(const float* q, std::uint32_t id) const { return 1.0f - detail::dot(q, data + id * dim, dim); }
    float dist(std::uint32_t a, std::uint32_t b) const { return dist(data + a * dim, b); }

    detail::Candidate greedy(const float* q, detail::Candidate ep, int level) const {
      bool changed = true;
      while (changed) {
        changed = false;
        for (auto nb : g.links_[ep.id][static_cast<std::size_t>(level)]) {
          const detail::Candidate c{dist(q, nb), nb};
          if (detail::Nearer{}(c, ep)) {
            ep = c;
            changed = true;
          }
        }
      }
      return ep;
    }

    // Best-first beam search on one layer; result sorted nearest first.
    std::vector<detail::Candidate> layer(const float* q, const std::vector<detail::Candidate>& entries,
                                         std::size_t ef, int level, detail::VisitList& visits) const {
      visits.reset();
      std::priority_queue<detail::Candidate, std::vector<detail::Candidate>, detail::Farther> frontier;
      std::priority_queue<detail::Candidate, std::vector<detail::Candidate>, detail::Nearer> best;
      for (const auto& e : entries) {
        if (!visits.first_visit(e.id)) continue;
        frontier.push(e);
        best.push(e);
      }
      while (best.size() > ef) best.pop();
      while (!frontier.empty()) {
        const detail::Candidate c = frontier.top();
        if (best.size() >= ef && detail::Nearer{}(best.top(), c)) break;
        frontier.pop();
        const auto& node = g.links_[c.id];
        if (static_cast<std::size_t>(level) >= node.size()) continue;
        for (auto nb : node[static_cast<std::size_t>(level)]) {
          if (!visits.first_visit(nb)) continue;
          const detail::Candidate cand{dist(q, nb), nb};
          if (best.size() < ef || detail::Nearer{}(cand, best.top())) {
            frontier.push(cand);
            best.push(cand);
            if (best.size() > ef) best.pop();
          }
        }
      }
      std::vector<detail::Candidate> out(best.size());
      for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = best.top();
        best.pop();
      }
      return out;
    }

    // Neighbor-diversity heuristic: keep a candidate only if it is nearer to
    // the base than to every neighbor already kept. Input sorted nearest first.
    std::vector<detail::Candidate> select(const std::vector<detail::Candidate>& sorted, std::size_t m) const {
      if (sorted.size() <= m) return sorted;
      std::vector<detail::Candidate> kept;
      for (const auto& c : sorted) {
        if (kept.size() >= m) break;
        bool diverse = true;
        for (const auto& k : kept) {
          if (dist(c.id, k.id) < c.dist) {
            diverse = false;
            break;
          }
        }
        if (diverse) kept.push_back(c);
      }
      return kept;
    }
  };

  void insert(std::uint32_t id, int level, std::size_t ef_construction, detail::VisitList& visits) {
    links_[id].assign(static_cast<std::size_t>(level) + 1, {});
    if (id == 0) {
      entry_ = 0;
      max_level_ = level;
      return;
    }
    const Searcher s{data_, dim_, *this};
    const float* q = data_ + static_cast<std::size_t>(id) * dim_;
    detail::Candidate ep{s.dist(q, entry_), entry_};
    for (int lev = max_level_; lev > level; --lev) ep = s.greedy(q, ep, lev);

    std::vector<detail::Candidate> entries{ep};
    for (int lev = std::min(level, max_level_); lev >= 0; --lev) {
      auto found = s.layer(q, entries, ef_construction, lev, visits);
      const auto chosen = s.select(found, m_);
      auto& mine = links_[id][static_cast<std::size_t>(lev)];
      for (const auto& c : chosen) mine.push_back(c.id);
      const std::size_t cap = lev == 0 ? 2 * static_cast<std::size_t>(m_) : m_;
      for (const auto& c : chosen) connect(s, c.id, id, lev, cap);
      entries = std::move(found);
    }
    if (level > max_level_) {
      entry_ = id;
      max_level_ = level;
    }
  }

  void connect(const Searcher& s, std::uint32_t from, std::uint32_t to, int level, std::size_t cap) {
    auto& list = links_[from][static_cast<std::size_t>(level)];
    list.push_back(to);
    if (list.size() <= cap) return;
    std::vector<detail::Candidate> cands;
    cands.reserve(list.size());
    for (auto nb : list) cands.push_back({s.dist(from, nb), nb});
    std::sort(cands.begin(), cands.end(), detail::Nearer{});
    const auto kept = s.select(cands, cap);
    list.clear();
    for (const auto& c : kept) list.push_back(c.id);
  }

  std::size_t dim_ = 0;
  std::uint32_t m_ = 16;
  std::uint32_t entry_ = 0;
  int max_level_ = -1;
  std::vector<std::vector<Links>> links_;
  const float* data_ = nullptr;  // valid during build() only
};

}  // namespace ultra::index
