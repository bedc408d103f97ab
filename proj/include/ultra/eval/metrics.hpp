#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ultra/error.hpp"
#include "ultra/text/utf8.hpp"

namespace ultra::eval {

using QueryId = std::string;
using ArticleId = std::uint64_t;

/// Binary judgments. Anything not judged counts as irrelevant.
class Qrels {
 public:
  void add(const QueryId& q, ArticleId a, int relevance) {
    require(relevance == 0 || relevance == 1, ErrorKind::invalid_argument,
            "qrels: relevance must be 0 or 1, got " + std::to_string(relevance));
    judgments_[{q, a}] = relevance;
    queries_.insert(q);
  }

  bool relevant(const QueryId& q, ArticleId a) const {
    auto it = judgments_.find({q, a});
    return it != judgments_.end() && it->second == 1;
  }
  bool has_query(const QueryId& q) const { return queries_.count(q) != 0; }
  std::size_t size() const noexcept { return judgments_.size(); }
  const std::set<QueryId>& queries() const noexcept { return queries_; }

 private:
  std::map<std::pair<QueryId, ArticleId>, int> judgments_;
  std::set<QueryId> queries_;
};

/// Ranked article lists per query, in insertion order.
class RetrievalRun {
 public:
  RetrievalRun() = default;
  explicit RetrievalRun(std::string label) : label_(std::move(label)) {}

  void add(const QueryId& q, std::vector<ArticleId> ranked) {
    require(lists_.find(q) == lists_.end(), ErrorKind::invalid_argument, "run: duplicate query id '" + q + "'");
    std::unordered_set<ArticleId> seen;
    for (auto id : ranked) {
      require(seen.insert(id).second, ErrorKind::invalid_argument,
              "run: article " + std::to_string(id) + " listed twice for query '" + q + "'");
    }
    order_.push_back(q);
    lists_.emplace(q, std::move(ranked));
  }

  const std::string& label() const noexcept { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }
  const std::vector<QueryId>& queries() const noexcept { return order_; }
  const std::vector<ArticleId>& list(const QueryId& q) const {
    auto it = lists_.find(q);
    require(it != lists_.end(), ErrorKind::not_found, "run: no query '" + q + "'");
    return it->second;
  }
  bool contains(const QueryId& q) const { return lists_.count(q) != 0; }
  std::size_t size() const noexcept { return order_.size(); }

 private:
  std::string label_;
  std::vector<QueryId> order_;
  std::map<QueryId, std::vector<ArticleId>> lists_;
};

struct QueryPrecision {
  QueryId query_id;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t padded = 0;  // slots missing from a list shorter than k
  double precision = 0.0;
};

struct MetricReport {
  std::size_t k = 0;
  std::size_t n = 0;
  std::vector<QueryPrecision> per_query;
  double mean_precision = 0.0;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& q : per_query) {
      rows.push_back({{"query_id", q.query_id},
                      {"tp", q.tp},
                      {"fp", q.fp},
                      {"padded", q.padded},
                      {"precision", q.precision}});
    }
    return {{"k", k}, {"n", n}, {"mean_precision", mean_precision}, {"per_query", rows}, {"warnings", warnings}};
  }

  std::string to_table() const {
    std::ostringstream out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-12s %4s %4s  %s\n", "Query", "TP", "FP", "Precision");
    out << buf;
    for (const auto& q : per_query) {
      std::snprintf(buf, sizeof buf, "%-12s %4zu %4zu  %.4g (%.4g%%)\n", q.query_id.c_str(), q.tp, q.fp,
                    q.precision, 100.0 * q.precision);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%-12s %4s %4s  %.4g (%.4g%%)\n", "Mean", "-", "-", mean_precision,
                  100.0 * mean_precision);
    out << buf;
    return out.str();
  }
};

/// Precision@k per query and its mean over the run's queries. Lists shorter
/// than k are padded with irrelevant slots; queries absent from the qrels
/// are scored as all-irrelevant with a warning.
inline MetricReport precision_at_k(const RetrievalRun& run, const Qrels& qrels, std::size_t k) {
  require(k >= 1, ErrorKind::invalid_argument, "precision_at_k: k must be >= 1");
  require(run.size() > 0, ErrorKind::empty_input, "precision_at_k: run has no queries");
  MetricReport rep;
  rep.k = k;
  std::size_t tp_total = 0;
  for (const auto& q : run.queries()) {
    const auto& list = run.list(q);
    QueryPrecision p;
    p.query_id = q;
    if (!qrels.has_query(q)) rep.warnings.push_back("query '" + q + "' has no judgments; counted as irrelevant");
    const std::size_t depth = std::min(k, list.size());
    for (std::size_t i = 0; i < depth; ++i) p.tp += qrels.relevant(q, list[i]) ? 1 : 0;
    p.padded = k - depth;
    if (p.padded > 0) {
      rep.warnings.push_back("query '" + q + "' has " + std::to_string(list.size()) + " results; padded to " +
                             std::to_string(k));
    }
    p.fp = k - p.tp;
    p.precision = static_cast<double>(p.tp) / static_cast<double>(k);
    tp_total += p.tp;
    rep.per_query.push_back(std::move(p));
  }
  rep.n = rep.per_query.size();
  // Every per-query precision shares the denominator k, so the arithmetic
  // mean is the pooled count over k*N; computing it that way avoids summing
  // rounded fractions.
  rep.mean_precision = static_cast<double>(tp_total) / (static_cast<double>(k) * static_cast<double>(rep.n));
  return rep;
}

inline double jaccard_at_k(std::size_t overlap, std::size_t k) {
  require(k >= 1, ErrorKind::invalid_argument, "jaccard_at_k: k must be >= 1");
  require(overlap <= k, ErrorKind::invalid_argument,
          "jaccard_at_k: overlap " + std::to_string(overlap) + " exceeds k " + std::to_string(k));
  return static_cast<double>(overlap) / static_cast<double>(2 * k - overlap);
}

struct QueryOverlap {
  QueryId query_id;
  std::size_t overlap = 0;
  double percent = 0.0;
  double jaccard = 0.0;
};

struct ComparisonReport {
  std::string label;
  std::size_t k = 0;
  std::vector<QueryOverlap> rows;
  double mean_overlap = 0.0;  // count
  double mean_percent = 0.0;
  double mean_jaccard = 0.0;

  nlohmann::json to_json() const {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& q : rows) {
      r.push_back({{"query_id", q.query_id}, {"overlap", q.overlap}, {"percent", q.percent}, {"jaccard", q.jaccard}});
    }
    return {{"label", label},       {"k", k},
            {"per_query", r},       {"mean_overlap", mean_overlap},
            {"mean_percent", mean_percent}, {"mean_jaccard", mean_jaccard}};
  }
};

/// |A_q ∩ B_q| over the top k of each list, per query of `a`.
inline ComparisonReport overlap_at_k(const RetrievalRun& a, const RetrievalRun& b, std::size_t k) {
  require(k >= 1, ErrorKind::invalid_argument, "overlap_at_k: k must be >= 1");
  require(a.size() > 0, ErrorKind::empty_input, "overlap_at_k: runs have no queries");
  require(a.size() == b.size(), ErrorKind::invalid_argument, "overlap_at_k: runs cover different query sets");
  ComparisonReport rep;
  rep.label = b.label();
  rep.k = k;
  for (const auto& q : a.queries()) {
    require(b.contains(q), ErrorKind::invalid_argument, "overlap_at_k: query '" + q + "' missing from second run");
    const auto& la = a.list(q);
    const auto& lb = b.list(q);
    require(la.size() >= k && lb.size() >= k, ErrorKind::invalid_argument,
            "overlap_at_k: query '" + q + "' has fewer than k results");
    std::unordered_set<ArticleId> top_a(la.begin(), la.begin() + static_cast<std::ptrdiff_t>(k));
    QueryOverlap row;
    row.query_id = q;
    for (std::size_t i = 0; i < k; ++i) row.overlap += top_a.count(lb[i]);
    row.percent = 100.0 * static_cast<double>(row.overlap) / static_cast<double>(k);
    row.jaccard = jaccard_at_k(row.overlap, k);
    rep.rows.push_back(row);
  }
  const double n = static_cast<double>(rep.rows.size());
  std::size_t total = 0;
  double jsum = 0.0;
  for (const auto& r : rep.rows) {
    total += r.overlap;
    jsum += r.jaccard;
  }
  rep.mean_overlap = static_cast<double>(total) / n;
  rep.mean_percent = 100.0 * static_cast<double>(total) / (n * static_cast<double>(k));
  rep.mean_jaccard = jsum / n;
  return rep;
}

inline double mean_jaccard(const ComparisonReport& r) { return r.mean_jaccard; }

/// Several candidate systems scored against one ground truth, laid out as
/// Query | overlap % per system | overlap count per system | Jaccard per
/// system, with a closing Mean row.
struct ComparisonTable {
  std::size_t k = 0;
  std::vector<ComparisonReport> reports;

  void check() const {
    require(!reports.empty(), ErrorKind::empty_input, "comparison table has no systems");
    for (const auto& r : reports) {
      require(r.rows.size() == reports.front().rows.size() && r.k == k, ErrorKind::invalid_argument,
              "comparison table: systems disagree on queries or k");
    }
  }

  std::string to_csv() const {
    check();
    std::ostringstream out;
    out << "query";
    for (const char* group : {"overlap_pct_", "overlap_count_", "jaccard_"}) {
      for (const auto& r : reports) out << ',' << group << r.label;
    }
    out << '\n';
    char buf[64];
    auto row = [&](const std::string& name, auto pct, auto count, auto jac) {
      out << name;
      for (const auto& r : reports) out << ',' << pct(r);
      for (const auto& r : reports) out << ',' << count(r);
      for (const auto& r : reports) out << ',' << jac(r);
      out << '\n';
    };
    auto fmt = [&](const char* f, double v) {
      std::snprintf(buf, sizeof buf, f, v);
      return std::string(buf);
    };
    for (std::size_t i = 0; i < reports.front().rows.size(); ++i) {
      row(
          reports.front().rows[i].query_id, [&](const ComparisonReport& r) { return fmt("%.1f", r.rows[i].percent); },
          [&](const ComparisonReport& r) { return std::to_string(r.rows[i].overlap); },
          [&](const ComparisonReport& r) { return fmt("%.3f", r.rows[i].jaccard); });
    }
    row(
        "Mean", [&](const ComparisonReport& r) { return fmt("%.2f", r.mean_percent); },
        [&](const ComparisonReport& r) { return fmt("%.2f", r.mean_overlap); },
        [&](const ComparisonReport& r) { return fmt("%.3f", r.mean_jaccard); });
    return out.str();
  }

  std::string to_table() const {
    check();
    std::ostringstream out;
    char buf[64];
    out << "Top-" << k << " overlap with ground truth\n";
    std::snprintf(buf, sizeof buf, "%-10s", "Query");
    out << buf;
    for (const char* group : {"%", "#", "J"}) {
      for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf, " %12s", (r.label + " " + group).c_str());
        out << buf;
      }
    }
    out << '\n';
    auto line = [&](const std::string& name, auto pct, auto count, auto jac) {
      std::snprintf(buf, sizeof buf, "%-10s", name.c_str());
      out << buf;
      for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf, " %11.1f%%", pct(r));
        out << buf;
      }
      for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf, " %12s", count(r).c_str());
        out << buf;
      }
      for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf, " %12.3f", jac(r));
        out << buf;
      }
      out << '\n';
    };
    for (std::size_t i = 0; i < reports.front().rows.size(); ++i) {
      line(
          reports.front().rows[i].query_id, [&](const ComparisonReport& r) { return r.rows[i].percent; },
          [&](const ComparisonReport& r) { return std::to_string(r.rows[i].overlap); },
          [&](const ComparisonReport& r) { return r.rows[i].jaccard; });
    }
    line(
        "Mean", [&](const ComparisonReport& r) { return r.mean_percent; },
        [&](const ComparisonReport& r) {
          std::snprintf(buf, sizeof buf, "%.2f", r.mean_overlap);
          return std::string(buf);
        },
        [&](const ComparisonReport& r) { return r.mean_jaccard; });
    return out.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json systems = nlohmann::json::array();
    for (const auto& r : reports) systems.push_back(r.to_json());
    return {{"k", k}, {"systems", systems}};
  }
};

// ---------------------------------------------------------------------------
// Files

/// Tab-separated query_id, article_id, relevance. Blank lines, '#' comments
/// and a leading "query_id" header are skipped.
inline Qrels read_qrels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::not_found, "cannot open qrels file: " + path.string());
  Qrels q;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = utf8::trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(t);
    for (std::string cell; std::getline(ss, cell, '\t');) f.push_back(utf8::trim(cell));
    if (lineno == 1 && !f.empty() && f[0] == "query_id") continue;
    const auto where = path.string() + ":" + std::to_string(lineno);
    require(f.size() == 3, ErrorKind::format, "qrels " + where + ": expected 3 tab-separated fields");
    try {
      std::size_t used = 0;
      const auto article = std::stoull(f[1], &used);
      require(used == f[1].size(), ErrorKind::format, "qrels " + where + ": bad article id");
      const int rel = std::stoi(f[2], &used);
      require(used == f[2].size(), ErrorKind::format, "qrels " + where + ": bad relevance");
      q.add(f[0], article, rel);
    } catch (const std::logic_error&) {
      fail(ErrorKind::format, "qrels " + where + ": non-numeric field");
    }
  }
  return q;
}

inline void write_qrels(const std::filesystem::path& path, const std::vector<std::tuple<QueryId, ArticleId, int>>& rows) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << "query_id\tarticle_id\trelevance\n";
  for (const auto& [q, a, r] : rows) out << q << '\t' << a << '\t' << r << '\n';
}

/// One JSON object per line: {"query_id": ..., "ranked_ids": [...]}.
inline RetrievalRun read_run(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::not_found, "cannot open run file: " + path.string());
  RetrievalRun run(path.stem().string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (utf8::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (j.contains("system")) run.set_label(j.at("system").get<std::string>());
      run.add(j.at("query_id").get<std::string>(), j.at("ranked_ids").get<std::vector<ArticleId>>());
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::format, "run " + path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return run;
}

inline void write_run(const std::filesystem::path& path, const RetrievalRun& run) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  for (const auto& q : run.queries()) {
    nlohmann::json j = {{"query_id", q}, {"ranked_ids", run.list(q)}};
    if (!run.label().empty()) j["system"] = run.label();
    out << j.dump() << '\n';
  }
}

}  // namespace ultra::eval
