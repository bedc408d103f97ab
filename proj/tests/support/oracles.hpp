#pragma once

// Brute-force reference implementations the tests compare against. None of
// these call into the library's numeric code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double gaussian() { return normal_(gen_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_); }
  std::mt19937_64& engine() { return gen_; }

  std::vector<float> gaussian_block(std::size_t rows, std::size_t cols) {
    std::vector<float> v(rows * cols);
    for (auto& x : v) x = static_cast<float>(gaussian());
    return v;
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// --- pooling ---------------------------------------------------------------

inline std::vector<double> column_mean(const std::vector<float>& m, std::size_t width, std::size_t begin,
                                       std::size_t end) {
  std::vector<long double> acc(width, 0.0L);
  for (std::size_t r = begin; r < end; ++r)
    for (std::size_t c = 0; c < width; ++c) acc[c] += m[r * width + c];
  std::vector<double> out(width);
  for (std::size_t c = 0; c < width; ++c) out[c] = static_cast<double>(acc[c] / (end - begin));
  return out;
}

inline std::vector<double> column_max(const std::vector<float>& m, std::size_t width, std::size_t begin,
                                      std::size_t end) {
  std::vector<double> out(width, -INFINITY);
  for (std::size_t r = begin; r < end; ++r)
    for (std::size_t c = 0; c < width; ++c) out[c] = std::max(out[c], static_cast<double>(m[r * width + c]));
  return out;
}

/// Empty string when the windows satisfy the coverage and overlap rules,
/// otherwise a description of the first violation.
template <typename Windows>
std::string check_windows(const Windows& w, std::size_t T, std::size_t l_max, std::size_t overlap) {
  if (w.empty()) return "no windows";
  if (w.front().begin != 0) return "does not start at 0";
  if (w.back().end != T) return "does not end at T";
  std::vector<int> covered(T, 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].end <= w[i].begin) return "empty window";
    if (w[i].end - w[i].begin > l_max) return "window longer than l_max";
    for (std::size_t t = w[i].begin; t < w[i].end; ++t) covered[t] = 1;
    if (i + 1 < w.size()) {
      if (w[i].end - w[i].begin != l_max) return "non-final window shorter than l_max";
      if (w[i + 1].begin > w[i].end) return "gap between windows";
      const std::size_t shared = w[i].end - w[i + 1].begin;
      if (i + 2 < w.size() && shared != overlap) return "inner overlap differs from configured overlap";
      if (shared > overlap) return "final overlap exceeds configured overlap";
      if (w[i + 1].end <= w[i].end) return "window adds no new tokens";
    }
  }
  if (std::find(covered.begin(), covered.end(), 0) != covered.end()) return "token not covered";
  return {};
}

// --- similarity ------------------------------------------------------------

inline double cosine(const float* a, const float* b, std::size_t d) {
  long double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < d; ++i) {
    ab += static_cast<long double>(a[i]) * b[i];
    aa += static_cast<long double>(a[i]) * a[i];
    bb += static_cast<long double>(b[i]) * b[i];
  }
  return static_cast<double>(ab / std::sqrt(aa * bb));
}

/// Scan-and-sort top-k under the storage contract: rows are normalized in
/// double and kept as float32, the query is normalized in double, scores
/// are double dot products, ties go to the smaller id.
inline std::vector<std::uint64_t> scan_sort_topk(const std::vector<float>& rows, const std::vector<std::uint64_t>& ids,
                                                 std::size_t d, const std::vector<float>& query, std::size_t k) {
  const std::size_t n = ids.size();
  std::vector<float> stored(rows.size());
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0;
    for (std::size_t i = 0; i < d; ++i) s += static_cast<double>(rows[r * d + i]) * rows[r * d + i];
    s = std::sqrt(s);
    for (std::size_t i = 0; i < d; ++i) stored[r * d + i] = static_cast<float>(rows[r * d + i] / s);
  }
  double qn = 0;
  for (float x : query) qn += static_cast<double>(x) * x;
  qn = std::sqrt(qn);
  std::vector<double> q(d);
  for (std::size_t i = 0; i < d; ++i) q[i] = query[i] / qn;

  std::vector<std::pair<double, std::uint64_t>> scored;
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0;
    for (std::size_t i = 0; i < d; ++i) s += static_cast<double>(stored[r * d + i]) * q[i];
    scored.emplace_back(s, ids[r]);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < std::min(k, n); ++i) out.push_back(scored[i].second);
  return out;
}

// --- sets and metrics ------------------------------------------------------

inline double set_jaccard(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::set<std::uint64_t> sa(a.begin(), a.end()), sb(b.begin(), b.end()), u = sa;
  u.insert(sb.begin(), sb.end());
  std::size_t inter = 0;
  for (auto x : sa) inter += sb.count(x);
  return static_cast<double>(inter) / static_cast<double>(u.size());
}

// --- linear algebra (plain loops, row-major) -------------------------------

using Mat = std::vector<std::vector<double>>;

/// Rows are orthonormal basis vectors of a random `rows`-dimensional
/// subspace of R^cols (modified Gram-Schmidt on Gaussian draws).
inline Mat random_orthonormal_rows(Rng& rng, std::size_t rows, std::size_t cols) {
  Mat q;
  while (q.size() < rows) {
    std::vector<double> v(cols);
    for (auto& x : v) x = rng.gaussian();
    for (const auto& u : q) {
      double p = 0;
      for (std::size_t i = 0; i < cols; ++i) p += v[i] * u[i];
      for (std::size_t i = 0; i < cols; ++i) v[i] -= p * u[i];
    }
    double n = 0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    if (n < 1e-9) continue;
    for (auto& x : v) x /= n;
    q.push_back(std::move(v));
  }
  return q;
}

/// Sum of squared residuals of centered data after projecting onto the row
/// space of `basis` (rows assumed orthonormal).
inline double reconstruction_error(const Mat& data, const std::vector<double>& mean, const Mat& basis) {
  double err = 0;
  for (const auto& row : data) {
    std::vector<double> x(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) x[i] = row[i] - mean[i];
    std::vector<double> rec(row.size(), 0.0);
    for (const auto& b : basis) {
      double p = 0;
      for (std::size_t i = 0; i < x.size(); ++i) p += x[i] * b[i];
      for (std::size_t i = 0; i < x.size(); ++i) rec[i] += p * b[i];
    }
    for (std::size_t i = 0; i < x.size(); ++i) err += (x[i] - rec[i]) * (x[i] - rec[i]);
  }
  return err;
}

inline std::vector<double> column_means(const Mat& data) {
  std::vector<double> m(data.front().size(), 0.0);
  for (const auto& r : data)
    for (std::size_t i = 0; i < r.size(); ++i) m[i] += r[i];
  for (auto& x : m) x /= static_cast<double>(data.size());
  return m;
}

// --- files -----------------------------------------------------------------

/// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("ultra-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace oracle
