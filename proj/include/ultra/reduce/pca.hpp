#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ultra/error.hpp"
#include "ultra/io/binary.hpp"

namespace ultra::reduce {

/// Centering-only PCA projection. `components` holds d_prime orthonormal
/// rows (principal axes, descending variance), row-major d_prime x input_dim.
/// In each row the entry of largest magnitude is non-negative.
struct PcaModel {
  std::size_t input_dim = 0;
  std::size_t d_prime = 0;
  std::uint64_t trained_on = 0;
  double total_variance = 0.0;
  std::vector<double> mean;
  std::vector<double> eigenvalues;
  std::vector<double> components;

  std::span<const double> component(std::size_t j) const {
    return {components.data() + j * input_dim, input_dim};
  }

  template <typename T>
  std::vector<double> transform_exact(std::span<const T> v) const {
    require(v.size() == input_dim, ErrorKind::dimension_mismatch,
            "pca transform: vector has " + std::to_string(v.size()) + " entries, model expects " +
                std::to_string(input_dim));
    std::vector<double> centered(input_dim);
    for (std::size_t i = 0; i < input_dim; ++i) {
      require(std::isfinite(static_cast<double>(v[i])), ErrorKind::non_finite, "pca transform: non-finite input");
      centered[i] = static_cast<double>(v[i]) - mean[i];
    }
    std::vector<double> out(d_prime, 0.0);
    for (std::size_t j = 0; j < d_prime; ++j) {
      const double* row = components.data() + j * input_dim;
      double acc = 0.0;
      for (std::size_t i = 0; i < input_dim; ++i) acc += row[i] * centered[i];
      out[j] = acc;
    }
    return out;
  }

  std::vector<float> transform(std::span<const float> v) const {
    const auto exact = transform_exact(v);
    return {exact.begin(), exact.end()};
  }

  friend bool operator==(const PcaModel&, const PcaModel&) = default;
};

struct PcaOptions {
  /// Permit d_prime above the sample count; surplus axes are an orthonormal
  /// completion with eigenvalue 0.
  bool allow_rank_padding = false;
  /// Fit on a seeded random subset of at most this many rows (0 = all rows).
  std::size_t max_rows = 0;
  std::uint64_t subsample_seed = 0;
};

namespace detail {

inline void canonicalize_signs(Eigen::MatrixXd& components) {
  for (Eigen::Index j = 0; j < components.rows(); ++j) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < components.cols(); ++i) {
      const double a = std::abs(components(j, i));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (components(j, best) < 0.0) components.row(j) *= -1.0;
  }
}

}  // namespace detail

/// Fits PCA via the SVD of the centered data matrix. Eigenvalues are sample
/// variances (divisor N - 1) along each axis.
inline PcaModel pca_fit(const Eigen::MatrixXd& data_in, std::size_t d_prime, const PcaOptions& options = {}) {
  require(d_prime >= 1, ErrorKind::invalid_argument, "pca_fit: d_prime must be >= 1");
  require(data_in.cols() >= 1, ErrorKind::invalid_argument, "pca_fit: data has no columns");
  require(static_cast<std::size_t>(data_in.cols()) >= d_prime, ErrorKind::invalid_argument,
          "pca_fit: d_prime " + std::to_string(d_prime) + " exceeds input dimension " +
              std::to_string(data_in.cols()));
  require(data_in.allFinite(), ErrorKind::non_finite, "pca_fit: data contains non-finite values");

  Eigen::MatrixXd data;
  if (options.max_rows > 0 && static_cast<std::size_t>(data_in.rows()) > options.max_rows) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(data_in.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::mt19937_64 rng(options.subsample_seed);
    for (std::size_t i = 0; i < options.max_rows; ++i) {
      const std::size_t span = order.size() - i;
      std::swap(order[i], order[i + static_cast<std::size_t>(rng() % span)]);
    }
    order.resize(options.max_rows);
    std::sort(order.begin(), order.end());
    data.resize(static_cast<Eigen::Index>(order.size()), data_in.cols());
    for (std::size_t i = 0; i < order.size(); ++i) data.row(static_cast<Eigen::Index>(i)) = data_in.row(order[i]);
  } else {
    data = data_in;
  }

  const auto n = static_cast<std::size_t>(data.rows());
  require(n >= 2, ErrorKind::invalid_argument, "pca_fit: need at least 2 samples, got " + std::to_string(n));
  require(n >= d_prime || options.allow_rank_padding, ErrorKind::invalid_argument,
          "pca_fit: " + std::to_string(n) + " samples is fewer than d_prime " + std::to_string(d_prime));

  const Eigen::RowVectorXd mean = data.colwise().mean();
  data.rowwise() -= mean;
  const double denom = static_cast<double>(n - 1);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(data, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  Eigen::MatrixXd comps = svd.matrixV().leftCols(static_cast<Eigen::Index>(d_prime)).transpose();
  detail::canonicalize_signs(comps);

  PcaModel model;
  model.input_dim = static_cast<std::size_t>(data.cols());
  model.d_prime = d_prime;
  model.trained_on = n;
  model.total_variance = data.squaredNorm() / denom;
  model.mean.assign(mean.data(), mean.data() + mean.size());
  model.eigenvalues.resize(d_prime, 0.0);
  for (std::size_t j = 0; j < d_prime && j < static_cast<std::size_t>(sigma.size()); ++j) {
    model.eigenvalues[j] = sigma(static_cast<Eigen::Index>(j)) * sigma(static_cast<Eigen::Index>(j)) / denom;
  }
  model.components.resize(d_prime * model.input_dim);
  for (std::size_t j = 0; j < d_prime; ++j) {
    for (std::size_t i = 0; i < model.input_dim; ++i) {
      model.components[j * model.input_dim + i] = comps(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
    }
  }
  return model;
}

/// Row-major float samples (rows x cols).
inline PcaModel pca_fit(std::span<const float> data, std::size_t rows, std::size_t cols, std::size_t d_prime,
                        const PcaOptions& options = {}) {
  require(data.size() == rows * cols, ErrorKind::dimension_mismatch, "pca_fit: data size != rows * cols");
  using RowMajor = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> view(data.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  return pca_fit(Eigen::MatrixXd(view.cast<double>()), d_prime, options);
}

inline std::vector<double> explained_variance_ratio(const PcaModel& model) {
  require(model.d_prime >= 1, ErrorKind::invalid_argument, "explained_variance_ratio: model is not fitted");
  require(model.total_variance > 0.0, ErrorKind::invalid_argument,
          "explained_variance_ratio: training data has zero variance");
  std::vector<double> out(model.eigenvalues.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = model.eigenvalues[j] / model.total_variance;
  return out;
}

// Model file, little-endian:
//   "ULPC" | version u32 | d_prime u32 | input_dim u32 | N u64 |
//   total_variance f64 | mean f64[input_dim] | eigenvalues f64[d_prime] |
//   components f64[d_prime * input_dim] | crc32 u32
inline constexpr std::uint32_t kPcaFormatVersion = 1;

inline void save_model(const PcaModel& model, const std::filesystem::path& path) {
  io::BinaryWriter w;
  w.put_bytes("ULPC");
  w.put<std::uint32_t>(kPcaFormatVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.d_prime));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.input_dim));
  w.put<std::uint64_t>(model.trained_on);
  w.put<double>(model.total_variance);
  w.put_array<double>(model.mean);
  w.put_array<double>(model.eigenvalues);
  w.put_array<double>(model.components);
  w.put_checksum();
  w.save(path);
}

inline PcaModel load_model(const std::filesystem::path& path) {
  auto r = io::BinaryReader::from_file(path);
  r.expect_magic("ULPC", "PCA model");
  if (r.remaining() < 4) fail(ErrorKind::corrupt, "PCA model is truncated: " + path.string());
  const auto version = r.get<std::uint32_t>();
  require(version == kPcaFormatVersion, ErrorKind::version_mismatch,
          "unsupported PCA model version " + std::to_string(version) + ": " + path.string());
  r.verify_checksum();
  PcaModel m;
  m.d_prime = r.get<std::uint32_t>();
  m.input_dim = r.get<std::uint32_t>();
  m.trained_on = r.get<std::uint64_t>();
  m.total_variance = r.get<double>();
  m.mean = r.get_array<double>(m.input_dim);
  m.eigenvalues = r.get_array<double>(m.d_prime);
  m.components = r.get_array<double>(m.d_prime * m.input_dim);
  require(r.remaining() == 4, ErrorKind::corrupt, "PCA model has trailing bytes: " + path.string());
  return m;
}

}  // namespace ultra::reduce
