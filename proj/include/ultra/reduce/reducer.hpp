#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ultra/embed/synthetic.hpp"
#include "ultra/error.hpp"
#include "ultra/reduce/pca.hpp"

namespace ultra::reduce {

/// Any map from input_dim to output_dim floats. The fidelity harness in
/// ultra/eval scores implementations of this against full-dimensional search.
class Reducer {
 public:
  virtual ~Reducer() = default;
  virtual std::string name() const = 0;
  virtual std::size_t input_dim() const = 0;
  virtual std::size_t output_dim() const = 0;
  virtual std::vector<float> reduce(std::span<const float> v) const = 0;
};

class PcaReducer final : public Reducer {
 public:
  explicit PcaReducer(PcaModel model, std::string name = "PCA") : model_(std::move(model)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  std::size_t input_dim() const override { return model_.input_dim; }
  std::size_t output_dim() const override { return model_.d_prime; }
  std::vector<float> reduce(std::span<const float> v) const override { return model_.transform(v); }
  const PcaModel& model() const noexcept { return model_; }

 private:
  PcaModel model_;
  std::string name_;
};

class IdentityReducer final : public Reducer {
 public:
  explicit IdentityReducer(std::size_t dim) : dim_(dim) {}
  std::string name() const override { return "identity"; }
  std::size_t input_dim() const override { return dim_; }
  std::size_t output_dim() const override { return dim_; }
  std::vector<float> reduce(std::span<const float> v) const override {
    require(v.size() == dim_, ErrorKind::dimension_mismatch, "identity reducer: wrong input dimension");
    return {v.begin(), v.end()};
  }

 private:
  std::size_t dim_;
};

/// Seeded baseline: centers on `mean`, then projects onto output_dim random
/// orthonormal directions.
class RandomProjectionReducer final : public Reducer {
 public:
  RandomProjectionReducer(std::size_t input_dim, std::size_t output_dim, std::uint64_t seed,
                          std::vector<double> mean = {})
      : in_(input_dim), out_(output_dim), mean_(std::move(mean)) {
    require(output_dim >= 1 && output_dim <= input_dim, ErrorKind::invalid_argument,
            "random projection: output dim must be in [1, input dim]");
    if (mean_.empty()) mean_.assign(in_, 0.0);
    require(mean_.size() == in_, ErrorKind::dimension_mismatch, "random projection: mean has wrong size");
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd g(static_cast<Eigen::Index>(in_), static_cast<Eigen::Index>(out_));
    std::vector<double> draws(in_ * out_);
    embed::fill_gaussian(rng, draws);
    for (std::size_t i = 0; i < draws.size(); ++i) g(static_cast<Eigen::Index>(i % in_), static_cast<Eigen::Index>(i / in_)) = draws[i];
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    basis_ = (qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols())).transpose();
  }

  std::string name() const override { return "random-projection"; }
  std::size_t input_dim() const override { return in_; }
  std::size_t output_dim() const override { return out_; }

  std::vector<float> reduce(std::span<const float> v) const override {
    require(v.size() == in_, ErrorKind::dimension_mismatch, "random projection: wrong input dimension");
    Eigen::VectorXd x(static_cast<Eigen::Index>(in_));
    for (std::size_t i = 0; i < in_; ++i) x(static_cast<Eigen::Index>(i)) = static_cast<double>(v[i]) - mean_[i];
    const Eigen::VectorXd y = basis_ * x;
    return std::vector<float>(y.data(), y.data() + y.size());
  }

  /// output_dim x input_dim, orthonormal rows.
  const Eigen::MatrixXd& basis() const noexcept { return basis_; }

 private:
  std::size_t in_;
  std::size_t out_;
  std::vector<double> mean_;
  Eigen::MatrixXd basis_;
};

}  // namespace ultra::reduce
