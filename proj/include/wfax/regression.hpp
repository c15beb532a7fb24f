#pragma once

// Kernel ridge regression with an RBF kernel, used as the configuration
// abstraction map from oracle state space R^d to hypothesis configuration
// space R^k. With ridge = noise variance this is also the Gaussian-process
// posterior mean.

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "wfax/error.hpp"
#include "wfax/numerics.hpp"

namespace wfax {

struct RbfKernel {
  double length_scale = 1.0;

  double operator()(const Vector& x, const Vector& y) const {
    if (x.size() != y.size()) throw DimensionError("rbf_kernel: input dimensions differ");
    if (!(length_scale > 0.0)) throw NumericError("rbf_kernel: length scale must be positive");
    return std::exp(-(x - y).squaredNorm() / (2.0 * length_scale * length_scale));
  }

  /// Gram matrix between the rows of a and the rows of b.
  Matrix gram(const Matrix& a, const Matrix& b) const {
    if (a.cols() != b.cols()) throw DimensionError("rbf_kernel: input dimensions differ");
    const Vector an = a.rowwise().squaredNorm();
    const Vector bn = b.rowwise().squaredNorm();
    Matrix d2 = (-2.0 * a * b.transpose()).colwise() + an;
    d2.rowwise() += bn.transpose();
    const double s = -1.0 / (2.0 * length_scale * length_scale);
    return (d2.array().max(0.0) * s).exp().matrix();
  }
};

struct RegressorSettings {
  double length_scale = 1.0;
  double ridge = 1e-10;
};

class Regressor {
 public:
  /// Unfitted; predict() throws until fit() or constant() is used.
  Regressor() = default;

  /// p(x) = value for every x.
  static Regressor constant(Vector value) {
    Regressor r;
    r.constant_ = std::move(value);
    r.k_ = static_cast<std::size_t>(r.constant_->size());
    r.fitted_ = true;
    return r;
  }

  /// Solves (K + ridge I) W = Y through the symmetric eigendecomposition of
  /// K + ridge I (its singular value decomposition up to signs). Rows of xs
  /// are inputs, rows of ys the matching targets.
  static Regressor fit(const Matrix& xs, const Matrix& ys, RbfKernel kernel, double ridge) {
    if (xs.rows() < 1) throw DimensionError("regression fit: needs at least one training pair");
    if (xs.rows() != ys.rows()) throw DimensionError("regression fit: inputs and targets differ in count");
    if (!(ridge >= 0.0)) throw NumericError("regression fit: ridge must be nonnegative");
    require_finite(xs, "regression inputs");
    require_finite(ys, "regression targets");
    if (!(kernel.length_scale > 0.0)) throw NumericError("rbf_kernel: length scale must be positive");

    Matrix k = kernel.gram(xs, xs);
    k.diagonal().array() += ridge;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(k);
    if (eig.info() != Eigen::Success) throw NumericError("regression fit: eigendecomposition failed");
    const Vector& ev = eig.eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    const double floor = top * static_cast<double>(xs.rows()) * std::numeric_limits<double>::epsilon();
    Vector inv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (std::abs(ev[i]) <= floor) {
        if (ridge == 0.0)
          throw NumericError("regression fit: kernel matrix is singular (duplicate inputs?); use ridge > 0");
        inv[i] = 0.0;
      } else {
        inv[i] = 1.0 / ev[i];
      }
    }
    const Matrix& v = eig.eigenvectors();
    Regressor r;
    r.kernel_ = kernel;
    r.train_ = xs;
    r.dual_ = v * (inv.asDiagonal() * (v.transpose() * ys));
    r.k_ = static_cast<std::size_t>(ys.cols());
    r.fitted_ = true;
    return r;
  }

  bool fitted() const { return fitted_; }
  bool is_constant() const { return constant_.has_value(); }
  std::size_t output_dim() const { return k_; }
  std::size_t n_train() const { return static_cast<std::size_t>(train_.rows()); }
  const Matrix& dual_weights() const { return dual_; }
  const RbfKernel& kernel() const { return kernel_; }

  Vector predict(const Vector& x) const {
    if (!fitted_) throw Error("regression: predict called on an unfitted regressor");
    if (constant_) return *constant_;
    if (x.size() != train_.cols())
      throw DimensionError("regression predict: input has dimension " + std::to_string(x.size()) +
                           ", expected " + std::to_string(train_.cols()));
    const Matrix kx = kernel_.gram(x.transpose(), train_);  // 1 x n
    return (kx * dual_).transpose();
  }

  /// Predictions for every row of xs, one output per row.
  Matrix predict_rows(const Matrix& xs) const {
    if (!fitted_) throw Error("regression: predict called on an unfitted regressor");
    if (constant_) return constant_->transpose().replicate(xs.rows(), 1);
    if (xs.cols() != train_.cols()) throw DimensionError("regression predict: input dimension mismatch");
    return kernel_.gram(xs, train_) * dual_;
  }

 private:
  bool fitted_ = false;
  std::optional<Vector> constant_;
  RbfKernel kernel_;
  Matrix train_;
  Matrix dual_;
  std::size_t k_ = 0;
};

}  // namespace wfax
