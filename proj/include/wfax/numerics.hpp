#pragma once

// Dense linear algebra used by the learner: SVD, relative-tolerance numeric
// rank and cutoff least squares. All functions are pure.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "wfax/error.hpp"

namespace wfax {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct SvdResult {
  Matrix u;
  Vector singular_values;  // nonincreasing
  Matrix vt;
};

struct LstsqResult {
  Matrix x;
  double residual = 0.0;  // Frobenius norm of a*x - b
  std::size_t rank = 0;
};

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite())
    throw NumericError(std::string(what) + ": matrix has non-finite entries");
}

/// Thin SVD. Empty inputs give empty factors.
inline SvdResult svd(const Matrix& m) {
  require_finite(m, "svd");
  SvdResult out;
  if (m.size() == 0) {
    out.u = Matrix::Zero(m.rows(), 0);
    out.singular_values = Vector::Zero(0);
    out.vt = Matrix::Zero(0, m.cols());
    return out;
  }
  Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success)
    throw NumericError("svd: decomposition did not converge");
  out.u = dec.matrixU();
  out.singular_values = dec.singularValues();
  out.vt = dec.matrixV().transpose();
  if (!out.u.allFinite() || !out.vt.allFinite() || !out.singular_values.allFinite())
    throw NumericError("svd: decomposition produced non-finite factors");
  return out;
}

/// Number of singular values strictly above tau * sigma_max. Zero for an
/// all-zero (or empty) spectrum.
inline std::size_t numeric_rank(std::span<const double> singular_values, double tau) {
  if (!(tau > 0.0)) throw NumericError("numeric_rank: tolerance must be positive");
  double top = 0.0;
  for (double s : singular_values) top = std::max(top, s);
  if (top == 0.0) return 0;
  std::size_t r = 0;
  for (double s : singular_values)
    if (s > tau * top) ++r;
  return r;
}

inline std::size_t numeric_rank(const Vector& singular_values, double tau) {
  return numeric_rank(std::span<const double>(singular_values.data(),
                                              static_cast<std::size_t>(singular_values.size())),
                      tau);
}

inline std::size_t matrix_rank(const Matrix& m, double tau) {
  return numeric_rank(svd(m).singular_values, tau);
}

/// Minimum-norm least squares through the SVD pseudoinverse; singular values
/// at or below tau * sigma_max are treated as zero.
inline LstsqResult lstsq_cutoff(const Matrix& a, const Matrix& b, double tau) {
  if (a.rows() != b.rows())
    throw DimensionError("lstsq_cutoff: a has " + std::to_string(a.rows()) +
                         " rows but b has " + std::to_string(b.rows()));
  require_finite(b, "lstsq_cutoff");
  const SvdResult d = svd(a);
  const std::size_t r = numeric_rank(d.singular_values, tau);
  LstsqResult out;
  out.rank = r;
  out.x = Matrix::Zero(a.cols(), b.cols());
  if (r > 0) {
    const auto k = static_cast<Eigen::Index>(r);
    Matrix utb = d.u.leftCols(k).transpose() * b;
    utb.array().colwise() /= d.singular_values.head(k).array();
    out.x = d.vt.topRows(k).transpose() * utb;
  }
  out.residual = (a * out.x - b).norm();
  return out;
}

}  // namespace wfax
