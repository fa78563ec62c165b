#ifndef HOLAB_MATRIX_HPP
#define HOLAB_MATRIX_HPP

#include <Eigen/Dense>
#include <string>

#include "holab/error.hpp"

namespace holab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline bool is_finite(const Matrix& m) { return m.allFinite(); }

inline void check_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols())
    throw invalid_argument(std::string(who) + ": matrix must be square, got " +
                           std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()));
}

inline void check_same_shape(const Matrix& a, const Matrix& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw invalid_argument(std::string(who) + ": dimension mismatch " +
                           std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                           " vs " + std::to_string(b.rows()) + "x" +
                           std::to_string(b.cols()));
}

/// Column-major flattening, the inner product of two flattenings is the
/// Frobenius inner product of the matrices.
inline Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

/// Spectral norm; 0x0 maps to 0.
inline double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

/// 2-norm condition number (largest/smallest singular value).
inline double condition_number(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

/// Numerical rank with an absolute singular-value cutoff.
inline int numerical_rank(const Matrix& m, double tol = 1e-10) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++r;
  return r;
}

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

}  // namespace holab

#endif
