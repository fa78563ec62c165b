#ifndef HOLAB_LIE_CORE_HPP
#define HOLAB_LIE_CORE_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "holab/error.hpp"
#include "holab/matrix.hpp"

namespace holab {

inline constexpr double kToleranceClosure = 1e-9;
inline constexpr double kToleranceJacobi = 1e-9;

// ---------------------------------------------------------------------------
// Bracket
// ---------------------------------------------------------------------------

/// Matrix commutator XY - YX.
inline Matrix bracket(const Matrix& X, const Matrix& Y) {
  check_square(X, "bracket");
  check_same_shape(X, Y, "bracket");
  return X * Y - Y * X;
}

// ---------------------------------------------------------------------------
// Matrix exponential and principal logarithm
// ---------------------------------------------------------------------------

/// Matrix exponential by scaling-and-squaring with a Taylor core; the input
/// is halved until its norm drops below 0.5, so the series converges to
/// machine precision in a handful of terms.
inline Matrix mexp(const Matrix& X) {
  check_square(X, "mexp");
  if (!is_finite(X)) throw invalid_argument("mexp: non-finite entries");
  const Eigen::Index n = X.rows();
  if (n == 0) return Matrix(0, 0);

  double nrm = X.norm();
  int squarings = 0;
  if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  const double scale = std::ldexp(1.0, -squarings);
  Matrix A = X * scale;

  Matrix term = identity(n);
  Matrix sum = identity(n);
  for (int k = 1; k <= 64; ++k) {
    term = (term * A) / static_cast<double>(k);
    sum += term;
    if (term.norm() <= 1e-18 * sum.norm()) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

namespace detail {

/// Principal square root by the Denman-Beavers iteration. Converges
/// quadratically when no eigenvalue lies on the closed negative real axis.
inline Matrix sqrtm(const Matrix& A) {
  const Eigen::Index n = A.rows();
  Matrix Y = A;
  Matrix Z = identity(n);
  for (int it = 0; it < 64; ++it) {
    Eigen::FullPivLU<Matrix> luY(Y), luZ(Z);
    if (!luY.isInvertible() || !luZ.isInvertible())
      throw chart_error("square root iterate became singular");
    Matrix Yn = 0.5 * (Y + luZ.inverse());
    Matrix Zn = 0.5 * (Z + luY.inverse());
    double delta = (Yn - Y).norm();
    Y = Yn;
    Z = Zn;
    if (delta <= 1e-14 * (1.0 + Y.norm())) return Y;
  }
  throw chart_error("square root iteration did not converge");
}

}  // namespace detail

/// Principal matrix logarithm by inverse scaling-and-squaring: square roots
/// until close to the identity, then the log series. Inputs far from the
/// principal chart raise chart_error ("log chart exceeded").
inline Matrix mlog(const Matrix& G) {
  check_square(G, "mlog");
  if (!is_finite(G)) throw invalid_argument("mlog: non-finite entries");
  const Eigen::Index n = G.rows();
  if (n == 0) return Matrix(0, 0);
  {
    Eigen::FullPivLU<Matrix> lu(G);
    if (!lu.isInvertible()) throw chart_error("matrix is singular");
  }

  Matrix A = G;
  int sqrts = 0;
  while ((A - identity(n)).norm() > 0.25) {
    if (++sqrts > 40) throw chart_error("too many square roots");
    A = detail::sqrtm(A);
  }

  const Matrix E = A - identity(n);
  Matrix term = E;
  Matrix sum = E;
  for (int k = 2; k <= 64; ++k) {
    term = term * E;
    sum += (k % 2 == 0 ? -1.0 : 1.0) / static_cast<double>(k) * term;
    if (term.norm() <= 1e-18 * (1.0 + sum.norm())) break;
  }
  Matrix L = std::ldexp(1.0, sqrts) * sum;

  // Guards against quiet convergence to a non-principal branch.
  if ((mexp(L) - G).norm() > 1e-8 * (1.0 + G.norm()))
    throw chart_error("roundtrip verification failed");
  return L;
}

// ---------------------------------------------------------------------------
// Lie algebra bases and structure constants
// ---------------------------------------------------------------------------

/// An ordered list of linearly independent n-by-n matrices spanning a
/// subspace of gl(n). Closure under the commutator is checked separately.
class LieAlgebraBasis {
public:
  LieAlgebraBasis() = default;

  LieAlgebraBasis(std::string name, std::vector<Matrix> basis)
      : name_(std::move(name)), basis_(std::move(basis)) {
    if (basis_.empty()) throw invalid_argument("LieAlgebraBasis: empty basis");
    n_ = static_cast<int>(basis_.front().rows());
    for (const auto& b : basis_) {
      check_square(b, "LieAlgebraBasis");
      if (b.rows() != n_)
        throw invalid_argument("LieAlgebraBasis: mixed matrix sizes");
      if (!is_finite(b))
        throw invalid_argument("LieAlgebraBasis: non-finite entries");
    }
    const int k = dim();
    vectorized_.resize(static_cast<Eigen::Index>(n_) * n_, k);
    for (int j = 0; j < k; ++j) vectorized_.col(j) = vec(basis_[j]);
    if (numerical_rank(vectorized_, 1e-10) != k)
      throw invalid_argument("LieAlgebraBasis '" + name_ +
                             "': basis matrices are linearly dependent");
    pinv_ = vectorized_.completeOrthogonalDecomposition().pseudoInverse();
  }

  const std::string& name() const { return name_; }
  int ambient_dim() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Matrix>& matrices() const { return basis_; }
  const Matrix& matrix(int i) const { return basis_.at(static_cast<size_t>(i)); }

  /// Gram matrix of Frobenius inner products.
  Matrix gram() const { return vectorized_.transpose() * vectorized_; }

  /// Least-squares coordinates of X in this basis; the distance from X to the
  /// span is written to *residual when given.
  Vector coords(const Matrix& X, double* residual = nullptr) const {
    check_same_shape(X, basis_.front(), "LieAlgebraBasis::coords");
    Vector c = pinv_ * vec(X);
    if (residual) *residual = (vectorized_ * c - vec(X)).norm();
    return c;
  }

  Matrix materialize(const Vector& c) const {
    if (c.size() != dim())
      throw invalid_argument("materialize: coordinate length mismatch");
    Matrix out = Matrix::Zero(n_, n_);
    for (int i = 0; i < dim(); ++i) out += c(i) * basis_[static_cast<size_t>(i)];
    return out;
  }

  /// Max distance of [b_i, b_j] from the span, over unit-normalized pairs.
  double closure_residual() const {
    double worst = 0.0;
    for (int i = 0; i < dim(); ++i) {
      for (int j = i + 1; j < dim(); ++j) {
        Matrix br = bracket(basis_[static_cast<size_t>(i)], basis_[static_cast<size_t>(j)]);
        double r = 0.0;
        coords(br, &r);
        double scale = basis_[static_cast<size_t>(i)].norm() * basis_[static_cast<size_t>(j)].norm();
        worst = std::max(worst, scale > 0 ? r / scale : r);
      }
    }
    return worst;
  }

  bool is_subalgebra(double tol = kToleranceClosure) const {
    return closure_residual() <= tol;
  }

private:
  std::string name_;
  std::vector<Matrix> basis_;
  int n_ = 0;
  Matrix vectorized_;  // n^2 x k
  Matrix pinv_;        // k x n^2
};

/// Tensor c with [b_i, b_j] = sum_m c(i,j,m) b_m; antisymmetric in (i,j) by
/// construction.
class StructureConstants {
public:
  StructureConstants() = default;
  StructureConstants(int dim, std::vector<Matrix> slabs, double residual)
      : k_(dim), c_(std::move(slabs)), closure_residual_(residual) {}

  static StructureConstants from_tensor(int dim, const std::vector<Matrix>& slabs) {
    if (static_cast<int>(slabs.size()) != dim)
      throw invalid_argument("StructureConstants: tensor slab count mismatch");
    for (const auto& s : slabs)
      if (s.rows() != dim || s.cols() != dim)
        throw invalid_argument("StructureConstants: slab shape mismatch");
    // Antisymmetrize exactly; reject tensors that are materially asymmetric.
    std::vector<Matrix> anti(slabs.begin(), slabs.end());
    double asym = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int m = 0; m < dim; ++m) {
          double a = slabs[static_cast<size_t>(i)](j, m);
          double b = slabs[static_cast<size_t>(j)](i, m);
          asym = std::max(asym, std::abs(a + b));
          anti[static_cast<size_t>(i)](j, m) = 0.5 * (a - b);
        }
    if (asym > 1e-9)
      throw invalid_argument("StructureConstants: tensor is not antisymmetric");
    StructureConstants sc(dim, std::move(anti), 0.0);
    if (sc.jacobi_residual() > kToleranceJacobi)
      throw invalid_argument("StructureConstants: Jacobi identity violated, residual " +
                             std::to_string(sc.jacobi_residual()));
    return sc;
  }

  int dim() const { return k_; }
  double closure_residual() const { return closure_residual_; }

  double at(int i, int j, int m) const {
    return c_.at(static_cast<size_t>(i))(j, m);
  }

  /// Coordinates of [u, v].
  Vector bracket_coords(const Vector& u, const Vector& v) const {
    if (u.size() != k_ || v.size() != k_)
      throw invalid_argument("bracket_coords: coordinate length mismatch");
    Vector out = Vector::Zero(k_);
    for (int i = 0; i < k_; ++i) {
      if (u(i) == 0.0) continue;
      out += u(i) * (c_[static_cast<size_t>(i)].transpose() * v);
    }
    return out;
  }

  /// Matrix of ad_u = [u, .] acting on coordinates.
  Matrix ad(const Vector& u) const {
    Matrix out = Matrix::Zero(k_, k_);
    for (int i = 0; i < k_; ++i)
      if (u(i) != 0.0) out += u(i) * c_[static_cast<size_t>(i)].transpose();
    return out;
  }

  /// Max norm of the Jacobi cycle over all basis triples.
  double jacobi_residual() const {
    double worst = 0.0;
    for (int i = 0; i < k_; ++i)
      for (int j = i + 1; j < k_; ++j)
        for (int m = j + 1; m < k_; ++m) {
          Vector ei = Vector::Unit(k_, i), ej = Vector::Unit(k_, j), em = Vector::Unit(k_, m);
          Vector cyc = bracket_coords(ei, bracket_coords(ej, em)) +
                       bracket_coords(ej, bracket_coords(em, ei)) +
                       bracket_coords(em, bracket_coords(ei, ej));
          worst = std::max(worst, cyc.norm());
        }
    return worst;
  }

private:
  int k_ = 0;
  std::vector<Matrix> c_;  // c_[i](j, m) = coefficient of b_m in [b_i, b_j]
  double closure_residual_ = 0.0;
};

/// Least-squares structure constants of a bracket-closed basis. Raises
/// "not a subalgebra" when the closure residual exceeds the tolerance.
inline StructureConstants structure_constants(const LieAlgebraBasis& basis,
                                              double tol = kToleranceClosure) {
  const int k = basis.dim();
  std::vector<Matrix> slabs(static_cast<size_t>(k), Matrix::Zero(k, k));
  double worst = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      Matrix br = bracket(basis.matrix(i), basis.matrix(j));
      double r = 0.0;
      Vector cij = basis.coords(br, &r);
      double scale = basis.matrix(i).norm() * basis.matrix(j).norm();
      worst = std::max(worst, scale > 0 ? r / scale : r);
      for (int m = 0; m < k; ++m) {
        slabs[static_cast<size_t>(i)](j, m) = cij(m);
        slabs[static_cast<size_t>(j)](i, m) = -cij(m);
      }
    }
  }
  if (worst > tol)
    throw error("not a subalgebra: closure residual " + std::to_string(worst) +
                " exceeds tolerance");
  return StructureConstants(k, std::move(slabs), worst);
}

// ---------------------------------------------------------------------------
// Subspaces and complements
// ---------------------------------------------------------------------------

/// A subspace of a k-dimensional algebra, columns = coordinates of spanning
/// vectors in the ambient basis.
struct Subspace {
  int ambient_dim = 0;  // k
  Matrix coords;        // k x m, full column rank (m may be 0)

  Subspace() = default;
  Subspace(int k, Matrix c) : ambient_dim(k), coords(std::move(c)) {
    if (coords.size() == 0) coords.resize(k, 0);
    if (coords.rows() != k)
      throw invalid_argument("Subspace: coordinate rows != ambient dim");
    if (coords.cols() > 0 && numerical_rank(coords, 1e-10) != coords.cols())
      throw invalid_argument("Subspace: spanning vectors are dependent");
  }

  int dim() const { return static_cast<int>(coords.cols()); }
};

/// Orthogonal complement of `sub` in coordinates under the inner product
/// given by `gram`; columns normalized to unit norm in that inner product.
inline Subspace orthogonal_complement(int k, const Matrix& gram, const Subspace& sub) {
  if (sub.ambient_dim != k)
    throw invalid_argument("complement: sub lives in a different ambient algebra");
  const int p = sub.dim();
  const int q = k - p;
  if (q == 0) return Subspace(k, Matrix(k, 0));
  Matrix Q;  // k x k with range = gram-orthogonal complement of span(sub)
  if (p == 0) {
    Q = identity(k);
  } else {
    const Matrix& S = sub.coords;
    Matrix P = S * (S.transpose() * gram * S).ldlt().solve(S.transpose() * gram);
    Q = identity(k) - P;
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(Q);
  qr.setThreshold(1e-10);
  if (qr.rank() != q)
    throw invalid_argument("complement: rank deficiency while splitting");
  Matrix basis = Matrix(qr.householderQ()).leftCols(q);
  for (int j = 0; j < q; ++j) {
    double nrm = std::sqrt(basis.col(j).dot(gram * basis.col(j)));
    basis.col(j) /= nrm;
  }
  return Subspace(k, basis);
}

/// Orthogonal complement of `sub` inside the span of `ambient` under the
/// Frobenius inner product; each complement basis matrix has unit norm.
inline Subspace complement(const LieAlgebraBasis& ambient, const Subspace& sub) {
  return orthogonal_complement(ambient.dim(), ambient.gram(), sub);
}

/// Validates a user-supplied complement: the stacked coordinates must have
/// full rank k_sub + k_comp.
inline Subspace validated_complement(const LieAlgebraBasis& ambient,
                                     const Subspace& sub, const Subspace& comp) {
  const int k = ambient.dim();
  if (comp.ambient_dim != k || sub.ambient_dim != k)
    throw invalid_argument("complement: ambient dimension mismatch");
  if (sub.dim() + comp.dim() != k)
    throw invalid_argument("complement: sub and complement dimensions do not sum to ambient");
  Matrix stacked(k, k);
  stacked << sub.coords, comp.coords;
  if (numerical_rank(stacked, 1e-10) != k)
    throw error("supplied complement not transverse to the subalgebra");
  return comp;
}

// ---------------------------------------------------------------------------
// Newton solver
// ---------------------------------------------------------------------------

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 25;
};

using ResidualFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

namespace detail {

inline Matrix fd_jacobian(const ResidualFn& f, const Vector& x, const Vector& fx) {
  const Eigen::Index m = x.size();
  Matrix J(fx.size(), m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double h = std::sqrt(std::numeric_limits<double>::epsilon()) *
               std::max(1.0, std::abs(x(j)));
    Vector xp = x;
    xp(j) += h;
    J.col(j) = (f(xp) - fx) / h;
  }
  return J;
}

}  // namespace detail

/// Square Newton iteration on residual(x) = 0 with finite-difference Jacobian
/// unless one is supplied. Throws newton_error carrying the last residual
/// norm on a singular Jacobian or when max_iter is exhausted.
inline Vector newton_solve(const ResidualFn& residual, Vector x0,
                           const NewtonOptions& opts = {},
                           const std::optional<JacobianFn>& jacobian = std::nullopt) {
  Vector x = std::move(x0);
  double rn = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= opts.max_iter; ++it) {
    Vector r = residual(x);
    if (r.size() != x.size())
      throw invalid_argument("newton_solve: residual dimension != unknown dimension");
    rn = r.norm();
    if (!std::isfinite(rn)) throw newton_error("newton: residual not finite", rn);
    if (rn <= opts.tol) return x;
    if (it == opts.max_iter) break;
    Matrix J = jacobian ? (*jacobian)(x) : detail::fd_jacobian(residual, x, r);
    Eigen::FullPivLU<Matrix> lu(J);
    if (!lu.isInvertible())
      throw newton_error("newton: singular jacobian (residual=" + std::to_string(rn) + ")", rn);
    x += lu.solve(-r);
  }
  throw newton_error("newton: no convergence after " + std::to_string(opts.max_iter) +
                         " iterations (residual=" + std::to_string(rn) + ")",
                     rn);
}

}  // namespace holab

#endif
