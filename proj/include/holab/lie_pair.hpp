#ifndef HOLAB_LIE_PAIR_HPP
#define HOLAB_LIE_PAIR_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holab/lie_core.hpp"

namespace holab {

/// Endomorphism of the quotient, expressed on the chosen complement basis.
using QuotientEndo = Matrix;

struct IdealReport {
  bool ideal = false;
  double residual = 0.0;
  int ambient_index = -1;  // argmax basis pair
  int sub_index = -1;
};

/// An ambient Lie algebra with a distinguished subalgebra and a transverse
/// complement; the quotient is realized on the complement and all splitting
/// projections live here. Matrix-backed pairs additionally expose the group
/// side through exponentials; structure-constants-only pairs support the
/// algebra-level operations.
class LiePair {
public:
  LiePair() = default;

  static LiePair from_matrices(std::string name, LieAlgebraBasis ambient,
                               const std::vector<Matrix>& sub_matrices,
                               const std::optional<std::vector<Matrix>>& complement_matrices =
                                   std::nullopt,
                               double tol = kToleranceClosure) {
    LiePair pair;
    pair.name_ = std::move(name);
    pair.sc_ = structure_constants(ambient, tol);
    const int k = ambient.dim();

    Matrix sub_coords(k, static_cast<Eigen::Index>(sub_matrices.size()));
    for (size_t j = 0; j < sub_matrices.size(); ++j) {
      double resid = 0.0;
      sub_coords.col(static_cast<Eigen::Index>(j)) = ambient.coords(sub_matrices[j], &resid);
      if (resid > 1e-8 * (1.0 + sub_matrices[j].norm()))
        throw invalid_argument("LiePair '" + pair.name_ +
                               "': subalgebra matrix is not in the ambient span");
    }
    Subspace sub(k, sub_coords);

    std::optional<Subspace> comp;
    if (complement_matrices) {
      Matrix cc(k, static_cast<Eigen::Index>(complement_matrices->size()));
      for (size_t j = 0; j < complement_matrices->size(); ++j) {
        double resid = 0.0;
        cc.col(static_cast<Eigen::Index>(j)) =
            ambient.coords((*complement_matrices)[j], &resid);
        if (resid > 1e-8 * (1.0 + (*complement_matrices)[j].norm()))
          throw invalid_argument("LiePair '" + pair.name_ +
                                 "': complement matrix is not in the ambient span");
      }
      comp = Subspace(k, cc);
    }
    pair.ambient_ = std::move(ambient);
    pair.init(sub, comp, tol);
    return pair;
  }

  static LiePair from_structure(std::string name, StructureConstants sc,
                                Matrix sub_coords,
                                const std::optional<Matrix>& complement_coords = std::nullopt,
                                double tol = kToleranceClosure) {
    LiePair pair;
    pair.name_ = std::move(name);
    pair.sc_ = std::move(sc);
    Subspace sub(pair.sc_.dim(), std::move(sub_coords));
    std::optional<Subspace> comp;
    if (complement_coords) comp = Subspace(pair.sc_.dim(), *complement_coords);
    pair.init(sub, comp, tol);
    return pair;
  }

  const std::string& name() const { return name_; }
  bool matrix_backed() const { return ambient_.has_value(); }
  const LieAlgebraBasis& ambient_basis() const {
    if (!ambient_) throw error("LiePair '" + name_ + "' has no matrix realization");
    return *ambient_;
  }
  const StructureConstants& sc() const { return sc_; }

  int ambient_dim() const { return sc_.dim(); }
  int sub_dim() const { return sub_.dim(); }
  int quotient_dim() const { return comp_.dim(); }

  const Matrix& sub_coords() const { return sub_.coords; }
  const Matrix& comp_coords() const { return comp_.coords; }

  // --- splitting ---

  Vector embed_sub(const Vector& b) const { return sub_.coords * b; }
  Vector embed_comp(const Vector& c) const { return comp_.coords * c; }

  /// Coordinates of the subalgebra component along the splitting.
  Vector project_sub(const Vector& ambient_coords) const {
    return (split_inv_ * ambient_coords).head(sub_dim());
  }

  /// Coordinates of the complement component along the splitting.
  Vector project_comp(const Vector& ambient_coords) const {
    return (split_inv_ * ambient_coords).tail(quotient_dim());
  }

  /// Frobenius norm of the element with these ambient coordinates.
  double coord_norm(const Vector& ambient_coords) const {
    return std::sqrt(ambient_coords.dot(gram_ * ambient_coords));
  }

  // --- matrix realization helpers ---

  Vector ambient_coords(const Matrix& X, double span_tol = 1e-8) const {
    double resid = 0.0;
    Vector c = ambient_basis().coords(X, &resid);
    if (resid > span_tol * (1.0 + X.norm()))
      throw invalid_argument("LiePair '" + name_ + "': matrix leaves the ambient span (residual " +
                             std::to_string(resid) + ")");
    return c;
  }

  Matrix ambient_matrix(const Vector& coords) const {
    return ambient_basis().materialize(coords);
  }
  Matrix sub_matrix(const Vector& b) const { return ambient_matrix(embed_sub(b)); }
  Matrix comp_matrix(const Vector& c) const { return ambient_matrix(embed_comp(c)); }

  /// Subalgebra coordinates of b; rejects elements with a complement part.
  Vector to_sub_coords(const Matrix& b) const {
    Vector x = ambient_coords(b);
    Vector cpart = project_comp(x);
    if (coord_norm(embed_comp(cpart)) > 1e-8 * (1.0 + b.norm()))
      throw invalid_argument("LiePair '" + name_ + "': element is not in the subalgebra");
    return project_sub(x);
  }

  // --- operations ---

  /// The flat connection b . a-bar = [b, a] mod sub, as a matrix on the
  /// complement basis.
  QuotientEndo bott(const Vector& b_sub) const {
    require_sub_size(b_sub);
    const int q = quotient_dim();
    QuotientEndo out(q, q);
    Vector amb_b = embed_sub(b_sub);
    for (int j = 0; j < q; ++j)
      out.col(j) = project_comp(sc_.bracket_coords(amb_b, comp_.coords.col(j)));
    return out;
  }

  /// As bott, but takes the element as a matrix and validates membership.
  QuotientEndo bott(const Matrix& b) const { return bott(to_sub_coords(b)); }

  /// Operator norm of bott([b1,b2]) - [bott(b1), bott(b2)].
  double bott_flatness_residual(const Vector& b1, const Vector& b2) const {
    require_sub_size(b1);
    require_sub_size(b2);
    Vector w = sc_.bracket_coords(embed_sub(b1), embed_sub(b2));
    QuotientEndo lhs = bott(project_sub(w));
    QuotientEndo p1 = bott(b1), p2 = bott(b2);
    return operator_norm(lhs - (p1 * p2 - p2 * p1));
  }

  /// Quotient action of the adjoint of exp(eps*b). Matrix-backed pairs use
  /// group conjugation; abstract pairs exponentiate ad on coordinates.
  QuotientEndo exp_ad_rep(const Vector& b_sub, double eps) const {
    require_sub_size(b_sub);
    const int q = quotient_dim();
    QuotientEndo out(q, q);
    if (matrix_backed()) {
      Matrix bm = sub_matrix(b_sub);
      Matrix E = mexp(eps * bm);
      Matrix Einv = mexp(-eps * bm);
      for (int j = 0; j < q; ++j) {
        Matrix conj = E * comp_matrix(Vector::Unit(q, j)) * Einv;
        out.col(j) = project_comp(ambient_coords(conj));
      }
    } else {
      Matrix A = mexp(eps * sc_.ad(embed_sub(b_sub)));
      for (int j = 0; j < q; ++j) out.col(j) = project_comp(A * comp_.coords.col(j));
    }
    return out;
  }

  /// Central difference of exp_ad_rep in eps; O(eps^2) approximation of bott.
  QuotientEndo differentiate_rep(const Vector& b_sub, double eps) const {
    if (!(eps > 0)) throw invalid_argument("differentiate_rep: eps must be positive");
    return (exp_ad_rep(b_sub, eps) - exp_ad_rep(b_sub, -eps)) / (2.0 * eps);
  }

  /// Max complement component of [g_i, h_j] over unit-normalized basis pairs.
  IdealReport is_ideal(double tol = kToleranceClosure) const {
    IdealReport rep;
    const int k = ambient_dim();
    for (int i = 0; i < k; ++i) {
      Vector gi = Vector::Unit(k, i);
      double gn = coord_norm(gi);
      for (int j = 0; j < sub_dim(); ++j) {
        Vector hj = sub_.coords.col(j);
        double hn = coord_norm(hj);
        Vector w = sc_.bracket_coords(gi / gn, hj / hn);
        double r = coord_norm(embed_comp(project_comp(w)));
        if (r > rep.residual) {
          rep.residual = r;
          rep.ambient_index = i;
          rep.sub_index = j;
        }
      }
    }
    rep.ideal = rep.residual <= tol;
    return rep;
  }

private:
  void init(const Subspace& sub, const std::optional<Subspace>& comp_opt, double tol) {
    const int k = sc_.dim();
    sub_ = sub;
    gram_ = ambient_ ? ambient_->gram() : Matrix(identity(k));
    if (comp_opt) {
      comp_ = validated_complement_coords(*comp_opt);
    } else {
      comp_ = orthogonal_complement(k, gram_, sub_);
    }
    Matrix split(k, k);
    split << sub_.coords, comp_.coords;
    Eigen::FullPivLU<Matrix> lu(split);
    if (!lu.isInvertible())
      throw error("supplied complement not transverse to the subalgebra");
    split_inv_ = lu.inverse();

    // The subalgebra must be bracket-closed inside the ambient algebra.
    double worst = 0.0;
    for (int i = 0; i < sub_.dim(); ++i)
      for (int j = i + 1; j < sub_.dim(); ++j) {
        Vector w = sc_.bracket_coords(sub_.coords.col(i), sub_.coords.col(j));
        double scale = coord_norm(sub_.coords.col(i)) * coord_norm(sub_.coords.col(j));
        double r = coord_norm(embed_comp(project_comp(w)));
        worst = std::max(worst, scale > 0 ? r / scale : r);
      }
    if (worst > tol)
      throw error("not a subalgebra: closure residual " + std::to_string(worst) +
                  " exceeds tolerance");
  }

  Subspace validated_complement_coords(const Subspace& comp) const {
    const int k = sc_.dim();
    if (comp.ambient_dim != k)
      throw invalid_argument("complement: ambient dimension mismatch");
    if (sub_.dim() + comp.dim() != k)
      throw invalid_argument("complement: sub and complement dimensions do not sum to ambient");
    Matrix stacked(k, k);
    stacked << sub_.coords, comp.coords;
    if (numerical_rank(stacked, 1e-10) != k)
      throw error("supplied complement not transverse to the subalgebra");
    return comp;
  }

  void require_sub_size(const Vector& b) const {
    if (b.size() != sub_dim())
      throw invalid_argument("LiePair '" + name_ + "': expected subalgebra coordinates of length " +
                             std::to_string(sub_dim()));
  }

  std::string name_;
  std::optional<LieAlgebraBasis> ambient_;
  StructureConstants sc_;
  Subspace sub_;
  Subspace comp_;
  Matrix split_inv_;  // inverse of [sub | comp]
  Matrix gram_;
};

}  // namespace holab

#endif
