#ifndef HOLAB_ALGEBRAS_HPP
#define HOLAB_ALGEBRAS_HPP

#include "holab/lie_pair.hpp"

namespace holab {

/// sl(2,R) with basis H = diag(1,-1), E = E12, F = E21.
inline LieAlgebraBasis sl2_basis() {
  Matrix H(2, 2), E(2, 2), F(2, 2);
  H << 1, 0, 0, -1;
  E << 0, 1, 0, 0;
  F << 0, 0, 1, 0;
  return LieAlgebraBasis("sl2", {H, E, F});
}

/// Heisenberg algebra: strictly upper triangular 3x3, X = E12, Y = E23, Z = E13.
inline LieAlgebraBasis heisenberg_basis() {
  Matrix X = Matrix::Zero(3, 3), Y = Matrix::Zero(3, 3), Z = Matrix::Zero(3, 3);
  X(0, 1) = 1;
  Y(1, 2) = 1;
  Z(0, 2) = 1;
  return LieAlgebraBasis("heisenberg", {X, Y, Z});
}

/// so(3) with [L1,L2] = L3 cyclically.
inline LieAlgebraBasis so3_basis() {
  Matrix L1 = Matrix::Zero(3, 3), L2 = Matrix::Zero(3, 3), L3 = Matrix::Zero(3, 3);
  L1(1, 2) = -1;
  L1(2, 1) = 1;
  L2(0, 2) = 1;
  L2(2, 0) = -1;
  L3(0, 1) = -1;
  L3(1, 0) = 1;
  return LieAlgebraBasis("so3", {L1, L2, L3});
}

/// so(3) + R as 4x4 block matrices, the scalar factor on the (3,3) entry.
inline LieAlgebraBasis so3_plus_r_basis() {
  LieAlgebraBasis so3 = so3_basis();
  std::vector<Matrix> mats;
  for (const auto& L : so3.matrices()) {
    Matrix M = Matrix::Zero(4, 4);
    M.topLeftCorner(3, 3) = L;
    mats.push_back(M);
  }
  Matrix W = Matrix::Zero(4, 4);
  W(3, 3) = 1;
  mats.push_back(W);
  return LieAlgebraBasis("so3_plus_r", mats);
}

/// Borel pair: sub = span(H, E) in sl(2,R), quotient spanned by F.
inline LiePair pair_sl2_borel() {
  LieAlgebraBasis g = sl2_basis();
  return LiePair::from_matrices("sl2_borel", g, {g.matrix(0), g.matrix(1)});
}

/// Center of the Heisenberg algebra; two-dimensional quotient.
inline LiePair pair_heisenberg_center() {
  LieAlgebraBasis g = heisenberg_basis();
  return LiePair::from_matrices("heisenberg_center", g, {g.matrix(2)});
}

/// so(3) sitting as an ideal inside so(3) + R.
inline LiePair pair_so3_in_so3_plus_r() {
  LieAlgebraBasis g = so3_plus_r_basis();
  return LiePair::from_matrices("so3_in_so3_plus_r", g,
                                {g.matrix(0), g.matrix(1), g.matrix(2)});
}

/// Rotation axis span(L3) in so(3); quotient carries a rotation action.
inline LiePair pair_so3_axis() {
  LieAlgebraBasis g = so3_basis();
  return LiePair::from_matrices("so3_axis", g, {g.matrix(2)});
}

}  // namespace holab

#endif
