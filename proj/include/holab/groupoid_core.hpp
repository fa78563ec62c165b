#ifndef HOLAB_GROUPOID_CORE_HPP
#define HOLAB_GROUPOID_CORE_HPP

#include "holab/group_holonomy.hpp"

namespace holab {

// Transformation-groupoid bookkeeping over a point base: elements are pairs
// (h, g), source g, target phi(h) * g, multiplication
// (h2, phi(h1) g) (h1, g) = (h2 h1, g).

struct ActionGroupoidElement {
  HWord h;
  Matrix g;
};

inline const Matrix& groupoid_source(const ActionGroupoidElement& e) { return e.g; }

inline Matrix groupoid_target(const LiePair& pair, const ActionGroupoidElement& e) {
  return e.h.phi(pair) * e.g;
}

inline ActionGroupoidElement groupoid_unit(const Matrix& g) {
  return ActionGroupoidElement{HWord::identity_word(), g};
}

inline ActionGroupoidElement groupoid_inverse(const LiePair& pair,
                                              const ActionGroupoidElement& e) {
  return ActionGroupoidElement{e.h.inverse(), groupoid_target(pair, e)};
}

/// Composition with the source/target matching gate at rounding level.
inline ActionGroupoidElement compose(const LiePair& pair, const ActionGroupoidElement& e2,
                                     const ActionGroupoidElement& e1,
                                     double tol = 1e-12) {
  double gap = (groupoid_source(e2) - groupoid_target(pair, e1)).norm();
  if (gap > tol)
    throw invalid_argument("compose: source/target mismatch, distance " +
                           std::to_string(gap));
  return ActionGroupoidElement{HWord::concat(e2.h, e1.h), e1.g};
}

/// The projection (h, g) -> h; a groupoid morphism onto H.
inline const HWord& project_pi(const ActionGroupoidElement& e) { return e.h; }

/// Compares the holonomy transform based at the unit with the transform
/// based at g: the slice is carried over by right translation, the leafwise
/// slide is applied there, and the result is pulled back. Returns the max
/// discrepancy in slice coordinates over the grid.
inline double right_invariance_check(const SliceChart& chart, const HWord& h,
                                     const GroupElement& g, const GridOptions& grid = {}) {
  const LiePair& pair = chart.pair();
  Matrix hm = h.phi(pair);
  Matrix hinv = h.phi_inverse(pair);
  Matrix ginv = g.inverse();

  const int q = pair.quotient_dim();
  auto pts = detail::sample_grid(q, grid.coarse_factor * chart.radius(),
                                 grid.fine_factor * chart.radius(), grid.random_count,
                                 grid.seed);
  double worst = 0.0;
  for (const auto& c : pts) {
    // Base e: slide h exp(c) h^-1.
    Matrix pt = chart.chart_point(c);
    Vector lhs = slide_to_slice(chart, (hm * pt) * hinv).c_comp;
    // Base g: the slice point travels to S_g = S_e g, the slide happens at
    // the translated base, and right translation by g^-1 pulls it back.
    Matrix p_at_g = pt * g.mat;
    Vector rhs = slide_to_slice(chart, ((hm * p_at_g) * ginv) * hinv).c_comp;
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

}  // namespace holab

#endif
