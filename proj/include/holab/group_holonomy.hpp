#ifndef HOLAB_GROUP_HOLONOMY_HPP
#define HOLAB_GROUP_HOLONOMY_HPP

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "holab/holonomy_map.hpp"
#include "holab/lie_pair.hpp"
#include "holab/parallel.hpp"

namespace holab {

// ---------------------------------------------------------------------------
// Elements of H and G
// ---------------------------------------------------------------------------

/// Element of the subgroup H as a word of subalgebra exponentials,
/// exp(b_1)...exp(b_m); the factors are subalgebra coordinates. Words keep
/// inverses exact (reverse and negate) instead of inverting matrices.
struct HWord {
  std::vector<Vector> factors;

  static HWord identity_word() { return HWord{}; }
  static HWord single(Vector b) { return HWord{{std::move(b)}}; }

  bool is_identity() const { return factors.empty(); }

  /// left * right as group elements.
  static HWord concat(const HWord& left, const HWord& right) {
    HWord out = left;
    out.factors.insert(out.factors.end(), right.factors.begin(), right.factors.end());
    return out;
  }

  HWord inverse() const {
    HWord out;
    out.factors.reserve(factors.size());
    for (auto it = factors.rbegin(); it != factors.rend(); ++it)
      out.factors.push_back(-*it);
    return out;
  }

  /// Image under the subgroup inclusion: the product matrix.
  Matrix phi(const LiePair& pair) const {
    Matrix m = identity(pair.ambient_basis().ambient_dim());
    for (const auto& b : factors) m = m * mexp(pair.sub_matrix(b));
    return m;
  }

  Matrix phi_inverse(const LiePair& pair) const { return inverse().phi(pair); }

  std::string describe() const {
    if (factors.empty()) return "e";
    std::string s;
    for (size_t i = 0; i < factors.size(); ++i) {
      if (i) s += "*";
      s += "exp([";
      for (Eigen::Index j = 0; j < factors[i].size(); ++j) {
        if (j) s += ",";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", factors[i](j));
        s += buf;
      }
      s += "])";
    }
    return s;
  }
};

/// Invertible ambient group element with its condition number and, when it
/// was produced as an exponential, the algebra coordinates it came from.
struct GroupElement {
  Matrix mat;
  double cond = 1.0;
  std::optional<Vector> log_coords;

  static GroupElement from(Matrix m) {
    check_square(m, "GroupElement");
    if (!is_finite(m)) throw invalid_argument("GroupElement: non-finite entries");
    double c = condition_number(m);
    if (!std::isfinite(c)) throw invalid_argument("GroupElement: matrix is singular");
    return GroupElement{std::move(m), c, std::nullopt};
  }

  static GroupElement from_algebra(const LiePair& pair, const Vector& ambient_coords) {
    GroupElement g = from(mexp(pair.ambient_matrix(ambient_coords)));
    g.log_coords = ambient_coords;
    return g;
  }

  Matrix inverse() const { return mat.fullPivLu().inverse(); }
};

// ---------------------------------------------------------------------------
// Slice charts
// ---------------------------------------------------------------------------

/// The exponential-chart slice through the unit: exp(c) for complement
/// coordinates |c| < radius. Construction validates by sampling that the log
/// chart covers products exp(h-ball) * exp(slice-ball), halving the radius
/// down to a floor of 1e-3 before giving up.
class SliceChart {
public:
  explicit SliceChart(LiePair pair, double radius = 0.1)
      : pair_(std::move(pair)), radius_(radius) {
    if (!pair_.matrix_backed())
      throw error("SliceChart: pair '" + pair_.name() + "' has no matrix realization");
    if (!(radius_ > 0)) throw invalid_argument("SliceChart: radius must be positive");
    while (true) {
      if (validate_radius(radius_)) break;
      radius_ /= 2.0;
      if (radius_ < 1e-3)
        throw slide_error("slice radius fell below 1e-3 during validation");
    }
  }

  const LiePair& pair() const { return pair_; }
  double radius() const { return radius_; }

  SliceChart with_radius(double r) const {
    SliceChart copy = *this;
    copy.radius_ = r;
    return copy;
  }

  /// Slice point exp(c); the unit for c = 0.
  Matrix chart_point(const Vector& c) const {
    if (c.size() != pair_.quotient_dim())
      throw invalid_argument("SliceChart: coordinate length mismatch");
    if (c.size() == 0 || c.norm() == 0.0)
      return identity(pair_.ambient_basis().ambient_dim());
    return mexp(pair_.comp_matrix(c));
  }

private:
  bool validate_radius(double r) const {
    const int q = pair_.quotient_dim();
    const int p = pair_.sub_dim();
    std::vector<Matrix> slice_pts;
    slice_pts.push_back(identity(pair_.ambient_basis().ambient_dim()));
    for (int j = 0; j < q; ++j) {
      slice_pts.push_back(mexp(pair_.comp_matrix(r * Vector::Unit(q, j))));
      slice_pts.push_back(mexp(pair_.comp_matrix(-r * Vector::Unit(q, j))));
    }
    try {
      for (int i = 0; i < p; ++i) {
        Vector hb = Vector::Unit(p, i);
        double hn = pair_.coord_norm(pair_.embed_sub(hb));
        for (double sign : {1.0, -1.0}) {
          Matrix hexp = mexp(pair_.sub_matrix(sign * (r / hn) * hb));
          for (const auto& s : slice_pts) mlog(hexp * s);
        }
      }
      for (const auto& s : slice_pts) mlog(s);
    } catch (const chart_error&) {
      return false;
    }
    return true;
  }

  LiePair pair_;
  double radius_;
};

// ---------------------------------------------------------------------------
// The leafwise slide
// ---------------------------------------------------------------------------

struct SlideResult {
  Vector b_sub;   // exp(b) moves p back onto the slice
  Vector c_comp;  // slice coordinates of the landing point
};

/// Finds b in the subalgebra with exp(b) * p on the slice: the subalgebra
/// part of log(exp(b) * p) is driven to zero by Newton, and the complement
/// part is the landing point. This is the identification along local leaves
/// of the right-invariant distribution.
inline SlideResult slide_to_slice(const SliceChart& chart, const Matrix& p) {
  const LiePair& pair = chart.pair();
  auto log_coords = [&](const Matrix& m) { return pair.ambient_coords(mlog(m), 1e-6); };

  try {
    Vector x0 = -pair.project_sub(log_coords(p));
    ResidualFn residual = [&](const Vector& beta) {
      return pair.project_sub(log_coords(mexp(pair.sub_matrix(beta)) * p));
    };
    Vector b = newton_solve(residual, x0);
    Vector final_coords = log_coords(mexp(pair.sub_matrix(b)) * p);
    if (pair.project_sub(final_coords).norm() > 1e-10)
      throw slide_error("residual subalgebra part above tolerance");
    return SlideResult{b, pair.project_comp(final_coords)};
  } catch (const chart_error& e) {
    throw slide_error(e.what());
  } catch (const newton_error& e) {
    throw slide_error(e.what());
  } catch (const invalid_argument& e) {
    throw slide_error(e.what());
  }
}

// ---------------------------------------------------------------------------
// Holonomy transformations
// ---------------------------------------------------------------------------

/// Conjugation route: slide h * exp(c) * h^-1 back onto the slice.
/// Conjugation fixes the unit, so c = 0 maps to 0 without arithmetic.
inline Vector chi_conj_point(const SliceChart& chart, const HWord& h, const Vector& c) {
  const LiePair& pair = chart.pair();
  if (c.size() == 0 || c.norm() == 0.0) return Vector::Zero(pair.quotient_dim());
  Matrix p = h.phi(pair) * chart.chart_point(c) * h.phi_inverse(pair);
  return slide_to_slice(chart, p).c_comp;
}

/// Bisection route: find eps(g) in H near the unit with
/// eps(g) * h * g * h^-1 on the slice, set sigma(g) = eps(g) * h, and read
/// sigma(g) * g * h^-1 in slice coordinates.
inline Vector chi_bisection_point(const SliceChart& chart, const HWord& h, const Vector& c) {
  const LiePair& pair = chart.pair();
  Matrix hm = h.phi(pair);
  Matrix hinv = h.phi_inverse(pair);
  Matrix g = chart.chart_point(c);
  Matrix conj = (c.size() == 0 || c.norm() == 0.0) ? identity(hm.rows()) : hm * g * hinv;
  Vector eps = slide_to_slice(chart, conj).b_sub;
  Matrix sigma = mexp(pair.sub_matrix(eps)) * hm;
  Matrix out = sigma * g * hinv;
  try {
    Vector coords = pair.ambient_coords(mlog(out), 1e-6);
    if (pair.project_sub(coords).norm() > 1e-9)
      throw slide_error("bisection output missed the slice");
    return pair.project_comp(coords);
  } catch (const chart_error& e) {
    throw slide_error(e.what());
  }
}

namespace detail {

template <class PointFn>
HolonomyMap build_group_map(const SliceChart& chart, const HWord& h, const GridOptions& grid,
                            const char* method, PointFn&& point) {
  double radius = chart.radius();
  while (true) {
    SliceChart active = chart.with_radius(radius);
    const int q = active.pair().quotient_dim();
    HolonomyMap map;
    map.dim = q;
    map.coarse_radius = grid.coarse_factor * radius;
    map.fine_step = grid.fine_factor * radius;
    map.element = h.describe();
    map.method = method;
    auto pts = sample_grid(q, map.coarse_radius, map.fine_step, grid.random_count, grid.seed);
    map.samples.resize(pts.size());
    bool essential_failed = false;
    std::string essential_err;
    std::mutex flag_mutex;
    // Base point and the fine jet stencil must succeed; coarse and random
    // samples may fail individually.
    const size_t essential_end = 1 + 2 * static_cast<size_t>(q) * 2;
    parallel_for(pts.size(), [&](size_t i) {
      HolonomySample& s = map.samples[i];
      s.c_in = pts[i];
      try {
        s.c_out = point(active, h, pts[i]);
        s.ok = true;
      } catch (const slide_error& e) {
        s.ok = false;
        s.err = e.what();
        bool essential = i == 0 || (i >= 1 + 2 * static_cast<size_t>(q) &&
                                    i < essential_end);
        if (essential) {
          std::lock_guard<std::mutex> lock(flag_mutex);
          essential_failed = true;
          essential_err = s.err;
        }
      }
    });
    if (!essential_failed) {
      map.linear_part = q == 0 ? Matrix(0, 0) : linearize(map);
      return map;
    }
    radius /= 2.0;
    if (radius < 1e-3) throw slide_error(essential_err);
  }
}

}  // namespace detail

/// Holonomy transformation of h by the conjugation description.
inline HolonomyMap chi_conj(const SliceChart& chart, const HWord& h,
                            const GridOptions& grid = {}) {
  return detail::build_group_map(chart, h, grid, "conjugation",
                                 [](const SliceChart& ch, const HWord& w, const Vector& c) {
                                   return chi_conj_point(ch, w, c);
                                 });
}

/// Holonomy transformation of h by the bisection recipe; agrees with
/// chi_conj pointwise up to rounding.
inline HolonomyMap chi_via_bisection(const SliceChart& chart, const HWord& h,
                                     const GridOptions& grid = {}) {
  return detail::build_group_map(chart, h, grid, "bisection",
                                 [](const SliceChart& ch, const HWord& w, const Vector& c) {
                                   return chi_bisection_point(ch, w, c);
                                 });
}

// ---------------------------------------------------------------------------
// Probes and reports
// ---------------------------------------------------------------------------

/// Compares the holonomy of two distinct subgroup elements against the
/// injectivity of the inclusion: a chi-collision with distinct images shows
/// chi alone is not injective while the pair (chi, phi) still separates.
struct ProbeReport {
  double chi_max_dev = 0.0;
  bool chi_collision = false;
  double phi_distance = 0.0;
  bool phi_equal = false;
  bool distinguished_by_phi = false;
};

inline ProbeReport chi_phi_probe(const SliceChart& chart, const HWord& h1, const HWord& h2,
                                 const GridOptions& grid = {}) {
  ProbeReport rep;
  const int q = chart.pair().quotient_dim();
  auto pts = detail::sample_grid(q, grid.coarse_factor * chart.radius(),
                                 grid.fine_factor * chart.radius(), grid.random_count,
                                 grid.seed);
  for (const auto& c : pts) {
    Vector a = chi_conj_point(chart, h1, c);
    Vector b = chi_conj_point(chart, h2, c);
    rep.chi_max_dev = std::max(rep.chi_max_dev, (a - b).norm());
  }
  rep.chi_collision = rep.chi_max_dev <= 1e-9;
  rep.phi_distance = (h1.phi(chart.pair()) - h2.phi(chart.pair())).norm();
  rep.phi_equal = rep.phi_distance <= 1e-12;
  rep.distinguished_by_phi = rep.chi_collision && !rep.phi_equal;
  return rep;
}

/// Two-sided test of the normality criterion: the subalgebra is an ideal
/// exactly when the holonomy action is trivial.
struct NormalityReport {
  bool ideal = false;
  double ideal_residual = 0.0;
  bool chi_trivial = false;
  double chi_max_dev = 0.0;
  std::string witness_element;
  Vector witness_point;
  double witness_dev = 0.0;
  bool consistent = false;
};

inline NormalityReport normality_equivalence(const SliceChart& chart, int sample_count,
                                             std::uint64_t seed = 0) {
  const LiePair& pair = chart.pair();
  NormalityReport rep;
  IdealReport ideal = pair.is_ideal();
  rep.ideal = ideal.ideal;
  rep.ideal_residual = ideal.residual;

  const int p = pair.sub_dim();
  const int q = pair.quotient_dim();
  std::vector<HWord> hs;
  for (int i = 0; i < p; ++i) {
    Vector hb = Vector::Unit(p, i);
    double hn = pair.coord_norm(pair.embed_sub(hb));
    hs.push_back(HWord::single((0.3 / hn) * hb));
    hs.push_back(HWord::single((-0.3 / hn) * hb));
  }
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int t = 0; t < sample_count; ++t) {
    Vector b(p);
    for (int i = 0; i < p; ++i) b(i) = 0.3 * dist(gen);
    hs.push_back(HWord::single(b));
  }

  auto pts = detail::axis_stencil(q, 0.1 * chart.radius(), false);
  for (const auto& h : hs) {
    for (const auto& c : pts) {
      double dev = (chi_conj_point(chart, h, c) - c).norm();
      if (dev > rep.chi_max_dev) {
        rep.chi_max_dev = dev;
        rep.witness_element = h.describe();
        rep.witness_point = c;
        rep.witness_dev = dev;
      }
    }
  }
  rep.chi_trivial = rep.chi_max_dev <= 1e-8;
  rep.consistent = (rep.ideal == rep.chi_trivial);
  return rep;
}

}  // namespace holab

#endif
