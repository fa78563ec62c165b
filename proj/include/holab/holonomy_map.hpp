#ifndef HOLAB_HOLONOMY_MAP_HPP
#define HOLAB_HOLONOMY_MAP_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "holab/error.hpp"
#include "holab/matrix.hpp"

namespace holab {

/// One transported sample in slice coordinates. Failed transports keep their
/// input and carry the failure text instead of an output.
struct HolonomySample {
  Vector c_in;
  Vector c_out;
  bool ok = false;
  std::string err;
};

struct GridOptions {
  double coarse_factor = 0.1;  // coarse stencil radius as a fraction of the chart radius
  double fine_factor = 1e-4;   // jet stencil step as a fraction of the chart radius
  int random_count = 0;        // extra random cloud points on the coarse ball
  std::uint64_t seed = 0;
};

/// A sampled germ between slices: table of transported points plus the
/// degree-1 jet at the base point.
struct HolonomyMap {
  int dim = 0;
  double coarse_radius = 0.0;
  double fine_step = 0.0;
  std::vector<HolonomySample> samples;
  Matrix linear_part;   // dim x dim jet at 0
  std::string element;  // description of the acting element
  std::string method;   // which construction produced the map

  int failed_count() const {
    int n = 0;
    for (const auto& s : samples)
      if (!s.ok) ++n;
    return n;
  }

  /// Transported base point; the slide of the unit must stay at the origin.
  const HolonomySample& base_sample() const {
    for (const auto& s : samples)
      if (s.c_in.size() == 0 || s.c_in.norm() == 0.0) return s;
    throw invalid_argument("HolonomyMap: no base sample recorded");
  }
};

namespace detail {

/// Base point, then +/- axis points at `radius`.
inline std::vector<Vector> axis_stencil(int dim, double radius, bool include_base) {
  std::vector<Vector> pts;
  if (include_base) pts.push_back(Vector::Zero(dim));
  for (int j = 0; j < dim; ++j) {
    pts.push_back(radius * Vector::Unit(dim, j));
    pts.push_back(-radius * Vector::Unit(dim, j));
  }
  return pts;
}

inline std::vector<Vector> random_ball(int dim, double radius, int count,
                                       std::uint64_t seed) {
  std::vector<Vector> pts;
  if (dim == 0 || count <= 0) return pts;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  while (static_cast<int>(pts.size()) < count) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = dist(gen);
    if (v.norm() <= 1.0) pts.push_back(radius * v);
  }
  return pts;
}

/// Full sample grid: base + coarse stencil + fine jet stencil + random cloud.
inline std::vector<Vector> sample_grid(int dim, double coarse_radius, double fine_step,
                                       int random_count, std::uint64_t seed) {
  std::vector<Vector> pts = axis_stencil(dim, coarse_radius, true);
  auto fine = axis_stencil(dim, fine_step, false);
  pts.insert(pts.end(), fine.begin(), fine.end());
  auto cloud = random_ball(dim, coarse_radius, random_count, seed);
  pts.insert(pts.end(), cloud.begin(), cloud.end());
  return pts;
}

}  // namespace detail

/// Central-difference Jacobian at the base point from the sample table. Uses
/// the tightest symmetric axis stencil present; throws if one is missing.
inline Matrix linearize(const HolonomyMap& map) {
  const int q = map.dim;
  Matrix J = Matrix::Zero(q, q);
  for (int j = 0; j < q; ++j) {
    double best_step = 0.0;
    const Vector *plus = nullptr, *minus = nullptr;
    for (const auto& s : map.samples) {
      if (!s.ok) continue;
      // Axis samples have exactly one nonzero coordinate.
      if (s.c_in.cwiseAbs().maxCoeff() == 0.0) continue;
      double step = s.c_in(j);
      bool axis_j = true;
      for (int m = 0; m < q; ++m)
        if (m != j && s.c_in(m) != 0.0) axis_j = false;
      if (!axis_j || step == 0.0) continue;
      double mag = std::abs(step);
      if (best_step == 0.0 || mag < best_step) {
        best_step = mag;
        plus = minus = nullptr;
      }
      if (mag == best_step) {
        if (step > 0) plus = &s.c_out;
        else minus = &s.c_out;
      }
    }
    if (!plus || !minus)
      throw invalid_argument("linearize: sample table lacks a symmetric stencil on axis " +
                             std::to_string(j));
    J.col(j) = (*plus - *minus) / (2.0 * best_step);
  }
  return J;
}

}  // namespace holab

#endif
