#ifndef HOLAB_CATALOG_HPP
#define HOLAB_CATALOG_HPP

#include "holab/algebras.hpp"
#include "holab/scenario.hpp"

namespace holab {

// Built-in scenarios with known closed-form behavior; the CLI ships them so
// reports can be produced without any input files.

namespace detail {

inline Scenario lie_pair_scenario(const std::string& name, const LieAlgebraBasis& ambient,
                                  std::vector<Matrix> sub) {
  Scenario s;
  s.name = name;
  s.kind = "lie_pair";
  s.lie.ambient_name = ambient.name();
  s.lie.ambient = ambient.matrices();
  s.lie.sub = std::move(sub);
  return s;
}

inline Scenario graph_scenario(const std::string& name, const std::string& f, Vector lo,
                               Vector hi, double from, double to, double radius) {
  Scenario s;
  s.name = name;
  s.kind = "foliation";
  s.fol.variant = "ode_graph";
  s.fol.dim = 2;
  s.fol.box_lo = std::move(lo);
  s.fol.box_hi = std::move(hi);
  s.fol.f = {f};
  s.fol.base = Vector::Zero(2);
  s.fol.base(0) = from;
  PathSpec p;
  p.is_interval = true;
  p.from = from;
  p.to = to;
  s.fol.paths = {p};
  s.fol.sample_radius = radius;
  s.fol.random_count = 5;
  return s;
}

}  // namespace detail

inline std::vector<std::string> builtin_names() {
  return {"sl2_borel", "heisenberg_center", "so3_in_so3_plus_r", "so3_axis",
          "fol_trivial", "fol_linear", "fol_riccati", "fol_sin"};
}

inline Scenario make_builtin(const std::string& name) {
  const double e1 = 2.718281828459045235;
  const double e2 = 7.389056098930650227;
  const double pi = 3.14159265358979323846;

  if (name == "sl2_borel") {
    LieAlgebraBasis g = sl2_basis();
    return detail::lie_pair_scenario(name, g, {g.matrix(0), g.matrix(1)});
  }
  if (name == "heisenberg_center") {
    LieAlgebraBasis g = heisenberg_basis();
    return detail::lie_pair_scenario(name, g, {g.matrix(2)});
  }
  if (name == "so3_in_so3_plus_r") {
    LieAlgebraBasis g = so3_plus_r_basis();
    return detail::lie_pair_scenario(name, g, {g.matrix(0), g.matrix(1), g.matrix(2)});
  }
  if (name == "so3_axis") {
    LieAlgebraBasis g = so3_basis();
    return detail::lie_pair_scenario(name, g, {g.matrix(2)});
  }
  if (name == "fol_trivial") {
    Scenario s = detail::graph_scenario(name, "0", (Vector(2) << -0.2, -2.0).finished(),
                                        (Vector(2) << 1.2, 2.0).finished(), 0.0, 1.0, 0.3);
    s.fol.expected_map = {"y"};
    s.fol.expected_linear = (Matrix(1, 1) << 1.0).finished();
    s.fol.expected_variational = (Matrix(1, 1) << 1.0).finished();
    return s;
  }
  if (name == "fol_linear") {
    Scenario s = detail::graph_scenario(name, "y", (Vector(2) << -0.2, -2.0).finished(),
                                        (Vector(2) << 1.2, 2.0).finished(), 0.0, 1.0, 0.3);
    s.fol.expected_map = {"2.718281828459045235*y"};
    s.fol.expected_linear = (Matrix(1, 1) << e1).finished();
    s.fol.expected_variational = (Matrix(1, 1) << e1).finished();
    return s;
  }
  if (name == "fol_riccati") {
    Scenario s = detail::graph_scenario(name, "y^2", (Vector(2) << -0.2, -0.6).finished(),
                                        (Vector(2) << 1.2, 0.6).finished(), 0.0, 1.0, 0.3);
    s.fol.expected_map = {"y/(1-y)"};
    s.fol.expected_linear = (Matrix(1, 1) << 1.0).finished();
    s.fol.expected_variational = (Matrix(1, 1) << 1.0).finished();
    // The sampled jet carries the central-difference curvature floor of this
    // genuinely nonlinear map; the pointwise map check stays at 1e-8.
    s.tol.fol_linear = 1e-6;
    return s;
  }
  if (name == "fol_sin") {
    Scenario s = detail::graph_scenario(name, "sin(x)*y", (Vector(2) << -0.2, -3.0).finished(),
                                        (Vector(2) << pi + 0.2, 3.0).finished(), 0.0, pi, 0.3);
    s.fol.expected_map = {"7.389056098930650227*y"};
    s.fol.expected_linear = (Matrix(1, 1) << e2).finished();
    s.fol.expected_variational = (Matrix(1, 1) << e2).finished();
    return s;
  }
  throw schema_error("unknown builtin scenario '" + name + "'");
}

}  // namespace holab

#endif
