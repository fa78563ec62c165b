#ifndef HOLAB_SCENARIO_HPP
#define HOLAB_SCENARIO_HPP

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "holab/foliation.hpp"
#include "holab/lie_pair.hpp"

namespace holab {

using Json = nlohmann::json;

/// Pass/fail thresholds; scenarios may override individual entries and the
/// CLI can scale them uniformly.
struct ToleranceSet {
  double flatness = 1e-10;
  double linearity = 1e-12;
  double diff_match = 1e-7;
  double ratio_lo = 3.5;
  double ratio_hi = 4.5;
  double agree = 1e-10;
  double morphism = 1e-9;
  double chi_trivial = 1e-8;
  double rightinv = 1e-9;
  double linear_anchor = 1e-6;
  double fol_map = 1e-8;
  double fol_linear = 1e-8;
  double fol_variational = 1e-7;
  double bott_transport = 1e-6;
  double pairdemo = 1e-9;
  double reversal = 1e-8;

  ToleranceSet scaled(double s) const {
    ToleranceSet t = *this;
    t.flatness *= s;
    t.linearity *= s;
    t.diff_match *= s;
    t.agree *= s;
    t.morphism *= s;
    t.chi_trivial *= s;
    t.rightinv *= s;
    t.linear_anchor *= s;
    t.fol_map *= s;
    t.fol_linear *= s;
    t.fol_variational *= s;
    t.bott_transport *= s;
    t.pairdemo *= s;
    t.reversal *= s;
    return t;
  }
};

struct PathSpec {
  bool is_interval = true;
  double from = 0.0, to = 0.0;
  std::vector<FlowStep> word;

  LeafwisePath build() const {
    return is_interval ? LeafwisePath::interval(from, to) : LeafwisePath::flow_word(word);
  }
};

struct LiePairSpec {
  std::string ambient_name = "g";
  std::vector<Matrix> ambient;          // matrix realization (empty for abstract)
  std::vector<Matrix> sub;              // subalgebra matrices
  std::vector<Matrix> complement_mats;  // optional override
  int sc_dim = 0;                       // abstract realization
  std::vector<Matrix> sc_tensor;        // slabs tensor[i](j, m)
  Matrix sub_coords;                    // abstract: k x p columns
  Matrix complement_coords;             // abstract optional override
  double slice_radius = 0.1;
  std::vector<double> h_times{0.1, 0.3};

  bool is_abstract() const { return ambient.empty(); }

  LiePair build(const std::string& name) const {
    if (!is_abstract()) {
      std::optional<std::vector<Matrix>> comp;
      if (!complement_mats.empty()) comp = complement_mats;
      return LiePair::from_matrices(name, LieAlgebraBasis(ambient_name, ambient), sub, comp);
    }
    StructureConstants sc = StructureConstants::from_tensor(sc_dim, sc_tensor);
    std::optional<Matrix> comp;
    if (complement_coords.size() > 0) comp = complement_coords;
    return LiePair::from_structure(name, sc, sub_coords, comp);
  }
};

struct FoliationSpec {
  std::string variant = "ode_graph";  // or "spanned"
  int dim = 2;
  Vector box_lo, box_hi;
  std::vector<std::string> f;                     // graph right-hand side
  std::vector<std::vector<std::string>> fields;   // spanned fields
  std::vector<PathSpec> paths;
  Vector base;                                    // graph: start point (x0, y0)
  Vector slice0_base, slice1_base;                // spanned slices
  Matrix slice0_dirs, slice1_dirs;
  double sample_radius = 0.1;
  int random_count = 0;
  double rk_tol = 1e-10;
  std::vector<std::string> expected_map;          // offset expressions, optional
  Matrix expected_linear;                         // 0x0 when absent
  Matrix expected_variational;

  FoliationModel build() const {
    Box box(box_lo, box_hi);
    if (variant == "ode_graph") {
      std::vector<Expr> rhs;
      for (const auto& s : f) rhs.push_back(Expr::parse(s, coordinate_names(dim)));
      return FoliationModel::ode_graph(box, rhs);
    }
    std::vector<VecField> vfs;
    for (const auto& comps : fields) {
      std::vector<Expr> es;
      for (const auto& s : comps) es.push_back(Expr::parse(s, coordinate_names(dim)));
      vfs.emplace_back(std::move(es));
    }
    return FoliationModel::spanned(box, vfs);
  }
};

struct Scenario {
  std::string name;
  std::string kind;  // "lie_pair" | "foliation"
  LiePairSpec lie;
  FoliationSpec fol;
  ToleranceSet tol;
};

// ---------------------------------------------------------------------------
// JSON binding
// ---------------------------------------------------------------------------

namespace detail {

[[noreturn]] inline void schema_fail(const std::string& where, const std::string& what) {
  throw schema_error("scenario schema: " + where + ": " + what);
}

inline Matrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) schema_fail(where, "expected a nonempty array of rows");
  const auto rows = j.size();
  size_t cols = 0;
  Matrix m;
  for (size_t r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || row.empty()) schema_fail(where, "row " + std::to_string(r) + " is not an array");
    if (r == 0) {
      cols = row.size();
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      schema_fail(where, "ragged rows");
    }
    for (size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number()) schema_fail(where, "non-numeric entry");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c].get<double>();
    }
  }
  return m;
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

inline Vector vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_fail(where, "expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) schema_fail(where, "non-numeric entry");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

inline Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline std::vector<Matrix> matrix_list_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) schema_fail(where, "expected a nonempty array of matrices");
  std::vector<Matrix> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(matrix_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline void tolerances_from_json(const Json& j, ToleranceSet& t) {
  auto get = [&](const char* key, double& slot) {
    if (j.contains(key)) {
      if (!j[key].is_number()) schema_fail(std::string("tolerances.") + key, "expected a number");
      slot = j[key].get<double>();
    }
  };
  get("flatness", t.flatness);
  get("linearity", t.linearity);
  get("diff_match", t.diff_match);
  get("ratio_lo", t.ratio_lo);
  get("ratio_hi", t.ratio_hi);
  get("agree", t.agree);
  get("morphism", t.morphism);
  get("chi_trivial", t.chi_trivial);
  get("rightinv", t.rightinv);
  get("linear_anchor", t.linear_anchor);
  get("fol_map", t.fol_map);
  get("fol_linear", t.fol_linear);
  get("fol_variational", t.fol_variational);
  get("bott_transport", t.bott_transport);
  get("pairdemo", t.pairdemo);
  get("reversal", t.reversal);
}

inline Json tolerances_to_json(const ToleranceSet& t) {
  Json j;
  j["flatness"] = t.flatness;
  j["linearity"] = t.linearity;
  j["diff_match"] = t.diff_match;
  j["ratio_lo"] = t.ratio_lo;
  j["ratio_hi"] = t.ratio_hi;
  j["agree"] = t.agree;
  j["morphism"] = t.morphism;
  j["chi_trivial"] = t.chi_trivial;
  j["rightinv"] = t.rightinv;
  j["linear_anchor"] = t.linear_anchor;
  j["fol_map"] = t.fol_map;
  j["fol_linear"] = t.fol_linear;
  j["fol_variational"] = t.fol_variational;
  j["bott_transport"] = t.bott_transport;
  j["pairdemo"] = t.pairdemo;
  j["reversal"] = t.reversal;
  return j;
}

}  // namespace detail

inline Scenario scenario_from_json(const Json& j) {
  using detail::schema_fail;
  Scenario s;
  if (!j.is_object()) schema_fail("$", "expected an object");
  if (!j.contains("name") || !j["name"].is_string()) schema_fail("name", "required string");
  if (!j.contains("kind") || !j["kind"].is_string()) schema_fail("kind", "required string");
  s.name = j["name"].get<std::string>();
  s.kind = j["kind"].get<std::string>();
  if (j.contains("tolerances")) detail::tolerances_from_json(j["tolerances"], s.tol);

  if (s.kind == "lie_pair") {
    LiePairSpec& L = s.lie;
    const bool has_matrices = j.contains("ambient");
    const bool has_sc = j.contains("structure_constants");
    if (has_matrices == has_sc)
      schema_fail("$", "lie_pair needs exactly one of 'ambient' or 'structure_constants'");
    if (has_matrices) {
      const Json& amb = j["ambient"];
      if (!amb.is_object() || !amb.contains("matrices"))
        schema_fail("ambient", "expected an object with 'matrices'");
      if (amb.contains("name")) L.ambient_name = amb["name"].get<std::string>();
      L.ambient = detail::matrix_list_from_json(amb["matrices"], "ambient.matrices");
      if (!j.contains("sub") || !j["sub"].is_object() || !j["sub"].contains("matrices"))
        schema_fail("sub", "expected an object with 'matrices'");
      L.sub = detail::matrix_list_from_json(j["sub"]["matrices"], "sub.matrices");
      if (j.contains("complement")) {
        if (!j["complement"].is_object() || !j["complement"].contains("matrices"))
          schema_fail("complement", "expected an object with 'matrices'");
        L.complement_mats =
            detail::matrix_list_from_json(j["complement"]["matrices"], "complement.matrices");
      }
    } else {
      const Json& sc = j["structure_constants"];
      if (!sc.is_object() || !sc.contains("dim") || !sc.contains("tensor"))
        schema_fail("structure_constants", "expected an object with 'dim' and 'tensor'");
      L.sc_dim = sc["dim"].get<int>();
      if (L.sc_dim <= 0) schema_fail("structure_constants.dim", "must be positive");
      const Json& tensor = sc["tensor"];
      if (!tensor.is_array() || static_cast<int>(tensor.size()) != L.sc_dim)
        schema_fail("structure_constants.tensor", "expected dim slabs");
      for (int i = 0; i < L.sc_dim; ++i) {
        Matrix slab = detail::matrix_from_json(tensor[static_cast<size_t>(i)],
                                               "structure_constants.tensor[" + std::to_string(i) + "]");
        if (slab.rows() != L.sc_dim || slab.cols() != L.sc_dim)
          schema_fail("structure_constants.tensor", "slab shape mismatch");
        L.sc_tensor.push_back(std::move(slab));
      }
      if (!j.contains("sub") || !j["sub"].is_object() || !j["sub"].contains("coords"))
        schema_fail("sub", "abstract pairs give the subalgebra as 'coords'");
      L.sub_coords = detail::matrix_from_json(j["sub"]["coords"], "sub.coords");
      if (j.contains("complement")) {
        if (!j["complement"].is_object() || !j["complement"].contains("coords"))
          schema_fail("complement", "abstract pairs give the complement as 'coords'");
        L.complement_coords =
            detail::matrix_from_json(j["complement"]["coords"], "complement.coords");
      }
    }
    if (j.contains("slice_radius")) L.slice_radius = j["slice_radius"].get<double>();
    if (!(L.slice_radius > 0)) schema_fail("slice_radius", "must be positive");
    if (j.contains("h_times")) {
      L.h_times.clear();
      for (const auto& v : j["h_times"]) L.h_times.push_back(v.get<double>());
      if (L.h_times.empty()) schema_fail("h_times", "must be nonempty");
    }
  } else if (s.kind == "foliation") {
    FoliationSpec& F = s.fol;
    if (j.contains("variant")) F.variant = j["variant"].get<std::string>();
    if (F.variant != "ode_graph" && F.variant != "spanned")
      schema_fail("variant", "must be 'ode_graph' or 'spanned'");
    if (!j.contains("dim")) schema_fail("dim", "required");
    F.dim = j["dim"].get<int>();
    if (F.dim < 2) schema_fail("dim", "must be at least 2");
    if (!j.contains("box") || !j["box"].is_object())
      schema_fail("box", "required object with 'lo' and 'hi'");
    F.box_lo = detail::vector_from_json(j["box"]["lo"], "box.lo");
    F.box_hi = detail::vector_from_json(j["box"]["hi"], "box.hi");
    if (F.box_lo.size() != F.dim || F.box_hi.size() != F.dim)
      schema_fail("box", "bounds must have 'dim' entries");

    if (F.variant == "ode_graph") {
      if (!j.contains("f") || !j["f"].is_array() ||
          static_cast<int>(j["f"].size()) != F.dim - 1)
        schema_fail("f", "graph models need dim-1 expressions");
      for (const auto& e : j["f"]) F.f.push_back(e.get<std::string>());
      if (!j.contains("base")) schema_fail("base", "graph models need a base point");
      F.base = detail::vector_from_json(j["base"], "base");
      if (F.base.size() != F.dim) schema_fail("base", "needs 'dim' entries");
    } else {
      if (!j.contains("fields") || !j["fields"].is_array() || j["fields"].empty())
        schema_fail("fields", "spanned models need spanning fields");
      for (const auto& fj : j["fields"]) {
        std::vector<std::string> comps;
        if (!fj.is_array() || static_cast<int>(fj.size()) != F.dim)
          schema_fail("fields", "each field needs 'dim' component expressions");
        for (const auto& c : fj) comps.push_back(c.get<std::string>());
        F.fields.push_back(std::move(comps));
      }
      if (!j.contains("slice0") || !j.contains("slice1"))
        schema_fail("slice0/slice1", "spanned models need explicit slices");
      auto read_slice = [&](const char* key, Vector& base, Matrix& dirs) {
        const Json& sj = j[key];
        if (!sj.is_object() || !sj.contains("base") || !sj.contains("dirs"))
          schema_fail(key, "expected an object with 'base' and 'dirs'");
        base = detail::vector_from_json(sj["base"], std::string(key) + ".base");
        dirs = detail::matrix_from_json(sj["dirs"], std::string(key) + ".dirs");
        if (base.size() != F.dim || dirs.rows() != F.dim)
          schema_fail(key, "dimensions inconsistent with 'dim'");
      };
      read_slice("slice0", F.slice0_base, F.slice0_dirs);
      read_slice("slice1", F.slice1_base, F.slice1_dirs);
    }

    if (!j.contains("paths") || !j["paths"].is_array() || j["paths"].empty())
      schema_fail("paths", "required nonempty array");
    for (const auto& pj : j["paths"]) {
      PathSpec ps;
      if (pj.contains("from") && pj.contains("to")) {
        if (F.variant != "ode_graph") schema_fail("paths", "interval paths are for graph models");
        ps.is_interval = true;
        ps.from = pj["from"].get<double>();
        ps.to = pj["to"].get<double>();
      } else if (pj.contains("word")) {
        if (F.variant != "spanned") schema_fail("paths", "flow words are for spanned models");
        ps.is_interval = false;
        for (const auto& wj : pj["word"]) {
          if (!wj.is_array() || wj.size() != 2) schema_fail("paths.word", "entries are [field, time]");
          FlowStep step;
          step.field = wj[0].get<int>();
          step.time = wj[1].get<double>();
          if (step.field < 0 || step.field >= static_cast<int>(F.fields.size()))
            schema_fail("paths.word", "field index out of range");
          ps.word.push_back(step);
        }
      } else {
        schema_fail("paths", "each path needs 'from'/'to' or 'word'");
      }
      F.paths.push_back(std::move(ps));
    }

    if (j.contains("sample_radius")) F.sample_radius = j["sample_radius"].get<double>();
    if (!(F.sample_radius > 0)) schema_fail("sample_radius", "must be positive");
    if (j.contains("random_count")) F.random_count = j["random_count"].get<int>();
    if (j.contains("rk_tol")) F.rk_tol = j["rk_tol"].get<double>();
    if (j.contains("expected_map"))
      for (const auto& e : j["expected_map"]) F.expected_map.push_back(e.get<std::string>());
    if (j.contains("expected_linear"))
      F.expected_linear = detail::matrix_from_json(j["expected_linear"], "expected_linear");
    if (j.contains("expected_variational"))
      F.expected_variational =
          detail::matrix_from_json(j["expected_variational"], "expected_variational");
  } else {
    schema_fail("kind", "must be 'lie_pair' or 'foliation'");
  }
  return s;
}

inline Json scenario_to_json(const Scenario& s) {
  Json j;
  j["name"] = s.name;
  j["kind"] = s.kind;
  j["tolerances"] = detail::tolerances_to_json(s.tol);
  if (s.kind == "lie_pair") {
    const LiePairSpec& L = s.lie;
    if (!L.is_abstract()) {
      Json amb;
      amb["name"] = L.ambient_name;
      Json mats = Json::array();
      for (const auto& m : L.ambient) mats.push_back(detail::matrix_to_json(m));
      amb["matrices"] = mats;
      j["ambient"] = amb;
      Json sub = Json::array();
      for (const auto& m : L.sub) sub.push_back(detail::matrix_to_json(m));
      j["sub"] = Json{{"matrices", sub}};
      if (!L.complement_mats.empty()) {
        Json comp = Json::array();
        for (const auto& m : L.complement_mats) comp.push_back(detail::matrix_to_json(m));
        j["complement"] = Json{{"matrices", comp}};
      }
    } else {
      Json tensor = Json::array();
      for (const auto& slab : L.sc_tensor) tensor.push_back(detail::matrix_to_json(slab));
      j["structure_constants"] = Json{{"dim", L.sc_dim}, {"tensor", tensor}};
      j["sub"] = Json{{"coords", detail::matrix_to_json(L.sub_coords)}};
      if (L.complement_coords.size() > 0)
        j["complement"] = Json{{"coords", detail::matrix_to_json(L.complement_coords)}};
    }
    j["slice_radius"] = L.slice_radius;
    j["h_times"] = L.h_times;
  } else {
    const FoliationSpec& F = s.fol;
    j["variant"] = F.variant;
    j["dim"] = F.dim;
    j["box"] = Json{{"lo", detail::vector_to_json(F.box_lo)},
                    {"hi", detail::vector_to_json(F.box_hi)}};
    if (F.variant == "ode_graph") {
      j["f"] = F.f;
      j["base"] = detail::vector_to_json(F.base);
    } else {
      Json fields = Json::array();
      for (const auto& comps : F.fields) fields.push_back(comps);
      j["fields"] = fields;
      j["slice0"] = Json{{"base", detail::vector_to_json(F.slice0_base)},
                         {"dirs", detail::matrix_to_json(F.slice0_dirs)}};
      j["slice1"] = Json{{"base", detail::vector_to_json(F.slice1_base)},
                         {"dirs", detail::matrix_to_json(F.slice1_dirs)}};
    }
    Json paths = Json::array();
    for (const auto& p : F.paths) {
      if (p.is_interval) {
        paths.push_back(Json{{"from", p.from}, {"to", p.to}});
      } else {
        Json word = Json::array();
        for (const auto& st : p.word) word.push_back(Json::array({st.field, st.time}));
        paths.push_back(Json{{"word", word}});
      }
    }
    j["paths"] = paths;
    j["sample_radius"] = F.sample_radius;
    j["random_count"] = F.random_count;
    j["rk_tol"] = F.rk_tol;
    if (!F.expected_map.empty()) j["expected_map"] = F.expected_map;
    if (F.expected_linear.size() > 0)
      j["expected_linear"] = detail::matrix_to_json(F.expected_linear);
    if (F.expected_variational.size() > 0)
      j["expected_variational"] = detail::matrix_to_json(F.expected_variational);
  }
  return j;
}

inline Scenario parse_scenario_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw schema_error(std::string("scenario is not valid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace holab

#endif
