// Acceptance suite: runs every gate criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exit code 0 only if all pass.
// argv[1] (optional) is the path to the holab CLI binary, needed for the
// determinism criterion.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "holab/catalog.hpp"
#include "holab/run.hpp"

using namespace holab;

namespace {

struct failure {
  explicit failure(std::string m) : msg(std::move(m)) {}
  std::string msg;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw failure(msg);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<std::string> lie_catalog() {
  return {"sl2_borel", "heisenberg_center", "so3_in_so3_plus_r", "so3_axis"};
}
std::vector<std::string> fol_catalog() {
  return {"fol_trivial", "fol_linear", "fol_riccati", "fol_sin"};
}

LiePair catalog_pair(const std::string& name) {
  Scenario s = make_builtin(name);
  return s.lie.build(name);
}

Vector ball(std::mt19937_64& gen, int dim, double radius) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(dim);
  for (;;) {
    for (int i = 0; i < dim; ++i) v(i) = dist(gen);
    if (v.norm() <= 1.0) return radius * v;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(static_cast<bool>(f), "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int g_failures = 0;

void criterion(int id, const std::string& label, const std::function<std::string()>& body) {
  try {
    std::string detail = body();
    std::printf("PASS  criterion %2d  %s  (%s)\n", id, label.c_str(), detail.c_str());
  } catch (const failure& f) {
    ++g_failures;
    std::printf("FAIL  criterion %2d  %s  (%s)\n", id, label.c_str(), f.msg.c_str());
  } catch (const std::exception& e) {
    ++g_failures;
    std::printf("FAIL  criterion %2d  %s  (exception: %s)\n", id, label.c_str(), e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  criterion(1, "bott flatness <= 1e-10 on catalog pairs + 100 seeded draws", [] {
    double worst = 0.0;
    for (const auto& name : lie_catalog()) {
      LiePair pair = catalog_pair(name);
      const int p = pair.sub_dim();
      for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
          worst = std::max(worst, pair.bott_flatness_residual(Vector(Vector::Unit(p, i)),
                                                              Vector(Vector::Unit(p, j))));
      std::mt19937_64 gen(1001);
      for (int t = 0; t < 100; ++t)
        worst = std::max(worst, pair.bott_flatness_residual(ball(gen, p, 1.0), ball(gen, p, 1.0)));
    }
    require(worst <= 1e-10, "max residual " + fmt(worst));
    return "max residual " + fmt(worst);
  });

  criterion(2, "central difference of exp_ad matches bott (1e-7) with order-2 ratio", [] {
    double worst_err = 0.0;
    double worst_ratio_dev = 0.0;
    int ratio_checked = 0;
    for (const auto& name : lie_catalog()) {
      LiePair pair = catalog_pair(name);
      for (int i = 0; i < pair.sub_dim(); ++i) {
        Vector b = Vector::Unit(pair.sub_dim(), i);
        Matrix target = pair.bott(b);
        double err = operator_norm(pair.differentiate_rep(b, 1e-4) - target);
        require(err <= 1e-7, name + " b" + std::to_string(i) + " err " + fmt(err));
        worst_err = std::max(worst_err, err);
        double e_half = operator_norm(pair.differentiate_rep(b, 5e-5) - target);
        if (e_half >= 5e-11) {
          double ratio = err / e_half;
          require(ratio >= 3.5 && ratio <= 4.5,
                  name + " b" + std::to_string(i) + " ratio " + fmt(ratio));
          worst_ratio_dev = std::max(worst_ratio_dev, std::abs(ratio - 4.0));
          ++ratio_checked;
        }
      }
    }
    return "max err " + fmt(worst_err) + ", " + std::to_string(ratio_checked) +
           " ratios within 4+-" + fmt(worst_ratio_dev);
  });

  criterion(3, "bisection and conjugation routes agree <= 1e-10", [] {
    double worst = 0.0;
    for (const auto& name : lie_catalog()) {
      LiePair pair = catalog_pair(name);
      SliceChart chart(pair);
      const int p = pair.sub_dim();
      const int q = pair.quotient_dim();
      std::vector<HWord> hs;
      for (int i = 0; i < p; ++i) {
        hs.push_back(HWord::single(Vector(0.3 * Vector::Unit(p, i))));
        hs.push_back(HWord::single(Vector(-0.3 * Vector::Unit(p, i))));
      }
      std::mt19937_64 gen(2002);
      for (int t = 0; t < 5; ++t) hs.push_back(HWord::single(ball(gen, p, 0.3)));
      std::vector<Vector> pts = detail::axis_stencil(q, 0.1 * chart.radius(), true);
      auto nine = detail::random_ball(q, 0.1 * chart.radius(), 9, 2003);
      pts.insert(pts.end(), nine.begin(), nine.end());
      for (const auto& h : hs)
        for (const auto& c : pts)
          worst = std::max(
              worst, (chi_bisection_point(chart, h, c) - chi_conj_point(chart, h, c)).norm());
    }
    require(worst <= 1e-10, "max deviation " + fmt(worst));
    return "max deviation " + fmt(worst);
  });

  criterion(4, "groupoid morphism law for chi <= 1e-9 on 20 seeded pairs per entry", [] {
    double worst = 0.0;
    for (const auto& name : lie_catalog()) {
      LiePair pair = catalog_pair(name);
      SliceChart chart(pair);
      const int p = pair.sub_dim();
      auto pts = detail::axis_stencil(pair.quotient_dim(), 0.1 * chart.radius(), true);
      std::mt19937_64 gen(3003);
      for (int t = 0; t < 20; ++t) {
        HWord h1 = HWord::single(ball(gen, p, 0.3));
        HWord h2 = HWord::single(ball(gen, p, 0.3));
        HWord h21 = HWord::concat(h2, h1);
        for (const auto& c : pts) {
          Vector once = chi_conj_point(chart, h21, c);
          Vector twice = chi_conj_point(chart, h2, chi_conj_point(chart, h1, c));
          worst = std::max(worst, (once - twice).norm());
        }
      }
    }
    require(worst <= 1e-9, "max deviation " + fmt(worst));
    return "max deviation " + fmt(worst);
  });

  criterion(5, "normality: heisenberg_center (true,true), sl2_borel (false,false)+witness", [] {
    NormalityReport heis = normality_equivalence(SliceChart(catalog_pair("heisenberg_center")), 20, 0);
    require(heis.ideal && heis.chi_trivial, "heisenberg_center not (true,true)");
    NormalityReport borel = normality_equivalence(SliceChart(catalog_pair("sl2_borel")), 20, 0);
    require(!borel.ideal && !borel.chi_trivial, "sl2_borel not (false,false)");
    require(borel.witness_dev > 1e-3,
            "witness deviation " + fmt(borel.witness_dev) + " not above 1e-3");
    require(heis.consistent && borel.consistent, "equivalence mismatch");
    return "witness |chi(h)c - c| = " + fmt(borel.witness_dev) + " at " + borel.witness_element;
  });

  criterion(6, "right-invariance residual <= 1e-9 on catalog triples", [] {
    double worst = 0.0;
    for (const auto& name : lie_catalog()) {
      LiePair pair = catalog_pair(name);
      SliceChart chart(pair);
      const int p = pair.sub_dim();
      const int k = pair.ambient_dim();
      for (int i = 0; i < p; ++i) {
        Vector hb = Vector::Unit(p, i);
        double hn = pair.coord_norm(pair.embed_sub(hb));
        HWord h = HWord::single(Vector((0.2 / hn) * hb));
        for (int j = 0; j < k; ++j) {
          Vector gc = Vector::Unit(k, j);
          GroupElement g =
              GroupElement::from(mexp(pair.ambient_matrix((0.1 / pair.coord_norm(gc)) * gc)));
          worst = std::max(worst, right_invariance_check(chart, h, g));
        }
      }
    }
    require(worst <= 1e-9, "max residual " + fmt(worst));
    return "max residual " + fmt(worst);
  });

  criterion(7, "sl2_borel anchors: bott(H) = -2 (1e-12), chi jet = exp(-2t) (1e-6)", [] {
    LiePair pair = catalog_pair("sl2_borel");
    Vector bH(2);
    bH << 1, 0;
    double b = pair.bott(bH)(0, 0);
    require(std::abs(b + 2.0) <= 1e-12, "bott(H) = " + fmt(b));
    SliceChart chart(pair);
    double worst = 0.0;
    for (double t : {0.1, 0.3}) {
      HolonomyMap map = chi_conj(chart, HWord::single(Vector(t * bH)));
      double dev = std::abs(map.linear_part(0, 0) - std::exp(-2.0 * t));
      require(dev <= 1e-6, "jet at t=" + fmt(t) + " off by " + fmt(dev));
      worst = std::max(worst, dev);
    }
    return "bott(H) = " + fmt(b) + ", max jet deviation " + fmt(worst);
  });

  criterion(8, "foliation oracles: e, y/(1-y), e^2 at their stated tolerances", [] {
    auto setup = [](const std::string& name) {
      Scenario s = make_builtin(name);
      FoliationModel model = s.fol.build();
      return std::tuple<Scenario, FoliationModel, run_detail::FoliationSetup>(
          s, model, run_detail::foliation_setup(s.fol, model, s.fol.paths.at(0)));
    };

    TransportOptions opts;
    opts.radius = 0.3;
    opts.random_count = 7;
    opts.seed = 4004;

    auto [ls, lmodel, lsetup] = setup("fol_linear");
    HolonomyMap lmap = holonomy_transport(lmodel, lsetup.path, lsetup.slice0, lsetup.slice1, opts);
    double jet_dev = std::abs(lmap.linear_part(0, 0) - 2.718281828459045);
    require(jet_dev <= 1e-8, "fol_linear jet off by " + fmt(jet_dev));
    double map_dev = 0.0;
    for (const auto& smp : lmap.samples) {
      require(smp.ok, "fol_linear sample failed: " + smp.err);
      map_dev = std::max(map_dev,
                         std::abs(smp.c_out(0) - 2.718281828459045235 * smp.c_in(0)));
    }
    require(map_dev <= 1e-8, "fol_linear map off by " + fmt(map_dev));

    auto [rs, rmodel, rsetup] = setup("fol_riccati");
    HolonomyMap rmap = holonomy_transport(rmodel, rsetup.path, rsetup.slice0, rsetup.slice1, opts);
    double ric_dev = 0.0;
    for (const auto& smp : rmap.samples) {
      require(smp.ok, "fol_riccati sample failed: " + smp.err);
      double y = smp.c_in(0);
      ric_dev = std::max(ric_dev, std::abs(smp.c_out(0) - y / (1.0 - y)));
    }
    require(ric_dev <= 1e-8, "fol_riccati map off by " + fmt(ric_dev));

    auto [ss, smodel, ssetup] = setup("fol_sin");
    Matrix varia = linear_holonomy_variational(smodel, ssetup.path, ssetup.slice0, ssetup.slice1);
    double sin_dev = std::abs(varia(0, 0) - 7.389056098930650227);
    require(sin_dev <= 1e-7, "fol_sin variational off by " + fmt(sin_dev));

    return "jet " + fmt(jet_dev) + ", maps " + fmt(std::max(map_dev, ric_dev)) +
           ", variational " + fmt(sin_dev);
  });

  criterion(9, "bott transport check <= 1e-6 on all foliation fixtures", [] {
    double worst = 0.0;
    for (const auto& name : fol_catalog()) {
      Scenario s = make_builtin(name);
      FoliationModel model = s.fol.build();
      auto setup = run_detail::foliation_setup(s.fol, model, s.fol.paths.at(0));
      TransportOptions opts;
      opts.radius = s.fol.sample_radius;
      double r = bott_transport_check(model, setup.path, setup.slice0, setup.slice1, opts).residual;
      require(r <= 1e-6, name + " residual " + fmt(r));
      worst = std::max(worst, r);
    }
    return "max residual " + fmt(worst);
  });

  criterion(10, "pair groupoid demo <= 1e-9 and path reversal <= 1e-8", [] {
    double worst_dev = 0.0, worst_rev = 0.0;
    for (const auto& name : fol_catalog()) {
      Scenario s = make_builtin(name);
      FoliationModel model = s.fol.build();
      auto setup = run_detail::foliation_setup(s.fol, model, s.fol.paths.at(0));
      TransportOptions opts;
      opts.radius = s.fol.sample_radius;
      opts.random_count = 5;
      opts.seed = 5005;
      PairGroupoidReport rep =
          pair_groupoid_demo(model, setup.path, setup.slice0, setup.slice1, opts);
      require(rep.max_pointwise_dev <= 1e-9, name + " dev " + fmt(rep.max_pointwise_dev));
      require(rep.reversal_residual <= 1e-8, name + " reversal " + fmt(rep.reversal_residual));
      worst_dev = std::max(worst_dev, rep.max_pointwise_dev);
      worst_rev = std::max(worst_rev, rep.reversal_residual);
    }
    return "max dev " + fmt(worst_dev) + ", max reversal " + fmt(worst_rev);
  });

  criterion(11, "holab all --builtin sl2_borel --seed 0 is byte-deterministic", [&cli] {
    require(!cli.empty(), "path to the holab binary was not passed as argv[1]");
    namespace fs = std::filesystem;
    fs::path base = fs::temp_directory_path() / "holab_acceptance";
    fs::remove_all(base);
    fs::create_directories(base / "a");
    fs::create_directories(base / "b");
    for (const char* sub : {"a", "b"}) {
      std::string cmd = "\"" + cli + "\" all --builtin sl2_borel --seed 0 --out \"" +
                        (base / sub).string() + "\" > /dev/null 2>&1";
      int rc = std::system(cmd.c_str());
      require(rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) == 0,
              std::string("run ") + sub + " exited with code " +
                  std::to_string(rc == -1 ? -1 : WEXITSTATUS(rc)));
    }
    std::string ra = read_file((base / "a" / "report.json").string());
    std::string rb = read_file((base / "b" / "report.json").string());
    require(!ra.empty() && ra == rb, "reports differ or are empty");
    return std::to_string(ra.size()) + " identical bytes";
  });

  if (g_failures == 0) {
    std::printf("acceptance: all 11 criteria PASS\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return 1;
}
