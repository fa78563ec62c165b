#include <doctest.h>

#include <cmath>

#include "holab/algebras.hpp"
#include "oracles.hpp"

using namespace holab;

namespace {

std::vector<LiePair> catalog_pairs() {
  return {pair_sl2_borel(), pair_heisenberg_center(), pair_so3_in_so3_plus_r(),
          pair_so3_axis()};
}

}  // namespace

TEST_CASE("bott on the Borel pair: [H,F] = -2F, [E,F] in h") {
  LiePair pair = pair_sl2_borel();
  REQUIRE(pair.quotient_dim() == 1);

  Vector bH(2), bE(2);
  bH << 1, 0;
  bE << 0, 1;
  CHECK(pair.bott(bH)(0, 0) == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(std::abs(pair.bott(bE)(0, 0)) <= 1e-13);

  // Matrix-argument form validates membership.
  CHECK(pair.bott(sl2_basis().matrix(0))(0, 0) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(pair.bott(sl2_basis().matrix(2)), invalid_argument);
}

TEST_CASE("bott vanishes for abelian algebras and central subalgebras") {
  Matrix d1 = Matrix::Zero(2, 2), d2 = Matrix::Zero(2, 2);
  d1(0, 0) = 1;
  d2(1, 1) = 1;
  LieAlgebraBasis abelian("diag", {d1, d2});
  LiePair pair = LiePair::from_matrices("abelian", abelian, {d1});
  Vector b(1);
  b << 0.7;
  CHECK(pair.bott(b).norm() == 0.0);
  CHECK(pair.bott_flatness_residual(b, b) == 0.0);

  LiePair heis = pair_heisenberg_center();
  REQUIRE(heis.quotient_dim() == 2);
  Vector z(1);
  z << 1.0;
  CHECK(heis.bott(z).norm() <= 1e-14);
}

TEST_CASE("bott is linear in the subalgebra argument") {
  auto gen = oracle::rng(101);
  for (const LiePair& pair : catalog_pairs()) {
    for (int t = 0; t < 20; ++t) {
      Vector b1 = oracle::random_vector(gen, pair.sub_dim(), 1.0);
      Vector b2 = oracle::random_vector(gen, pair.sub_dim(), 1.0);
      double lam = 0.37 + t * 0.11;
      Matrix lhs = pair.bott(Vector(lam * b1 + b2));
      Matrix rhs = lam * pair.bott(b1) + pair.bott(b2);
      CHECK((lhs - rhs).norm() <= 1e-12);
    }
  }
}

TEST_CASE("flatness residual over catalog pairs and random draws") {
  LiePair borel = pair_sl2_borel();
  Vector bH(2), bE(2);
  bH << 1, 0;
  bE << 0, 1;
  CHECK(borel.bott_flatness_residual(bH, bE) <= 1e-12);

  auto gen = oracle::rng(202);
  for (const LiePair& pair : catalog_pairs()) {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      Vector b1 = oracle::random_vector(gen, pair.sub_dim(), 1.0);
      Vector b2 = oracle::random_vector(gen, pair.sub_dim(), 1.0);
      worst = std::max(worst, pair.bott_flatness_residual(b1, b2));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("exp_ad_rep: identity at eps 0, Borel scalar, nilpotent polynomial") {
  LiePair borel = pair_sl2_borel();
  Vector bH(2);
  bH << 1, 0;
  CHECK((borel.exp_ad_rep(bH, 0.0) - identity(1)).norm() <= 1e-14);
  for (double eps : {0.05, 0.3, 1.0})
    CHECK(borel.exp_ad_rep(bH, eps)(0, 0) ==
          doctest::Approx(std::exp(-2.0 * eps)).epsilon(1e-12));

  // Nilpotent action: h = span(X) in Heisenberg, quotient span(Y, Z);
  // Ad(exp(eps X)) Y = Y + eps Z exactly, Z fixed.
  LieAlgebraBasis heis = heisenberg_basis();
  LiePair nil = LiePair::from_matrices("heis_x", heis, {heis.matrix(0)});
  REQUIRE(nil.quotient_dim() == 2);
  Vector bx(1);
  bx << 1.0;
  for (double eps : {0.2, 0.9}) {
    Matrix rep = nil.exp_ad_rep(bx, eps);
    Matrix expected = oracle::ad_series_quotient(nil, bx, eps);
    CHECK((rep - expected).norm() <= 1e-13);
    // Entries are degree-1 polynomials in eps: second difference vanishes.
    Matrix r2 = nil.exp_ad_rep(bx, 2.0 * eps);
    CHECK((r2 - 2.0 * rep + identity(2)).norm() <= 1e-12);
  }
}

TEST_CASE("exp_ad_rep agrees with the ad-series oracle on the catalog") {
  auto gen = oracle::rng(303);
  for (const LiePair& pair : catalog_pairs()) {
    for (double eps : {0.1, 0.5}) {
      Vector b = oracle::random_vector(gen, pair.sub_dim(), 1.0);
      Matrix got = pair.exp_ad_rep(b, eps);
      Matrix want = oracle::ad_series_quotient(pair, b, eps);
      CHECK((got - want).norm() <= 1e-12);
    }
  }
}

TEST_CASE("exp_ad_rep is a one-parameter group") {
  auto gen = oracle::rng(404);
  for (const LiePair& pair : catalog_pairs()) {
    for (int t = 0; t < 10; ++t) {
      Vector b = oracle::random_vector(gen, pair.sub_dim(), 1.0);
      double e1 = 0.3 * (t + 1) / 10.0, e2 = 0.17;
      Matrix lhs = pair.exp_ad_rep(b, e1 + e2);
      Matrix rhs = pair.exp_ad_rep(b, e1) * pair.exp_ad_rep(b, e2);
      CHECK((lhs - rhs).norm() <= 1e-10);
    }
  }
}

TEST_CASE("differentiate_rep converges to bott at second order") {
  LiePair borel = pair_sl2_borel();
  Vector bH(2);
  bH << 1, 0;
  Matrix d = borel.differentiate_rep(bH, 1e-4);
  CHECK(std::abs(d(0, 0) + 2.0) <= 1e-7);

  // Order check on the rotation-axis pair where the curvature is nonzero.
  LiePair axis = pair_so3_axis();
  Vector b(1);
  b << 1.0;
  Matrix target = axis.bott(b);
  double e1 = (axis.differentiate_rep(b, 1e-3) - target).norm();
  double e2 = (axis.differentiate_rep(b, 5e-4) - target).norm();
  CHECK(e1 / e2 >= 3.5);
  CHECK(e1 / e2 <= 4.5);

  // Abelian: exactly zero for any eps.
  Matrix d1 = Matrix::Zero(2, 2), d2 = Matrix::Zero(2, 2);
  d1(0, 0) = 1;
  d2(1, 1) = 1;
  LiePair ab = LiePair::from_matrices("abelian", LieAlgebraBasis("diag", {d1, d2}), {d1});
  Vector one(1);
  one << 1.0;
  CHECK(ab.differentiate_rep(one, 0.3).norm() <= 1e-15);

  CHECK_THROWS_AS(borel.differentiate_rep(bH, 0.0), invalid_argument);
}

TEST_CASE("is_ideal over the catalog") {
  CHECK(pair_heisenberg_center().is_ideal().ideal);
  CHECK(pair_heisenberg_center().is_ideal().residual <= 1e-14);
  CHECK(pair_so3_in_so3_plus_r().is_ideal().ideal);
  CHECK_FALSE(pair_sl2_borel().is_ideal().ideal);
  CHECK(pair_sl2_borel().is_ideal().residual > 1e-3);
  CHECK_FALSE(pair_so3_axis().is_ideal().ideal);

  // The whole algebra is an ideal in itself; quotient has dimension zero.
  LieAlgebraBasis sl2 = sl2_basis();
  LiePair full = LiePair::from_matrices("sl2_full", sl2, sl2.matrices());
  CHECK(full.quotient_dim() == 0);
  CHECK(full.is_ideal().ideal);
}

TEST_CASE("ideal pairs keep the subalgebra Ad-invariant") {
  auto gen = oracle::rng(505);
  for (const LiePair& pair : {pair_heisenberg_center(), pair_so3_in_so3_plus_r()}) {
    for (int t = 0; t < 10; ++t) {
      Vector b = oracle::random_vector(gen, pair.sub_dim(), 0.5);
      Matrix Ad = mexp(pair.sub_matrix(b));
      Matrix Ad_inv = mexp(-pair.sub_matrix(b));
      for (int j = 0; j < pair.sub_dim(); ++j) {
        Matrix hj = pair.sub_matrix(Vector::Unit(pair.sub_dim(), j));
        Vector coords = pair.ambient_coords(Ad * hj * Ad_inv);
        CHECK(pair.coord_norm(pair.embed_comp(pair.project_comp(coords))) <= 1e-9);
      }
    }
  }
}

TEST_CASE("structure-constants-only pairs support the algebra-level surface") {
  StructureConstants sc = structure_constants(sl2_basis());
  Matrix sub(3, 2);
  sub.setZero();
  sub(0, 0) = 1;  // H
  sub(1, 1) = 1;  // E
  LiePair abstract = LiePair::from_structure("sl2_borel_abstract", sc, sub);
  CHECK_FALSE(abstract.matrix_backed());
  CHECK_THROWS_AS(abstract.ambient_basis(), error);

  Vector bH(2);
  bH << 1, 0;
  CHECK(abstract.bott(bH)(0, 0) == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK_FALSE(abstract.is_ideal().ideal);

  // The coordinate route through exp(ad) must match the conjugation route.
  LiePair concrete = pair_sl2_borel();
  for (double eps : {0.1, 0.4}) {
    Matrix a = abstract.exp_ad_rep(bH, eps);
    Matrix c = concrete.exp_ad_rep(bH, eps);
    CHECK((a - c).norm() <= 1e-12);
  }
}

TEST_CASE("complement override changes the basis, not the quotient action") {
  LieAlgebraBasis sl2 = sl2_basis();
  Matrix tilted = sl2.matrix(2) + 0.5 * sl2.matrix(1);  // F + E/2
  LiePair pair = LiePair::from_matrices("sl2_borel_tilted", sl2,
                                        {sl2.matrix(0), sl2.matrix(1)},
                                        std::vector<Matrix>{tilted});
  Vector bH(2);
  bH << 1, 0;
  CHECK(pair.bott(bH)(0, 0) == doctest::Approx(-2.0).epsilon(1e-12));

  // An override inside the subalgebra span is rejected.
  CHECK_THROWS_WITH_AS(
      LiePair::from_matrices("bad", sl2, {sl2.matrix(0), sl2.matrix(1)},
                             std::vector<Matrix>{sl2.matrix(1)}),
      doctest::Contains("not transverse"), error);
}

TEST_CASE("pair construction rejects non-closed subalgebras") {
  LieAlgebraBasis sl2 = sl2_basis();
  // span(E, F) is not closed: [E,F] = H.
  CHECK_THROWS_WITH_AS(
      LiePair::from_matrices("bad", sl2, {sl2.matrix(1), sl2.matrix(2)}),
      doctest::Contains("not a subalgebra"), error);
}
