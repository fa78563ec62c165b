#include <doctest.h>

#include "holab/algebras.hpp"
#include "holab/groupoid_core.hpp"
#include "oracles.hpp"

using namespace holab;

namespace {

ActionGroupoidElement random_element(std::mt19937_64& gen, const LiePair& pair) {
  Vector b = oracle::random_vector(gen, pair.sub_dim(), 0.3);
  Matrix g = mexp(pair.ambient_matrix(oracle::random_vector(gen, pair.ambient_dim(), 0.2)));
  return ActionGroupoidElement{HWord::single(b), g};
}

}  // namespace

TEST_CASE("groupoid: unit and inverse laws") {
  LiePair pair = pair_sl2_borel();
  auto gen = oracle::rng(71);
  ActionGroupoidElement e = random_element(gen, pair);

  // (e, target) composed with (h, g) returns (h, g).
  ActionGroupoidElement u = groupoid_unit(groupoid_target(pair, e));
  ActionGroupoidElement ue = compose(pair, u, e);
  CHECK(ue.h.describe() == e.h.describe());
  CHECK((ue.g - e.g).norm() == 0.0);

  // (h^-1, phi(h) g) (h, g) lands on the unit at g.
  ActionGroupoidElement inv = groupoid_inverse(pair, e);
  ActionGroupoidElement round = compose(pair, inv, e);
  CHECK((groupoid_target(pair, round) - groupoid_source(round)).norm() <= 1e-12);
  CHECK((round.h.phi(pair) - identity(2)).norm() <= 1e-13);
}

TEST_CASE("groupoid: associativity over random composable triples") {
  LiePair pair = pair_sl2_borel();
  auto gen = oracle::rng(73);
  for (int t = 0; t < 20; ++t) {
    ActionGroupoidElement e1 = random_element(gen, pair);
    ActionGroupoidElement e2{HWord::single(oracle::random_vector(gen, 2, 0.3)),
                             groupoid_target(pair, e1)};
    ActionGroupoidElement e3{HWord::single(oracle::random_vector(gen, 2, 0.3)),
                             groupoid_target(pair, e2)};
    ActionGroupoidElement left = compose(pair, compose(pair, e3, e2), e1);
    ActionGroupoidElement right = compose(pair, e3, compose(pair, e2, e1));
    CHECK(left.h.describe() == right.h.describe());
    CHECK((left.g - right.g).norm() == 0.0);
    // Target computed through either association of matrix products.
    Matrix t_left = HWord::concat(e3.h, e2.h).phi(pair) * (e1.h.phi(pair) * e1.g);
    Matrix t_right = e3.h.phi(pair) * (HWord::concat(e2.h, e1.h).phi(pair) * e1.g);
    CHECK((t_left - t_right).norm() <= 1e-12);
  }
}

TEST_CASE("groupoid: non-composable pairs are rejected") {
  LiePair pair = pair_sl2_borel();
  auto gen = oracle::rng(79);
  ActionGroupoidElement e1 = random_element(gen, pair);
  ActionGroupoidElement e2 = random_element(gen, pair);  // source unrelated
  CHECK_THROWS_AS(compose(pair, e2, e1), invalid_argument);
}

TEST_CASE("projection is a groupoid morphism onto the subgroup") {
  LiePair pair = pair_sl2_borel();
  auto gen = oracle::rng(83);
  for (int t = 0; t < 50; ++t) {
    ActionGroupoidElement e1 = random_element(gen, pair);
    ActionGroupoidElement e2{HWord::single(oracle::random_vector(gen, 2, 0.3)),
                             groupoid_target(pair, e1)};
    ActionGroupoidElement prod = compose(pair, e2, e1);
    // The projected word is the concatenation, exactly.
    HWord expect = HWord::concat(project_pi(e2), project_pi(e1));
    REQUIRE(project_pi(prod).factors.size() == expect.factors.size());
    for (size_t i = 0; i < expect.factors.size(); ++i)
      CHECK((project_pi(prod).factors[i] - expect.factors[i]).norm() == 0.0);
    // And the subgroup images multiply accordingly.
    CHECK((project_pi(prod).phi(pair) - project_pi(e2).phi(pair) * project_pi(e1).phi(pair))
              .norm() <= 1e-13);
  }
  ActionGroupoidElement u = groupoid_unit(identity(2));
  CHECK(project_pi(u).is_identity());
}

TEST_CASE("right invariance of the holonomy transform") {
  SliceChart borel(pair_sl2_borel());
  Vector bH(2);
  bH << 0.2, 0.0;
  HWord h = HWord::single(bH);

  // g = identity: both routes are the same arithmetic, discrepancy is zero.
  CHECK(right_invariance_check(borel, h, GroupElement::from(identity(2))) == 0.0);

  // g = exp(0.1 F): independent slides at base e and base g agree.
  Matrix F = sl2_basis().matrix(2);
  GroupElement g = GroupElement::from(mexp(0.1 * F));
  CHECK(right_invariance_check(borel, h, g) <= 1e-9);

  // Heisenberg center: both sides are identity maps.
  SliceChart center(pair_heisenberg_center());
  Vector z(1);
  z << 0.8;
  GroupElement gh = GroupElement::from(
      mexp(center.pair().ambient_matrix((Vector(3) << 0.2, -0.1, 0.05).finished())));
  CHECK(right_invariance_check(center, HWord::single(z), gh) <= 1e-10);
}

TEST_CASE("right invariance across the catalog with random data") {
  auto gen = oracle::rng(89);
  for (LiePair pair : {pair_sl2_borel(), pair_heisenberg_center(), pair_so3_in_so3_plus_r(),
                       pair_so3_axis()}) {
    SliceChart chart(pair);
    for (int t = 0; t < 3; ++t) {
      HWord h = HWord::single(oracle::random_vector(gen, pair.sub_dim(), 0.25));
      GroupElement g = GroupElement::from(
          mexp(pair.ambient_matrix(oracle::random_vector(gen, pair.ambient_dim(), 0.15))));
      CHECK(right_invariance_check(chart, h, g) <= 1e-9);
    }
  }
}
