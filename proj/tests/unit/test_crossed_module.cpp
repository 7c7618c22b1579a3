#include "support.hpp"

#include "hgt/errors.hpp"

using namespace hgt;
using namespace hgt::test;

TEST_CASE("the standard crossed modules satisfy the axioms") {
  for (const std::string name : {"eg:su(2)", "eg:so(3)", "b_u1", "aut_inner:su(2)", "eg:ut(3)"}) {
    CAPTURE(name);
    const CrossedModule cm = parse_crossed_module(name);
    const AxiomReport r = verify_axioms(cm, 60, 1e-9, 7);
    for (const auto& [axiom, v] : r.residuals) {
      CAPTURE(axiom);
      CHECK(v <= 1e-9);
    }
    CHECK(r.pass);
    CHECK(interchange_residual(cm, 30, 3) <= 1e-9);
  }
}

TEST_CASE("a corrupted action is caught") {
  const GroupDescriptor su2 = GroupDescriptor::su(2);
  // alpha(g, h) = g^-1 h g is a right action: equivariance of t fails.
  const CrossedModule bad = CrossedModule::custom(
      su2, su2, [](const Mat& h) { return h; },
      [](const Mat& g, const Mat& h) { return Mat(g.adjoint() * h * g); }, "bad");
  const AxiomReport r = verify_axioms(bad, 60, 1e-9, 7);
  CHECK_FALSE(r.pass);
  CHECK(r.max_residual() >= 0.1);
}

TEST_CASE("EG differentials") {
  const CrossedModule eg = make_eg(GroupDescriptor::su(2));
  std::mt19937_64 rng(1);
  const Mat x = random_algebra_matrix(eg.G(), rng);
  const Mat y = random_algebra_matrix(eg.H(), rng);
  const Mat g = random_g(eg, rng);
  const Mat h = random_h(eg, rng);
  CHECK(dist(eg.t(h), h) <= 1e-15);
  CHECK(dist(eg.t_star(y), y) <= 1e-9);
  CHECK(dist(eg.alpha_star(x, y), mat::commutator(x, y)) <= 1e-6);
  CHECK(dist(eg.alpha_g_star(g, y), g * y * g.adjoint()) <= 1e-9);
  CHECK(dist(eg.alpha_h_star(h, x), x * h - h * x) <= 1e-9);
}

TEST_CASE("B of an abelian group acts trivially") {
  const CrossedModule b = make_b_abelian(GroupDescriptor::u1());
  CHECK(b.G().n == 1);
  std::mt19937_64 rng(2);
  const Mat h = random_h(b, rng);
  CHECK(dist(b.alpha(random_g(b, rng), h), h) <= 1e-15);
  CHECK(dist(b.t(h), mat::identity(1)) <= 1e-15);
  CHECK_THROWS_AS(make_b_abelian(GroupDescriptor::su(2)), DomainError);
}

TEST_CASE("inner automorphisms live in the adjoint image") {
  const CrossedModule cm = make_aut_inner(GroupDescriptor::su(2));
  CHECK(cm.G() == GroupDescriptor::so(3));
  std::mt19937_64 rng(3);
  const Mat h = random_h(cm, rng);
  const Mat k = random_h(cm, rng);
  CHECK(dist(cm.alpha(cm.t(h), k), h * k * h.adjoint()) <= 1e-12);
  CHECK(mat::group_residual(cm.G(), cm.t(h)) <= 1e-12);
  CHECK_THROWS_AS(make_aut_inner(GroupDescriptor::u1()), DomainError);
}

TEST_CASE("vertical and horizontal composition") {
  const CrossedModule cm = make_eg(GroupDescriptor::su(2));
  std::mt19937_64 rng(4);
  const Mat g = random_g(cm, rng), h1 = random_h(cm, rng), h2 = random_h(cm, rng);
  const TwoMorphismValue first = make_two_morphism(cm, g, h1);
  const TwoMorphismValue second = make_two_morphism(cm, first.target.matrix(), h2);
  const TwoMorphismValue v = vcompose(cm, second, first);
  CHECK(dist(v.h_part.matrix(), h2 * h1) <= 1e-12);
  CHECK(dist(v.source.matrix(), g) <= 1e-12);
  CHECK(target_matching_residual(cm, v) <= 1e-12);
  CHECK_THROWS_AS(vcompose(cm, first, first), CompositionError);

  const Mat g2 = random_g(cm, rng);
  const TwoMorphismValue other = make_two_morphism(cm, g2, h2);
  const TwoMorphismValue hc = hcompose(cm, other, first);
  CHECK(dist(hc.source.matrix(), g2 * g) <= 1e-12);
  CHECK(dist(hc.h_part.matrix(), h2 * cm.alpha(g2, h1)) <= 1e-12);
  CHECK(target_matching_residual(cm, hc) <= 1e-12);
}

TEST_CASE("crossed module names") {
  CHECK(parse_crossed_module("b_u1").kind() == CrossedModuleKind::BAbelian);
  CHECK(parse_crossed_module("eg:so(3)").kind() == CrossedModuleKind::EG);
  CHECK(parse_crossed_module("aut_inner:su(2)").kind() == CrossedModuleKind::AutInner);
  CHECK_THROWS_AS(parse_crossed_module("xyz"), ConfigError);
  CHECK_THROWS_AS(parse_crossed_module("eg:"), ConfigError);
}
