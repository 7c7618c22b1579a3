#include "support.hpp"

#include <cmath>
#include <numbers>

#include "hgt/errors.hpp"
#include "hgt/transgression.hpp"

using namespace hgt;
using namespace hgt::test;

namespace {

ConnectionPair b_u1_3d() {
  const CrossedModule cm = make_b_abelian(GroupDescriptor::u1());
  TwoForm b(cm.H(), 3);
  b.set(0, 1, MatrixField::parse({{"i*(0.4 + 0.3*x3 - 0.2*x1*x2)"}}, 3));
  b.set(0, 2, MatrixField::parse({{"i*(0.5*x2 + 0.1*x1^2)"}}, 3));
  b.set(1, 2, MatrixField::parse({{"i*(0.2 - 0.6*x1*x3)"}}, 3));
  return ConnectionPair(cm, OneForm::zero(cm.G(), 3), b);
}

ConnectionPair eg_3d() {
  const OneForm a(GroupDescriptor::su(2),
                  {MatrixField::parse({{"i*x2", "0.5*x1 + 0.3*x3"}, {"-0.5*x1 - 0.3*x3", "-i*x2"}}, 3),
                   MatrixField::parse({{"0.7*i*x1^2", "0.2*i + 0.4*x2"}, {"0.2*i - 0.4*x2", "-0.7*i*x1^2"}}, 3),
                   MatrixField::parse({{"i*x1*x2", "x3"}, {"-x3", "-i*x1*x2"}}, 3)});
  return ConnectionPair(make_eg(GroupDescriptor::su(2)), a, curvature_form(a));
}

LoopVariation variation(const std::vector<std::string>& comps) {
  const Loop l = Loop::from_expressions(comps);
  return [l](double z) { return l(z); };
}

}  // namespace

TEST_CASE("abelian transgressed phi") {
  const auto& o = oracle().at("transgressed_phi_b_u1");
  const Loop tau = Loop::from_expressions(o.at("loop").get<std::vector<std::string>>());
  const LoopVariation dtau = variation(o.at("variation").get<std::vector<std::string>>());
  const Mat phi = transgressed_phi(b_u1_3d(), tau, dtau);
  CHECK(std::abs(phi(0, 0) - cplx(0, o.at("phi").get<double>())) <= 1e-10);
}

TEST_CASE("transgressed phi is linear in the variation") {
  const ConnectionPair p = eg_3d();
  const Loop tau = Loop::from_expressions({"0.5 + 0.3*cos(2*pi*z)", "0.4 + 0.3*sin(2*pi*z)", "0.2*sin(4*pi*z)"});
  const LoopVariation d1 = variation({"cos(2*pi*z)", "0.5", "sin(2*pi*z)"});
  const LoopVariation d2 = variation({"0.2", "sin(4*pi*z)", "1"});
  const LoopVariation sum = [&](double z) { return Vec(2.0 * d1(z) - 3.0 * d2(z)); };
  const Mat lhs = transgressed_phi(p, tau, sum);
  const Mat rhs = 2.0 * transgressed_phi(p, tau, d1) - 3.0 * transgressed_phi(p, tau, d2);
  CHECK(dist(lhs, rhs) <= 1e-12);
  CHECK(mat::algebra_residual(p.cm().H(), lhs) <= 1e-12);
  const LoopVariation tangent = [&](double z) { return tau.velocity(z); };
  CHECK(transgressed_phi(p, tau, tangent).norm() <= 1e-12);
}

TEST_CASE("loop holonomy") {
  const auto& o = oracle().at("loop_holonomy_u1");
  const CrossedModule cm = make_eg(GroupDescriptor::u1());
  const ConnectionPair p(cm, u1_connection(), curvature_form(u1_connection()));
  const Loop tau = Loop::from_expressions(o.at("loop").get<std::vector<std::string>>());
  CHECK(dist(loop_holonomy(p, tau).matrix(), mat_of(o.at("value"))) <= 1e-9);

  const ConnectionPair e = eg_3d();
  const Loop l = Loop::from_expressions({"0.5 + 0.3*cos(2*pi*z)", "0.4 + 0.3*sin(2*pi*z)", "0.2*sin(4*pi*z)"});
  IntegratorConfig cfg;
  cfg.n_steps_path = 512;
  const cplx tr0 = loop_holonomy(e, l, cfg).matrix().trace();
  const cplx tr1 = loop_holonomy(e, l.rotated(0.3), cfg).matrix().trace();
  CHECK(std::abs(tr0 - tr1) <= 1e-8);

  const Loop point = Loop::from_expressions({"0.2", "0.3", "0.4"});
  CHECK(dist(loop_holonomy(e, point).matrix(), mat::identity(2)) <= 1e-15);
}

TEST_CASE("loop-path bigon over a cylinder") {
  const auto& o = oracle().at("cylinder_b_u1");
  const LoopPath gamma = LoopPath::from_expressions({"0.5*cos(2*pi*z)", "0.5*sin(2*pi*z)", "t"});
  IntegratorConfig cfg;
  cfg.n_steps_surface_s = 256;
  cfg.n_quad_t = 256;
  const LoopPathMorphism m = loop_path_two_morphism(b_u1_3d(), gamma, cfg);
  CHECK(dist(m.surface.h_part.matrix(), mat_of(o.at("k"))) <= 1e-8);
  CHECK(m.matching_residual <= 1e-12);

  const TransgressionReport r = transgression_consistency(b_u1_3d(), gamma, cfg);
  CHECK(r.defect <= 1e-4);
  CHECK(dist(r.functor_h, mat_of(o.at("k")).inverse()) <= 1e-8);
}

TEST_CASE("non-abelian transgression converges") {
  const ConnectionPair p = eg_3d();
  const LoopPath gamma = LoopPath::from_expressions(
      {"0.5 + (0.2 + 0.1*t)*cos(2*pi*z)", "0.4 + 0.2*sin(2*pi*z)", "0.3*t + 0.1*sin(2*pi*z)"});
  IntegratorConfig cfg;
  cfg.n_steps_path = 64;
  cfg.n_steps_surface_s = 32;
  cfg.n_quad_t = 32;
  const TransgressionReport coarse = transgression_consistency(p, gamma, cfg);
  const TransgressionReport fine = transgression_consistency(p, gamma, cfg.scaled(2.0));
  CHECK(fine.matching_residual < coarse.matching_residual);
  CHECK(transgression_consistency(p, gamma).matching_residual <= 1e-6);
  CHECK(coarse.defect / fine.defect >= 3.5);
}

TEST_CASE("dimension mismatch") {
  const Loop l = Loop::from_expressions({"cos(2*pi*z)", "sin(2*pi*z)"});
  CHECK_THROWS_AS(loop_holonomy(eg_3d(), l), DomainError);
}
