#include "support.hpp"

#include "hgt/errors.hpp"

using namespace hgt;
using namespace hgt::test;

namespace {

Mat su2_x() {
  Mat m(2, 2);
  m << cplx(0, 1), 0, 0, cplx(0, -1);
  return m;
}

Mat su2_y() {
  Mat m(2, 2);
  m << 0, 1, -1, 0;
  return m;
}

}  // namespace

TEST_CASE("evaluating a one-form") {
  const GroupDescriptor su2 = GroupDescriptor::su(2);
  const OneForm a(su2, {MatrixField::parse({{"i*x2", "0"}, {"0", "-i*x2"}}, 2), MatrixField::zero(2, 2)});
  CHECK(dist(a(vec2(0, 3), vec2(1, 0)), 3.0 * su2_x()) <= 1e-15);
  CHECK(dist(a(vec2(0, 3), vec2(0, 1)), Mat::Zero(2, 2)) <= 1e-15);
  CHECK(dist(a(vec2(0, 3), vec2(2, 5)), 6.0 * su2_x()) <= 1e-15);
}

TEST_CASE("evaluating a two-form") {
  const GroupDescriptor su2 = GroupDescriptor::su(2);
  TwoForm b(su2, 3);
  b.set(0, 1, MatrixField::constant(su2_y(), 3));
  CHECK(dist(b(vec3(0, 0, 0), unit(3, 0), unit(3, 1)), su2_y()) <= 1e-15);
  CHECK(dist(b(vec3(0, 0, 0), unit(3, 1), unit(3, 0)), -su2_y()) <= 1e-15);
  CHECK(b(vec3(0, 0, 0), unit(3, 0), unit(3, 2)).norm() <= 1e-15);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  const Vec v = vec3(n(rng), n(rng), n(rng)), w = vec3(n(rng), n(rng), n(rng));
  CHECK(b(vec3(0, 0, 0), v, v).norm() <= 1e-15);
  CHECK(dist(b(vec3(0, 0, 0), v, w), -b(vec3(0, 0, 0), w, v)) <= 1e-15);
}

TEST_CASE("abelian curvature of x1 dx2") {
  const GroupDescriptor u1 = GroupDescriptor::u1();
  const OneForm a(u1, {MatrixField::zero(1, 2), MatrixField::parse({{"i*x1"}}, 2)});
  const Mat k = curvature_two_form(a, vec2(0.3, -0.4), unit(2, 0), unit(2, 1));
  CHECK(std::abs(k(0, 0) - cplx(0, 1)) <= 1e-14);
  const TwoForm kf = curvature_form(a);
  CHECK(kf.is_symbolic());
  CHECK(std::abs(kf(vec2(1, 1), unit(2, 0), unit(2, 1))(0, 0) - cplx(0, 1)) <= 1e-14);
}

TEST_CASE("symbolic and numeric curvature agree") {
  const OneForm a = su2_connection();
  const TwoForm k = curvature_form(a);
  const OneForm native(a.descriptor(),
                       {MatrixField::native(2, 2, [a](const Vec& x) { return a.component(0)(x); }),
                        MatrixField::native(2, 2, [a](const Vec& x) { return a.component(1)(x); })});
  for (const Vec& x : SampleSpec::unit_box(2, 16, 5).points()) {
    const Mat exact = k(x, unit(2, 0), unit(2, 1));
    CHECK(dist(curvature_two_form(native, x, unit(2, 0), unit(2, 1)), exact) <= 1e-7);
    CHECK(mat::algebra_residual(a.descriptor(), exact) <= 1e-12);
  }
}

TEST_CASE("fake curvature") {
  const ConnectionPair p = eg_pair();
  CHECK(p.fc_report().max_residual <= 1e-12);
  CHECK(fake_curvature_residual(p.cm(), p.A(), p.B(), SampleSpec::unit_box(2, 64)).max_residual <= 1e-12);

  const CrossedModule eg = make_eg(GroupDescriptor::su(2));
  TwoForm shifted(GroupDescriptor::su(2), 2);
  shifted.set(0, 1, MatrixField::constant(0.1 * su2_y(), 2));
  const TwoForm k = curvature_form(su2_connection());
  TwoForm bad(GroupDescriptor::su(2), 2);
  bad.set(0, 1, MatrixField::symbolic(k.component(0, 1)->expr() + shifted.component(0, 1)->expr(), 2));
  try {
    ConnectionPair(eg, su2_connection(), bad);
    FAIL("accepted a pair violating fake flatness");
  } catch (const FakeCurvatureError& e) {
    CHECK(e.residual() >= 0.1);
  }
}

TEST_CASE("BU(1) pairs need a flat connection only") {
  CHECK_NOTHROW(b_u1_pair());
  const CrossedModule cm = make_b_abelian(GroupDescriptor::u1());
  TwoForm b(cm.H(), 2);
  CHECK(cm.G().algebra_dim() == 0);
  CHECK_NOTHROW(ConnectionPair(cm, OneForm::zero(cm.G(), 2), b));
}

TEST_CASE("three-curvature of an abelian two-form") {
  const CrossedModule cm = make_b_abelian(GroupDescriptor::u1());
  TwoForm b(cm.H(), 3);
  b.set(1, 2, MatrixField::parse({{"i*x1"}}, 3));
  const ConnectionPair p(cm, OneForm::zero(cm.G(), 3), b);
  const Mat h = curvature_three_form(p, vec3(0.2, 0.3, 0.4), unit(3, 0), unit(3, 1), unit(3, 2));
  CHECK(std::abs(h(0, 0) - cplx(0, 1)) <= 1e-8);
}

TEST_CASE("EG three-curvature vanishes by the Bianchi identity") {
  const ConnectionPair p = eg_pair();
  // Ambient dimension 2 has no 3-vectors; lift to 3 dimensions.
  const OneForm a2 = su2_connection();
  const OneForm a(a2.descriptor(),
                  {MatrixField::parse({{"i*x2", "0.5*x1 + 0.3*x3"}, {"-0.5*x1 - 0.3*x3", "-i*x2"}}, 3),
                   MatrixField::parse({{"0.7*i*x1^2", "0.2*i + 0.4*x2"}, {"0.2*i - 0.4*x2", "-0.7*i*x1^2"}}, 3),
                   MatrixField::parse({{"i*x1*x2", "x3"}, {"-x3", "-i*x1*x2"}}, 3)});
  const ConnectionPair p3(p.cm(), a, curvature_form(a));
  CHECK(curvature_three_form(p3, vec3(0.3, 0.6, 0.2), unit(3, 0), unit(3, 1), unit(3, 2)).norm() <= 1e-7);
}

TEST_CASE("alpha wedge") {
  const CrossedModule eg = make_eg(GroupDescriptor::su(2));
  const OneForm a(eg.G(), {MatrixField::constant(su2_x(), 2), MatrixField::zero(2, 2)});
  const OneForm phi(eg.H(), {MatrixField::zero(2, 2), MatrixField::constant(su2_y(), 2)});
  const Mat w = alpha_wedge(eg, a, phi, vec2(0, 0), unit(2, 0), unit(2, 1));
  CHECK(dist(w, mat::commutator(su2_x(), su2_y())) <= 1e-6);
  CHECK(dist(alpha_wedge(eg, a, phi, vec2(0, 0), unit(2, 1), unit(2, 0)), -w) <= 1e-12);
}

TEST_CASE("sample points") {
  SampleSpec s = SampleSpec::unit_box(3, 100, 9);
  const auto pts = s.points();
  CHECK(pts.size() == 100);
  for (const Vec& p : pts) CHECK(((p.array() >= 0.0).all() && (p.array() <= 1.0).all()));
  CHECK(s.points()[17] == pts[17]);
}
