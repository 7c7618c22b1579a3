#include "support.hpp"

#include "hgt/errors.hpp"
#include "hgt/extraction.hpp"

using namespace hgt;
using namespace hgt::test;

namespace {

MatrixField gauge_g() {
  return MatrixField::parse({{"cos(0.5*x1 + 0.2)*(cos(x2) + i*sin(x2))", "sin(0.5*x1 + 0.2)"},
                             {"-sin(0.5*x1 + 0.2)", "cos(0.5*x1 + 0.2)*(cos(x2) - i*sin(x2))"}},
                            2);
}

OneForm gauge_phi() {
  return OneForm(GroupDescriptor::su(2),
                 {MatrixField::parse({{"0.3*i*x1", "0.2*x2"}, {"-0.2*x2", "-0.3*i*x1"}}, 2),
                  MatrixField::parse({{"0.1*i", "0.4*x1*x2"}, {"-0.4*x1*x2", "-0.1*i"}}, 2)});
}

MatrixField modification_a() {
  return MatrixField::parse({{"cos(0.3*x2)", "sin(0.3*x2)*(cos(x1) + i*sin(x1))"},
                             {"-sin(0.3*x2)*(cos(x1) - i*sin(x1))", "cos(0.3*x2)"}},
                            2);
}

OneForm plus_constant(const OneForm& f, const Mat& delta) {
  const MatrixField c0 = f.component(0);
  return OneForm(f.descriptor(),
                 {MatrixField::native(c0.rows(), 2, [c0, delta](const Vec& x) { return Mat(c0(x) + delta); }),
                  f.component(1)});
}

Mat small_x() {
  Mat m(2, 2);
  m << cplx(0, 0.1), 0, 0, cplx(0, -0.1);
  return m;
}

}  // namespace

TEST_CASE("one-forms are recovered from path transport") {
  const OneForm a = su2_connection();
  IntegratorConfig cfg;
  cfg.n_steps_path = 64;
  const PathFunctor f = [&](const Path& p) { return path_transport_matrix(a, p, cfg); };
  std::mt19937_64 rng(3);
  for (const Vec& x : SampleSpec::unit_box(2, 6, 2).points()) {
    const Vec v = vec2(0.6, -0.8);
    CHECK(dist(extract_one_form(f, a.descriptor(), x, v), a(x, v)) <= 5e-5);
  }
}

TEST_CASE("two-forms are recovered from surface transport") {
  for (const ConnectionPair& p : {b_u1_pair(), eg_pair()}) {
    const TwoFunctor f = two_functor(p);
    const Vec x = vec2(0.4, 0.35), v1 = vec2(0.8, 0.6), v2 = vec2(-0.28, 0.96);
    CHECK(dist(extract_two_form(f, p.cm().H(), x, v1, v2), p.B()(x, v1, v2)) <= 1e-4);
  }
}

TEST_CASE("extraction from a transformation") {
  const CrossedModule eg = make_eg(GroupDescriptor::su(2));
  const OneForm a = su2_connection();
  const auto [a_prime, b_prime] = transform_pair(eg, Z2Morphism{gauge_g(), gauge_phi()}, a, curvature_form(a));
  const PathFunctor h = [&](const Path& p) { return transformation_h(eg, gauge_phi(), a_prime, p); };
  const Vec x = vec2(0.3, 0.6), v = vec2(0, 1);
  const ExtractedTransformation t = extract_transformation([](const Vec& y) { return gauge_g()(y); }, h, eg.H(), x, v);
  CHECK(dist(t.g, gauge_g()(x)) <= 1e-15);
  CHECK(dist(t.phi, gauge_phi()(x, v)) <= 5e-5);
}

TEST_CASE("Maurer-Cartan pullback") {
  const GroupDescriptor u1 = GroupDescriptor::u1();
  const MatrixField g = MatrixField::parse({{"exp(i*x1*x2)"}}, 2);
  const Mat w = pullback_maurer_cartan(g, u1, vec2(0.5, 2.0), vec2(1, 0));
  CHECK(std::abs(w(0, 0) - cplx(0, 2.0)) <= 1e-7);
}

TEST_CASE("transformed pairs satisfy the transformation equations") {
  const CrossedModule eg = make_eg(GroupDescriptor::su(2));
  const OneForm a = su2_connection();
  const TwoForm b = curvature_form(a);
  const Z2Morphism z{gauge_g(), gauge_phi()};
  const auto [a_prime, b_prime] = transform_pair(eg, z, a, b);
  SampleSpec spec = SampleSpec::unit_box(2, 12, 4);
  spec.fd_step = 1e-3;
  CHECK(residual_prop2(eg, z.g, z.phi, a, b, a_prime, b_prime, spec).max() <= 1e-6);
  CHECK(residual_prop1(eg, a_prime, b_prime, spec) <= 1e-5);
  const Prop2Residual bad = residual_prop2(eg, z.g, plus_constant(z.phi, small_x()), a, b, a_prime, b_prime, spec);
  CHECK(bad.max() >= 0.05);

  const Z2Morphism z2 = modify_transformation(eg, modification_a(), z, a_prime);
  CHECK(residual_prop3(eg, modification_a(), z.g, z.phi, z2.g, z2.phi, a_prime, spec).max() <= 1e-6);
  const Prop3Residual bad3 =
      residual_prop3(eg, modification_a(), z.g, z.phi, z2.g, plus_constant(z2.phi, small_x()), a_prime, spec);
  CHECK(bad3.max() >= 0.05);
}

TEST_CASE("transformations are compatible with transport") {
  const CrossedModule eg = make_eg(GroupDescriptor::su(2));
  const OneForm a = su2_connection();
  const Z2Morphism z{gauge_g(), gauge_phi()};
  const auto [a_prime, b_prime] = transform_pair(eg, z, a, curvature_form(a));
  const Path p = Path::from_expressions({"0.2 + 0.6*t", "0.1 + 0.5*t^2"});
  CHECK(transformation_transport(eg, z.g, z.phi, a, a_prime, p).matching_residual <= 1e-6);
  const Z2Morphism z2 = modify_transformation(eg, modification_a(), z, a_prime);
  CHECK(modification_whisker(eg, modification_a(), a_prime, z.phi, z2.phi, p) <= 1e-6);
}

TEST_CASE("composition of transformations is associative") {
  const CrossedModule eg = make_eg(GroupDescriptor::su(2));
  const Z2Morphism z1{gauge_g(), gauge_phi()};
  const Z2Morphism z2{modification_a(), plus_constant(gauge_phi(), small_x())};
  const Z2Morphism z3{MatrixField::constant(mat::expm(Mat(2.0 * small_x())), 2), gauge_phi()};
  const Z2Morphism left = compose_z2_morphisms(compose_z2_morphisms(z1, z2, eg), z3, eg);
  const Z2Morphism right = compose_z2_morphisms(z1, compose_z2_morphisms(z2, z3, eg), eg);
  for (const Vec& x : SampleSpec::unit_box(2, 8, 1).points()) {
    CHECK(dist(left.g(x), right.g(x)) <= 1e-12);
    CHECK(dist(left.phi(x, vec2(0.3, 0.7)), right.phi(x, vec2(0.3, 0.7))) <= 1e-12);
  }
}

TEST_CASE("finite-difference settings are validated") {
  FdConfig fd;
  fd.step = 0.5;
  CHECK_THROWS_AS(fd.validate(), DomainError);
  fd.step = -1e-3;
  CHECK_THROWS_AS(fd.validate(), DomainError);
}
