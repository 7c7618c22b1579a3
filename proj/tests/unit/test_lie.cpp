#include "support.hpp"

#include <numbers>

#include "hgt/errors.hpp"

using namespace hgt;
using namespace hgt::test;

namespace {

std::vector<GroupDescriptor> all_groups() {
  return {GroupDescriptor::u1(),           GroupDescriptor::su(2), GroupDescriptor::su(3),
          GroupDescriptor::so(3),          GroupDescriptor::so(4), GroupDescriptor::gl(3),
          GroupDescriptor::gl(2, Field::Complex), GroupDescriptor::ut(3)};
}

}  // namespace

TEST_CASE("expm agrees with the reference values") {
  for (const auto& [name, entry] : oracle().at("expm").items()) {
    CAPTURE(name);
    const Mat x = mat_of(entry.at("input"));
    const Mat want = mat_of(entry.at("value"));
    CHECK(dist(mat::expm(x), want) <= 1e-12 * std::max(1.0, want.norm()));
  }
}

TEST_CASE("exp of i pi in u(1) is -1") {
  const GroupDescriptor u1 = GroupDescriptor::u1();
  Mat x(1, 1);
  x(0, 0) = cplx(0.0, std::numbers::pi);
  const GroupElement g = exp_map(AlgebraElement(u1, x));
  CHECK(std::abs(g.matrix()(0, 0) - cplx(-1.0, 0.0)) <= 1e-14);
}

TEST_CASE("algebra dimensions") {
  CHECK(GroupDescriptor::u1().algebra_dim() == 1);
  CHECK(GroupDescriptor::su(2).algebra_dim() == 3);
  CHECK(GroupDescriptor::su(3).algebra_dim() == 8);
  CHECK(GroupDescriptor::so(4).algebra_dim() == 6);
  CHECK(GroupDescriptor::gl(3).algebra_dim() == 9);
  CHECK(GroupDescriptor::gl(2, Field::Complex).algebra_dim() == 8);
  CHECK(GroupDescriptor::ut(3).algebra_dim() == 3);
  for (const auto& d : all_groups()) CHECK(static_cast<int>(mat::algebra_basis(d).size()) == d.algebra_dim());
}

TEST_CASE("exp maps the algebra into the group") {
  std::mt19937_64 rng(3);
  for (const auto& d : all_groups()) {
    CAPTURE(d.name());
    for (int k = 0; k < 20; ++k) {
      const Mat x = random_algebra_matrix(d, rng, 1.5);
      CHECK(mat::algebra_residual(d, x) <= 1e-12);
      CHECK(mat::group_residual(d, mat::expm(x)) <= 1e-10);
    }
  }
}

TEST_CASE("coordinates round trip") {
  std::mt19937_64 rng(5);
  for (const auto& d : all_groups()) {
    const Mat x = random_algebra_matrix(d, rng);
    CHECK(dist(mat::from_coordinates(d, mat::coordinates(d, x)), x) <= 1e-12);
  }
}

TEST_CASE("inverse and retraction") {
  std::mt19937_64 rng(9);
  for (const auto& d : all_groups()) {
    CAPTURE(d.name());
    const Mat g = random_group_matrix(d, rng);
    CHECK(dist(mat::inverse(d, g) * g, mat::identity(d.n)) <= 1e-12);
    CHECK(dist(mat::retract(d, g), g) <= 1e-10);
    Mat drifted = g;
    drifted(0, 0) += cplx(1e-6, 0.0);
    if (d.family != Family::GL) CHECK(mat::group_residual(d, mat::retract(d, drifted)) <= 1e-12);
  }
}

TEST_CASE("adjoint, bracket and right translation match matrix products") {
  std::mt19937_64 rng(11);
  const GroupDescriptor su2 = GroupDescriptor::su(2);
  const GroupElement g(su2, random_group_matrix(su2, rng));
  const AlgebraElement x(su2, random_algebra_matrix(su2, rng));
  const AlgebraElement y(su2, random_algebra_matrix(su2, rng));
  CHECK(dist(adjoint(g, x).matrix(), g.matrix() * x.matrix() * g.matrix().adjoint()) <= 1e-13);
  CHECK(dist(bracket(x, y).matrix(), x.matrix() * y.matrix() - y.matrix() * x.matrix()) <= 1e-13);
  CHECK(dist(right_translate_diff(g, x), x.matrix() * g.matrix()) <= 1e-13);

  // su(2) structure constants in the Pauli normalization: [i s1, i s2] = -2 i s3.
  Mat e1(2, 2), e2(2, 2), e3(2, 2);
  e1 << 0, cplx(0, 1), cplx(0, 1), 0;
  e2 << 0, 1, -1, 0;
  e3 << cplx(0, 1), 0, 0, cplx(0, -1);
  CHECK(dist(bracket(AlgebraElement(su2, e1), AlgebraElement(su2, e2)).matrix(), -2.0 * e3) <= 1e-14);
}

TEST_CASE("right Maurer-Cartan form") {
  const double omega = 1.7;
  GroupCurve c{GroupDescriptor::u1(), [omega](double t) {
                 Mat m(1, 1);
                 m(0, 0) = std::exp(cplx(0.0, omega * t));
                 return m;
               }};
  const AlgebraElement w = maurer_cartan_right(c, 0.4, 1e-4);
  CHECK(std::abs(w.matrix()(0, 0) - cplx(0.0, omega)) <= 1e-7);

  std::mt19937_64 rng(2);
  const GroupDescriptor so3 = GroupDescriptor::so(3);
  const Mat x = random_algebra_matrix(so3, rng);
  GroupCurve one_param{so3, [x](double t) { return mat::expm(Mat(t * x)); }, -1.0, 1.0};
  CHECK(dist(maurer_cartan_right(one_param, 0.2, 1e-4).matrix(), x) <= 1e-7);
  CHECK_THROWS_AS(maurer_cartan_right(one_param, 0.99995, 1e-4), DomainError);
}

TEST_CASE("group elements are validated") {
  Mat m = mat::identity(2);
  m(0, 0) = 2.0;
  CHECK_THROWS_AS(GroupElement(GroupDescriptor::su(2), m), DomainError);
  CHECK_NOTHROW(GroupElement(GroupDescriptor::gl(2), m));
  CHECK_THROWS_AS(AlgebraElement(GroupDescriptor::su(2), mat::identity(2)), DomainError);
}

TEST_CASE("descriptor parsing") {
  CHECK(GroupDescriptor::parse("SU(2)") == GroupDescriptor::su(2));
  CHECK(GroupDescriptor::parse("so(3)") == GroupDescriptor::so(3));
  CHECK(GroupDescriptor::parse("U1") == GroupDescriptor::u1());
  CHECK(GroupDescriptor::parse("GL(2,C)") == GroupDescriptor::gl(2, Field::Complex));
  CHECK(GroupDescriptor::parse("UT(4)") == GroupDescriptor::ut(4));
  CHECK_THROWS_AS(GroupDescriptor::parse("SP(2)"), ConfigError);
  CHECK_THROWS_AS(GroupDescriptor::parse("SU(9)"), ConfigError);
  CHECK_THROWS_AS(GroupDescriptor::parse("SU(x)"), ConfigError);
}
