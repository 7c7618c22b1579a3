#include "support.hpp"

#include <cmath>

#include "hgt/errors.hpp"
#include "hgt/transport.hpp"

using namespace hgt;
using namespace hgt::test;

namespace {

Path oracle_path() {
  return Path::from_expressions(oracle().at("path_transport_su2").at("path").get<std::vector<std::string>>());
}

}  // namespace

TEST_CASE("path transport agrees with the reference ODE solution") {
  IntegratorConfig cfg;
  cfg.n_steps_path = 512;
  const Mat want = mat_of(oracle().at("path_transport_su2").at("value"));
  const Mat got = path_transport_matrix(su2_connection(), oracle_path(), cfg);
  CHECK(dist(got, want) <= 1e-10);
  CHECK(mat::group_residual(GroupDescriptor::su(2), got) <= 1e-13);
}

TEST_CASE("abelian path transport is exp of minus the line integral") {
  const Mat want = mat_of(oracle().at("path_transport_u1").at("value"));
  CHECK(dist(path_transport_matrix(u1_connection(), oracle_path()), want) <= 1e-10);
}

TEST_CASE("RK4 converges at fourth order") {
  double prev = 0.0;
  const Mat want = mat_of(oracle().at("path_transport_su2").at("value"));
  for (int n : {8, 16, 32}) {
    IntegratorConfig cfg;
    cfg.n_steps_path = n;
    cfg.retraction = false;
    const double err = dist(path_transport_matrix(su2_connection(), oracle_path(), cfg), want);
    if (prev > 0.0) CHECK(prev / err >= 12.0);
    prev = err;
  }
}

TEST_CASE("constant coefficients give exp(-a)") {
  std::mt19937_64 rng(2);
  const GroupDescriptor so3 = GroupDescriptor::so(3);
  const Mat a = random_algebra_matrix(so3, rng);
  CHECK(dist(transport_ode(so3, [&](double) { return a; }, 256, true), mat::expm(Mat(-a))) <= 1e-11);
  const auto sweep = transport_sweep(so3, [&](double) { return a; }, 256, true);
  CHECK(sweep.size() == 257);
  CHECK(dist(sweep[128], mat::expm(Mat(-0.5 * a))) <= 1e-11);
}

TEST_CASE("path functor laws") {
  const OneForm a = su2_connection();
  const Path p = Path::line(vec2(0.1, 0.2), vec2(0.7, 0.4));
  const Path q = bulge_path(vec2(0.7, 0.4), vec2(0.3, 0.9), vec2(0.5, 0.2), 0.3);
  const Mat fp = path_transport_matrix(a, p), fq = path_transport_matrix(a, q);
  CHECK(dist(path_transport_matrix(a, path_compose(p, q)), fq * fp) <= 1e-8);
  CHECK(dist(path_transport_matrix(a, path_reverse(p)) * fp, mat::identity(2)) <= 1e-8);
  CHECK(dist(path_transport_matrix(a, reparameterize(q, Reparam::wobble(0.6))), fq) <= 1e-7);
  CHECK(dist(path_transport_matrix(a, Path::constant(vec2(0.3, 0.3))), mat::identity(2)) <= 1e-15);
}

TEST_CASE("EG surface transport on a rectangle") {
  const auto& o = oracle().at("surface_eg_su2_rectangle");
  const auto v = [](const nlohmann::json& j) { return vec2(j[0].get<double>(), j[1].get<double>()); };
  const Bigon b = standard_bigon(PlaneMap::affine(v(o.at("origin")), v(o.at("u")), v(o.at("v"))), 1.0, 1.0);
  IntegratorConfig cfg;
  cfg.n_steps_path = 512;
  const SurfaceTransportResult r = surface_transport(eg_pair(), b, cfg);
  CHECK(dist(r.k.matrix(), mat_of(o.at("k"))) <= 1e-7);
  CHECK(dist(r.g_source.matrix(), mat_of(o.at("f_source"))) <= 1e-8);
  CHECK(r.matching_residual <= 1e-6);
}

TEST_CASE("BU(1) surface transport on the unit square") {
  const auto& o = oracle().at("surface_b_u1_square");
  const Bigon b = standard_bigon(PlaneMap::identity(), 1.0, 1.0);
  IntegratorConfig cfg;
  const double coarse = dist(surface_transport(b_u1_pair(), b, cfg).k.matrix(), mat_of(o.at("k")));
  const double fine = dist(surface_transport(b_u1_pair(), b, cfg.scaled(2.0)).k.matrix(), mat_of(o.at("k")));
  CHECK(coarse <= 1e-6);
  CHECK(fine <= 1e-8);
}

TEST_CASE("abelian surface holonomy sign") {
  const auto& o = oracle().at("surface_b_u1_square");
  const double flux = o.at("flux").get<double>();
  IntegratorConfig cfg;
  cfg.n_steps_surface_s = 256;
  cfg.n_quad_t = 256;
  const Mat k = surface_transport(b_u1_pair(), standard_bigon(PlaneMap::identity(), 1.0, 1.0), cfg).k.matrix();
  CHECK(std::abs(k(0, 0) - std::exp(cplx(0.0, kAbelianSign * flux))) <= 1e-8);
  CHECK(std::abs(k(0, 0) - std::exp(cplx(0.0, -kAbelianSign * flux))) >= 0.5);
}

TEST_CASE("identity bigons have trivial surface transport") {
  for (const ConnectionPair& p : {eg_pair(), b_u1_pair()}) {
    const Bigon id = Bigon::identity(Path::from_expressions({"0.2 + 0.5*t", "0.3 + 0.4*t^2"}));
    const SurfaceTransportResult r = surface_transport(p, id);
    CHECK(dist(r.k.matrix(), mat::identity(r.k.matrix().rows())) <= 1e-12);
  }
}

TEST_CASE("surface transport respects vertical composition") {
  const ConnectionPair p = eg_pair();
  const Vec x0 = vec2(0.1, 0.2), x1 = vec2(0.8, 0.6), w = vec2(-0.4, 0.7);
  const Bigon a = bulge_bigon(x0, x1, w, 0.0, 0.2), b = bulge_bigon(x0, x1, w, 0.2, -0.15);
  const TwoFunctor f = two_functor(p);
  const TwoMorphismValue fab = f(bigon_vcompose(a, b));
  const TwoMorphismValue composed = vcompose(p.cm(), f(b), f(a));
  CHECK(dist(fab.h_part.matrix(), composed.h_part.matrix()) <= 1e-6);
}

TEST_CASE("non-abelian Stokes") {
  const Bigon b = Bigon::from_expressions({"0.8 + 0.3*s*(cos(2*pi*t) - 1)", "0.5 + 0.3*s*sin(2*pi*t)"});
  IntegratorConfig cfg;
  cfg.n_steps_path = 64;
  cfg.n_steps_surface_s = 64;
  cfg.n_quad_t = 64;
  const StokesReport fine = stokes_check(su2_connection(), b, cfg);
  CHECK(fine.error <= 1e-5);
  const StokesReport coarse = stokes_check(su2_connection(), b, cfg.scaled(0.5));
  CHECK(coarse.error / fine.error >= 3.0);
}

TEST_CASE("abelian Stokes against the reference flux") {
  const auto& o = oracle().at("stokes_u1");
  const Bigon b = Bigon::from_expressions(o.at("bigon").get<std::vector<std::string>>());
  const StokesReport r = stokes_check(u1_connection(), b);
  CHECK(dist(r.rhs, mat_of(o.at("value"))) <= 1e-8);
  CHECK(dist(r.lhs, mat_of(o.at("value"))) <= 1e-8);
}

TEST_CASE("stokes requires a constant source") {
  const Bigon b = Bigon::from_expressions({"s + t", "t"});
  CHECK_THROWS_AS(stokes_check(su2_connection(), b), DomainError);
}

TEST_CASE("transformation transport of an abelian gauge shift") {
  // BU(1), A = A' = 0, phi = df: h(gamma) = exp(-(f(y) - f(x))).
  const CrossedModule cm = make_b_abelian(GroupDescriptor::u1());
  const OneForm zero = OneForm::zero(cm.G(), 2);
  const OneForm phi(cm.H(), {MatrixField::parse({{"i*x2*cos(x1)"}}, 2), MatrixField::parse({{"i*sin(x1)"}}, 2)});
  const Path p = Path::from_expressions({"0.1 + 0.8*t", "0.3*t^2"});
  const auto f = [](const Vec& x) { return x(1) * std::sin(x(0)); };
  const TransformationResult r =
      transformation_transport(cm, MatrixField::constant(mat::identity(1), 2), phi, zero, zero, p);
  CHECK(std::abs(r.h.matrix()(0, 0) - std::exp(cplx(0, -(f(p.end()) - f(p.start()))))) <= 1e-9);
  CHECK(r.matching_residual <= 1e-12);
}

TEST_CASE("integrator validation") {
  IntegratorConfig cfg;
  cfg.n_quad_t = 7;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.n_quad_t = 8;
  cfg.n_steps_path = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}
