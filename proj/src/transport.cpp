#include "hgt/transport.hpp"

#include <cmath>

#include "hgt/errors.hpp"

namespace hgt {

namespace {

constexpr double kMatchingHardLimit = 1e-3;

double rel_diff(const Mat& a, const Mat& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

void check_finite(const Mat& m, const char* where) {
  if (!mat::all_finite(m) || m.norm() > 1e12) throw NumericalError(std::string(where) + ": solution blew up");
}

// Classical RK4 for u' = apply(c(t), u) on [0, 1]. The coefficient c is
// evaluated once at each of t, t + h/2, t + h; the end value is reused by the
// next step. `visit(k, u)` sees the solution at every node.
template <class Coef, class Apply, class Visit>
Mat rk4(const GroupDescriptor& d, Coef&& coef, Apply&& apply, int n, bool retraction, Mat u, Visit&& visit,
        const char* where) {
  const double h = 1.0 / n;
  auto c0 = coef(0.0);
  visit(0, u);
  for (int k = 0; k < n; ++k) {
    const double t = k * h;
    const auto cm = coef(t + 0.5 * h);
    const auto c1 = coef(k + 1 == n ? 1.0 : t + h);
    const Mat k1 = apply(c0, u);
    const Mat k2 = apply(cm, Mat(u + (0.5 * h) * k1));
    const Mat k3 = apply(cm, Mat(u + (0.5 * h) * k2));
    const Mat k4 = apply(c1, Mat(u + h * k3));
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (retraction) u = mat::retract(d, u);
    check_finite(u, where);
    visit(k + 1, u);
    c0 = c1;
  }
  return u;
}

auto left_linear = [](const Mat& a, const Mat& u) { return Mat(-(a * u)); };

struct NoVisit {
  void operator()(int, const Mat&) const {}
};

double simpson_weight(int k, int n) {
  if (k == 0 || k == n) return 1.0 / (3.0 * n);
  return (k % 2 == 1 ? 4.0 : 2.0) / (3.0 * n);
}

// F(gamma_{s,t_k}) for every Simpson node t_k: one RK4 sweep along Sigma(s, .).
std::vector<Mat> inner_sweep(const OneForm& a, const Bigon& sigma, double s, const IntegratorConfig& cfg) {
  const GroupDescriptor& d = a.descriptor();
  if (a.is_zero()) return std::vector<Mat>(static_cast<size_t>(cfg.n_quad_t + 1), mat::identity(d.n));
  return transport_sweep(
      d, [&](double t) { return a(sigma(s, t), sigma.d_t(s, t)); }, cfg.n_quad_t, cfg.retraction);
}

Mat fibre_integral(const CrossedModule& cm, const OneForm& a, const TwoForm& b, const Bigon& sigma, double s,
                   const IntegratorConfig& cfg) {
  const GroupDescriptor& H = cm.H();
  Mat acc = mat::zero(H.n);
  if (b.is_zero()) return acc;
  const std::vector<Mat> f = inner_sweep(a, sigma, s, cfg);
  const int n = cfg.n_quad_t;
  for (int k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / n;
    const Vec ds = sigma.d_s(s, t);
    if (ds.cwiseAbs().maxCoeff() == 0.0) continue;
    const Mat y = b(sigma(s, t), ds, sigma.d_t(s, t));
    if (mat::max_abs(y) == 0.0) continue;
    acc += simpson_weight(k, n) * cm.alpha_g_star(mat::inverse(cm.G(), f[static_cast<size_t>(k)]), y);
  }
  return -acc;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (n_steps_path < 8) throw DomainError("n_steps_path must be at least 8");
  if (n_steps_surface_s < 2 || n_quad_t < 2) throw DomainError("surface step counts must be at least 2");
  if (n_quad_t % 2 != 0) throw DomainError("n_quad_t must be even for Simpson quadrature");
}

IntegratorConfig IntegratorConfig::scaled(double factor) const {
  IntegratorConfig c = *this;
  auto sc = [factor](int n) { return std::max(2, static_cast<int>(std::lround(n * factor))); };
  c.n_steps_path = std::max(8, sc(n_steps_path));
  c.n_steps_surface_s = sc(n_steps_surface_s);
  c.n_quad_t = sc(n_quad_t);
  if (c.n_quad_t % 2 != 0) ++c.n_quad_t;
  return c;
}

Mat transport_ode(const GroupDescriptor& d, const std::function<Mat(double)>& a, int n, bool retraction) {
  return rk4(d, a, left_linear, n, retraction, mat::identity(d.n), NoVisit{}, "path transport");
}

std::vector<Mat> transport_sweep(const GroupDescriptor& d, const std::function<Mat(double)>& a, int n,
                                 bool retraction) {
  std::vector<Mat> out(static_cast<size_t>(n + 1));
  rk4(
      d, a, left_linear, n, retraction, mat::identity(d.n),
      [&out](int k, const Mat& u) { out[static_cast<size_t>(k)] = u; }, "path transport");
  return out;
}

std::pair<Mat, Mat> semidirect_transport(const CrossedModule& cm,
                                         const std::function<std::pair<Mat, Mat>(double)>& coef, int n,
                                         bool retraction) {
  const int ng = cm.G().n, nh = cm.H().n;
  // The pair (g, h) is packed block-diagonally so one RK4 loop serves both.
  Mat u = mat::zero(ng + nh);
  u.topLeftCorner(ng, ng) = mat::identity(ng);
  u.bottomRightCorner(nh, nh) = mat::identity(nh);
  if (ng + nh > kMaxMatrixDim) throw DomainError("semidirect_transport: G and H too large to pack");
  GroupDescriptor packed = GroupDescriptor::gl(ng + nh, Field::Complex);
  const Mat out = rk4(
      packed, coef,
      [&cm, ng, nh](const std::pair<Mat, Mat>& c, const Mat& w) {
        Mat r = mat::zero(ng + nh);
        const Mat h = w.bottomRightCorner(nh, nh);
        r.topLeftCorner(ng, ng) = -(c.first * w.topLeftCorner(ng, ng));
        r.bottomRightCorner(nh, nh) = -(c.second * h) - cm.alpha_h_star(h, c.first);
        return r;
      },
      n, false, u, NoVisit{}, "semidirect transport");
  Mat g = out.topLeftCorner(ng, ng), h = out.bottomRightCorner(nh, nh);
  if (retraction) {
    g = mat::retract(cm.G(), g);
    h = mat::retract(cm.H(), h);
  }
  return {g, h};
}

Mat path_transport_matrix(const OneForm& a, const Path& gamma, const IntegratorConfig& cfg) {
  cfg.validate();
  if (gamma.dim() != a.ambient_dim()) throw DomainError("path_transport: path and form dimensions differ");
  if (a.is_zero()) return mat::identity(a.descriptor().n);
  return transport_ode(
      a.descriptor(), [&](double t) { return a(gamma(t), gamma.velocity(t)); }, cfg.n_steps_path, cfg.retraction);
}

GroupElement path_transport(const OneForm& a, const Path& gamma, const IntegratorConfig& cfg) {
  return GroupElement(a.descriptor(), path_transport_matrix(a, gamma, cfg));
}

Mat surface_driver(const ConnectionPair& pair, const Bigon& sigma, double s, const IntegratorConfig& cfg) {
  cfg.validate();
  return fibre_integral(pair.cm(), pair.A(), pair.B(), sigma, s, cfg);
}

SurfaceTransportResult surface_transport(const ConnectionPair& pair, const Bigon& sigma, const IntegratorConfig& cfg) {
  cfg.validate();
  const CrossedModule& cm = pair.cm();
  if (sigma.dim() != pair.A().ambient_dim()) throw DomainError("surface_transport: bigon and form dimensions differ");
  const Mat f1 = pair.B().is_zero()
                     ? mat::identity(cm.H().n)
                     : rk4(
                           cm.H(), [&](double s) { return fibre_integral(cm, pair.A(), pair.B(), sigma, s, cfg); },
                           left_linear, cfg.n_steps_surface_s, cfg.retraction, mat::identity(cm.H().n), NoVisit{},
                           "surface transport");
  const Mat g0 = path_transport_matrix(pair.A(), sigma.source(), cfg);
  const Mat g1 = path_transport_matrix(pair.A(), sigma.target(), cfg);
  Mat k = cm.alpha(g0, mat::inverse(cm.H(), f1));
  if (cfg.retraction) k = mat::retract(cm.H(), k);
  const double residual = rel_diff(cm.t(k) * g0, g1);
  if (!(residual <= kMatchingHardLimit)) {
    throw TargetMatchingError("surface transport: target-matching residual " + std::to_string(residual), residual);
  }
  return SurfaceTransportResult{GroupElement(cm.H(), k), GroupElement(cm.G(), g0), GroupElement(cm.G(), g1), residual};
}

TwoFunctor two_functor(const ConnectionPair& pair, const IntegratorConfig& cfg) {
  return [pair, cfg](const Bigon& sigma) {
    const SurfaceTransportResult r = surface_transport(pair, sigma, cfg);
    return make_two_morphism(pair.cm(), r.g_source.matrix(), r.k.matrix());
  };
}

TwoFunctor derivative_2functor(const OneForm& a, const GroupDescriptor& g, const IntegratorConfig& cfg) {
  if (!(a.descriptor() == g)) throw DomainError("derivative_2functor: form does not take values in " + g.name());
  const CrossedModule eg = make_eg(g);
  return [a, g, eg, cfg](const Bigon& sigma) {
    const Mat g0 = path_transport_matrix(a, sigma.source(), cfg);
    const Mat g1 = path_transport_matrix(a, sigma.target(), cfg);
    return make_two_morphism(eg, g0, g1 * mat::inverse(g, g0));
  };
}

Mat transformation_h(const CrossedModule& cm, const OneForm& phi, const OneForm& a_prime, const Path& gamma,
                     const IntegratorConfig& cfg) {
  cfg.validate();
  struct Coef {
    Mat phi;
    Mat a;
  };
  return rk4(
      cm.H(),
      [&](double t) {
        const Vec x = gamma(t), v = gamma.velocity(t);
        return Coef{phi(x, v), a_prime(x, v)};
      },
      [&cm](const Coef& c, const Mat& h) { return Mat(-(c.phi * h) - cm.alpha_h_star(h, c.a)); }, cfg.n_steps_path,
      cfg.retraction, mat::identity(cm.H().n), NoVisit{}, "transformation transport");
}

TransformationResult transformation_transport(const CrossedModule& cm, const MatrixField& g, const OneForm& phi,
                                              const OneForm& a, const OneForm& a_prime, const Path& gamma,
                                              const IntegratorConfig& cfg) {
  const Mat h = transformation_h(cm, phi, a_prime, gamma, cfg);
  const Mat f = path_transport_matrix(a, gamma, cfg);
  const Mat fp = path_transport_matrix(a_prime, gamma, cfg);
  const Mat lhs = fp * g(gamma.start());
  const Mat rhs = cm.t(mat::inverse(cm.H(), h)) * g(gamma.end()) * f;
  const double residual = rel_diff(lhs, rhs);
  if (!(residual <= kMatchingHardLimit)) {
    throw TargetMatchingError("transformation transport: target-matching residual " + std::to_string(residual),
                              residual);
  }
  return TransformationResult{GroupElement(cm.H(), h), residual};
}

double modification_whisker(const CrossedModule& cm, const MatrixField& a, const OneForm& a_prime,
                            const OneForm& phi1, const OneForm& phi2, const Path& gamma,
                            const IntegratorConfig& cfg) {
  const Mat fp = path_transport_matrix(a_prime, gamma, cfg);
  const Mat h1 = transformation_h(cm, phi1, a_prime, gamma, cfg);
  const Mat h2 = transformation_h(cm, phi2, a_prime, gamma, cfg);
  const Mat lhs = cm.alpha(fp, a(gamma.start())) * mat::inverse(cm.H(), h1);
  const Mat rhs = mat::inverse(cm.H(), h2) * a(gamma.end());
  return (lhs - rhs).norm();
}

StokesReport stokes_check(const OneForm& a, const Bigon& sigma, const IntegratorConfig& cfg) {
  cfg.validate();
  const GroupDescriptor& d = a.descriptor();
  if (path_distance(sigma.source(), Path::constant(sigma(0.0, 0.0))) > 1e-12) {
    throw DomainError("stokes_check: the bigon must start at a constant path");
  }
  StokesReport rep;
  rep.lhs = path_transport_matrix(a, sigma.target(), cfg);
  auto driver = [&](double s) {
    const std::vector<Mat> f = inner_sweep(a, sigma, s, cfg);
    const int n = cfg.n_quad_t;
    Mat acc = mat::zero(d.n);
    for (int k = 0; k <= n; ++k) {
      const double t = static_cast<double>(k) / n;
      const Vec ds = sigma.d_s(s, t);
      if (ds.cwiseAbs().maxCoeff() == 0.0) continue;
      const Mat& fk = f[static_cast<size_t>(k)];
      const Mat kx = curvature_two_form(a, sigma(s, t), ds, sigma.d_t(s, t));
      acc += simpson_weight(k, n) * (mat::inverse(d, fk) * kx * fk);
    }
    return Mat(-acc);
  };
  rep.rhs = rk4(
      d, driver, [](const Mat& c, const Mat& w) { return Mat(w * c); }, cfg.n_steps_surface_s, cfg.retraction,
      mat::identity(d.n), NoVisit{}, "stokes");
  rep.error = (rep.lhs - rep.rhs).norm();
  return rep;
}

}  // namespace hgt
