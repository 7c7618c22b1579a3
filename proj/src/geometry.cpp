#include "hgt/geometry.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "hgt/errors.hpp"
#include "hgt/expr.hpp"

namespace hgt {

namespace {

// exp(-1/x) and exp(-1/x^2) with their derivatives; 0 for x <= 0.
double bump(SmoothingProfile::Kernel k, double x) {
  if (x <= 0.0) return 0.0;
  return k == SmoothingProfile::Kernel::Exp ? std::exp(-1.0 / x) : std::exp(-1.0 / (x * x));
}

double bump_d(SmoothingProfile::Kernel k, double x) {
  if (x <= 0.0) return 0.0;
  return k == SmoothingProfile::Kernel::Exp ? std::exp(-1.0 / x) / (x * x) : 2.0 * std::exp(-1.0 / (x * x)) / (x * x * x);
}

// Vector-valued expression with all first partials, compiled.
struct VecExpr {
  int dim = 0;
  std::vector<Program> value;
  std::vector<std::vector<Program>> partial;  // partial[var][component]

  VecExpr(const std::vector<std::string>& comps, const std::vector<std::string>& vars) {
    dim = static_cast<int>(comps.size());
    if (dim < 1 || dim > kMaxAmbientDim) throw ConfigError("geometry must have between 1 and 8 components");
    partial.resize(vars.size());
    for (const std::string& c : comps) {
      const Expr e = Expr::parse(c, vars);
      value.emplace_back(e);
      for (size_t v = 0; v < vars.size(); ++v) partial[v].emplace_back(e.diff(static_cast<int>(v)));
    }
  }

  static Vec run(const std::vector<Program>& ps, const double* x) {
    Vec r(static_cast<Eigen::Index>(ps.size()));
    for (size_t i = 0; i < ps.size(); ++i) r(static_cast<Eigen::Index>(i)) = ps[i].eval(x).real();
    return r;
  }
};

void chebyshev_probe(const std::function<Vec(double)>& f, const std::function<Vec(double)>& g, double& worst) {
  for (int k = 0; k < 64; ++k) {
    const double u = 0.5 - 0.5 * std::cos(std::numbers::pi * (k + 0.5) / 64.0);
    worst = std::max(worst, (f(u) - g(u)).cwiseAbs().maxCoeff());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

SmoothingProfile::SmoothingProfile(double epsilon, Kernel kernel) : eps_(epsilon), kernel_(kernel) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("smoothing profile epsilon must lie in (0, 1/2)");
}

double SmoothingProfile::operator()(double u) const {
  if (u <= eps_) return 0.0;
  if (u >= 1.0 - eps_) return 1.0;
  const double x = (u - eps_) / (1.0 - 2.0 * eps_);
  const double a = bump(kernel_, x), b = bump(kernel_, 1.0 - x);
  return a / (a + b);
}

double SmoothingProfile::derivative(double u) const {
  if (u <= eps_ || u >= 1.0 - eps_) return 0.0;
  const double x = (u - eps_) / (1.0 - 2.0 * eps_);
  const double a = bump(kernel_, x), b = bump(kernel_, 1.0 - x);
  const double da = bump_d(kernel_, x), db = bump_d(kernel_, 1.0 - x);
  return (da * b + a * db) / ((a + b) * (a + b)) / (1.0 - 2.0 * eps_);
}

Reparam Reparam::identity() {
  return {[](double u) { return u; }, [](double) { return 1.0; }};
}

Reparam Reparam::from_profile(const SmoothingProfile& p) {
  return {[p](double u) { return p(u); }, [p](double u) { return p.derivative(u); }};
}

Reparam Reparam::smoothstep() {
  return {[](double u) { return u * u * (3.0 - 2.0 * u); }, [](double u) { return 6.0 * u * (1.0 - u); }};
}

Reparam Reparam::wobble(double a) {
  if (!(std::abs(a) < 1.0)) throw DomainError("wobble amplitude must satisfy |a| < 1");
  const double w = 2.0 * std::numbers::pi;
  return {[a, w](double u) { return u + a * std::sin(w * u) / w; }, [a, w](double u) { return 1.0 + a * std::cos(w * u); }};
}

// ---------------------------------------------------------------------------
// Path

Path::Path(int dim, Fn eval, Fn velocity, std::optional<SmoothingProfile> sitting)
    : dim_(dim), eval_(std::move(eval)), vel_(std::move(velocity)), sitting_(sitting) {
  if (dim < 1 || dim > kMaxAmbientDim) throw DomainError("path dimension outside [1, 8]");
}

Path Path::constant(const Vec& x) {
  const Vec zero = Vec::Zero(x.size());
  return Path(static_cast<int>(x.size()), [x](double) { return x; }, [zero](double) { return zero; },
              SmoothingProfile());
}

Path Path::line(const Vec& a, const Vec& b, const SmoothingProfile& beta) {
  if (a.size() != b.size()) throw DomainError("line endpoints differ in dimension");
  const Vec d = b - a;
  return Path(
      static_cast<int>(a.size()), [a, d, beta](double t) { return Vec(a + beta(t) * d); },
      [d, beta](double t) { return Vec(beta.derivative(t) * d); }, beta);
}

Path Path::affine(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DomainError("line endpoints differ in dimension");
  const Vec d = b - a;
  return Path(static_cast<int>(a.size()), [a, d](double t) { return Vec(a + t * d); }, [d](double) { return d; });
}

Path Path::from_expressions(const std::vector<std::string>& components) {
  auto e = std::make_shared<VecExpr>(components, std::vector<std::string>{"t"});
  return Path(
      e->dim, [e](double t) { return VecExpr::run(e->value, &t); },
      [e](double t) { return VecExpr::run(e->partial[0], &t); });
}

Path path_compose(const Path& g1, const Path& g2) {
  if (g1.dim() != g2.dim()) throw CompositionError("path_compose: dimensions differ");
  const double gap = (g1.end() - g2.start()).cwiseAbs().maxCoeff();
  if (gap > 1e-10) throw CompositionError("path_compose: endpoint mismatch " + std::to_string(gap));
  std::optional<SmoothingProfile> sit;
  if (g1.sitting() && g2.sitting()) {
    sit = SmoothingProfile(std::min(g1.sitting()->epsilon(), g2.sitting()->epsilon()) / 2.0);
  }
  return Path(
      g1.dim(), [g1, g2](double t) { return t < 0.5 ? g1(2.0 * t) : g2(2.0 * t - 1.0); },
      [g1, g2](double t) { return Vec(t < 0.5 ? Vec(2.0 * g1.velocity(2.0 * t)) : Vec(2.0 * g2.velocity(2.0 * t - 1.0))); },
      sit);
}

Path path_reverse(const Path& g) {
  return Path(
      g.dim(), [g](double t) { return g(1.0 - t); }, [g](double t) { return Vec(-g.velocity(1.0 - t)); }, g.sitting());
}

Path reparameterize(const Path& g, const Reparam& beta) {
  return Path(
      g.dim(), [g, beta](double t) { return g(beta.f(t)); },
      [g, beta](double t) { return Vec(beta.df(t) * g.velocity(beta.f(t))); }, g.sitting());
}

double path_distance(const Path& a, const Path& b) {
  if (a.dim() != b.dim()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  chebyshev_probe([&a](double u) { return a(u); }, [&b](double u) { return b(u); }, worst);
  return worst;
}

// ---------------------------------------------------------------------------
// Bigon

Bigon::Bigon(int dim, Fn eval, Fn d_s, Fn d_t) : dim_(dim), eval_(std::move(eval)), ds_(std::move(d_s)), dt_(std::move(d_t)) {
  if (dim < 1 || dim > kMaxAmbientDim) throw DomainError("bigon dimension outside [1, 8]");
}

Bigon Bigon::identity(const Path& g) {
  const Vec zero = Vec::Zero(g.dim());
  return Bigon(
      g.dim(), [g](double, double t) { return g(t); }, [zero](double, double) { return zero; },
      [g](double, double t) { return g.velocity(t); });
}

Bigon Bigon::from_expressions(const std::vector<std::string>& components) {
  auto e = std::make_shared<VecExpr>(components, std::vector<std::string>{"s", "t"});
  return Bigon(
      e->dim,
      [e](double s, double t) {
        const double x[2] = {s, t};
        return VecExpr::run(e->value, x);
      },
      [e](double s, double t) {
        const double x[2] = {s, t};
        return VecExpr::run(e->partial[0], x);
      },
      [e](double s, double t) {
        const double x[2] = {s, t};
        return VecExpr::run(e->partial[1], x);
      });
}

Path Bigon::source() const {
  Bigon b = *this;
  return Path(dim_, [b](double t) { return b(0.0, t); }, [b](double t) { return b.d_t(0.0, t); });
}

Path Bigon::target() const {
  Bigon b = *this;
  return Path(dim_, [b](double t) { return b(1.0, t); }, [b](double t) { return b.d_t(1.0, t); });
}

Bigon bigon_vcompose(const Bigon& a, const Bigon& b) {
  if (a.dim() != b.dim()) throw CompositionError("bigon_vcompose: dimensions differ");
  const double gap = path_distance(a.target(), b.source());
  if (gap > 1e-8) throw CompositionError("bigon_vcompose: target and source differ by " + std::to_string(gap));
  return Bigon(
      a.dim(), [a, b](double s, double t) { return s < 0.5 ? a(2.0 * s, t) : b(2.0 * s - 1.0, t); },
      [a, b](double s, double t) { return Vec(s < 0.5 ? Vec(2.0 * a.d_s(2.0 * s, t)) : Vec(2.0 * b.d_s(2.0 * s - 1.0, t))); },
      [a, b](double s, double t) { return s < 0.5 ? a.d_t(2.0 * s, t) : b.d_t(2.0 * s - 1.0, t); });
}

Bigon bigon_hcompose(const Bigon& a, const Bigon& b) {
  if (a.dim() != b.dim()) throw CompositionError("bigon_hcompose: dimensions differ");
  double gap = 0.0;
  for (int k = 0; k <= 16; ++k) {
    const double s = k / 16.0;
    gap = std::max(gap, (a(s, 1.0) - b(s, 0.0)).cwiseAbs().maxCoeff());
  }
  if (gap > 1e-8) throw CompositionError("bigon_hcompose: end of the first and start of the second differ by " + std::to_string(gap));
  return Bigon(
      a.dim(), [a, b](double s, double t) { return t < 0.5 ? a(s, 2.0 * t) : b(s, 2.0 * t - 1.0); },
      [a, b](double s, double t) { return t < 0.5 ? a.d_s(s, 2.0 * t) : b.d_s(s, 2.0 * t - 1.0); },
      [a, b](double s, double t) { return Vec(t < 0.5 ? Vec(2.0 * a.d_t(s, 2.0 * t)) : Vec(2.0 * b.d_t(s, 2.0 * t - 1.0))); });
}

Bigon bigon_reparameterize(const Bigon& g, const Reparam& rs, const Reparam& rt) {
  return Bigon(
      g.dim(), [g, rs, rt](double s, double t) { return g(rs.f(s), rt.f(t)); },
      [g, rs, rt](double s, double t) { return Vec(rs.df(s) * g.d_s(rs.f(s), rt.f(t))); },
      [g, rs, rt](double s, double t) { return Vec(rt.df(t) * g.d_t(rs.f(s), rt.f(t))); });
}

// ---------------------------------------------------------------------------
// PlaneMap and the standard bigon

PlaneMap PlaneMap::identity() {
  PlaneMap p;
  p.dim = 2;
  p.eval = [](double u, double v) { return Vec((Vec(2) << u, v).finished()); };
  p.d_u = [](double, double) { return Vec((Vec(2) << 1.0, 0.0).finished()); };
  p.d_v = [](double, double) { return Vec((Vec(2) << 0.0, 1.0).finished()); };
  return p;
}

PlaneMap PlaneMap::affine(const Vec& x, const Vec& v1, const Vec& v2) {
  if (x.size() != v1.size() || x.size() != v2.size()) throw DomainError("PlaneMap::affine: dimension mismatch");
  PlaneMap p;
  p.dim = static_cast<int>(x.size());
  p.eval = [x, v1, v2](double u, double v) { return Vec(x + u * v1 + v * v2); };
  p.d_u = [v1](double, double) { return v1; };
  p.d_v = [v2](double, double) { return v2; };
  return p;
}

PlaneMap PlaneMap::from_expressions(const std::vector<std::string>& components) {
  auto e = std::make_shared<VecExpr>(components, std::vector<std::string>{"s", "t"});
  PlaneMap p;
  p.dim = e->dim;
  p.eval = [e](double u, double v) {
    const double x[2] = {u, v};
    return VecExpr::run(e->value, x);
  };
  p.d_u = [e](double u, double v) {
    const double x[2] = {u, v};
    return VecExpr::run(e->partial[0], x);
  };
  p.d_v = [e](double u, double v) {
    const double x[2] = {u, v};
    return VecExpr::run(e->partial[1], x);
  };
  return p;
}

namespace {

// Parameter-plane point of the standard bigon and its two partials. The
// corner P(sigma) slides from (0, t) to (s, 0); each path runs to the corner
// on the first half and from it to (s, t) on the second.
struct StdPoint {
  double q[2];
  double dq_s[2];
  double dq_t[2];
};

StdPoint standard_point(double s, double t, const SmoothingProfile& beta, double sigma, double tau) {
  const double b = beta(sigma), db = beta.derivative(sigma);
  const double p[2] = {s * b, t * (1.0 - b)};
  const double dp[2] = {s * db, -t * db};
  StdPoint r{};
  if (tau < 0.5) {
    const double w = beta(2.0 * tau), dw = 2.0 * beta.derivative(2.0 * tau);
    for (int k = 0; k < 2; ++k) {
      r.q[k] = w * p[k];
      r.dq_s[k] = w * dp[k];
      r.dq_t[k] = dw * p[k];
    }
  } else {
    const double w = beta(2.0 * tau - 1.0), dw = 2.0 * beta.derivative(2.0 * tau - 1.0);
    const double c[2] = {s, t};
    for (int k = 0; k < 2; ++k) {
      r.q[k] = p[k] + w * (c[k] - p[k]);
      r.dq_s[k] = (1.0 - w) * dp[k];
      r.dq_t[k] = dw * (c[k] - p[k]);
    }
  }
  return r;
}

}  // namespace

Bigon standard_bigon(const PlaneMap& g, double s, double t, const SmoothingProfile& beta) {
  return Bigon(
      g.dim,
      [g, s, t, beta](double sigma, double tau) {
        const StdPoint p = standard_point(s, t, beta, sigma, tau);
        return g.eval(p.q[0], p.q[1]);
      },
      [g, s, t, beta](double sigma, double tau) {
        const StdPoint p = standard_point(s, t, beta, sigma, tau);
        if (p.dq_s[0] == 0.0 && p.dq_s[1] == 0.0) return Vec(Vec::Zero(g.dim));
        return Vec(p.dq_s[0] * g.d_u(p.q[0], p.q[1]) + p.dq_s[1] * g.d_v(p.q[0], p.q[1]));
      },
      [g, s, t, beta](double sigma, double tau) {
        const StdPoint p = standard_point(s, t, beta, sigma, tau);
        if (p.dq_t[0] == 0.0 && p.dq_t[1] == 0.0) return Vec(Vec::Zero(g.dim));
        return Vec(p.dq_t[0] * g.d_u(p.q[0], p.q[1]) + p.dq_t[1] * g.d_v(p.q[0], p.q[1]));
      });
}

Path bulge_path(const Vec& x0, const Vec& x1, const Vec& w, double lambda, const SmoothingProfile& beta) {
  if (x0.size() != x1.size() || x0.size() != w.size()) throw DomainError("bulge_path: dimensions differ");
  const Vec d = x1 - x0;
  return Path(
      static_cast<int>(x0.size()),
      [x0, d, w, lambda, beta](double t) {
        const double b = beta(t);
        return Vec(x0 + b * d + lambda * std::sin(std::numbers::pi * b) * w);
      },
      [d, w, lambda, beta](double t) {
        const double b = beta(t);
        return Vec(beta.derivative(t) * (d + lambda * std::numbers::pi * std::cos(std::numbers::pi * b) * w));
      },
      beta);
}

Bigon bulge_bigon(const Vec& x0, const Vec& x1, const Vec& w, double lambda0, double lambda1,
                  const SmoothingProfile& beta) {
  if (x0.size() != x1.size() || x0.size() != w.size()) throw DomainError("bulge_bigon: dimensions differ");
  const Vec d = x1 - x0;
  const double dl = lambda1 - lambda0;
  return Bigon(
      static_cast<int>(x0.size()),
      [=](double s, double t) {
        const double b = beta(t);
        return Vec(x0 + b * d + (lambda0 + dl * beta(s)) * std::sin(std::numbers::pi * b) * w);
      },
      [=](double s, double t) { return Vec(dl * beta.derivative(s) * std::sin(std::numbers::pi * beta(t)) * w); },
      [=](double s, double t) {
        const double b = beta(t);
        return Vec(beta.derivative(t) * (d + (lambda0 + dl * beta(s)) * std::numbers::pi * std::cos(std::numbers::pi * b) * w));
      });
}

// ---------------------------------------------------------------------------
// Loops

Loop::Loop(int dim, Fn eval, Fn velocity) : dim_(dim), eval_(std::move(eval)), vel_(std::move(velocity)) {
  if (dim < 1 || dim > kMaxAmbientDim) throw DomainError("loop dimension outside [1, 8]");
}

Loop Loop::from_expressions(const std::vector<std::string>& components) {
  auto e = std::make_shared<VecExpr>(components, std::vector<std::string>{"z"});
  Loop l(
      e->dim, [e](double z) { return VecExpr::run(e->value, &z); },
      [e](double z) { return VecExpr::run(e->partial[0], &z); });
  const double gap = (l(0.0) - l(1.0)).cwiseAbs().maxCoeff() + (l.velocity(0.0) - l.velocity(1.0)).cwiseAbs().maxCoeff();
  if (gap > 1e-9) throw ConfigError("loop expressions are not periodic in z");
  return l;
}

Loop Loop::rotated(double z0) const {
  Loop self = *this;
  auto wrap = [z0](double z) {
    double u = z + z0;
    return u - std::floor(u);
  };
  return Loop(dim_, [self, wrap](double z) { return self(wrap(z)); }, [self, wrap](double z) { return self.velocity(wrap(z)); });
}

Path loop_to_path(const Loop& tau, const SmoothingProfile& beta) {
  return Path(
      tau.dim(), [tau, beta](double t) { return tau(beta(t)); },
      [tau, beta](double t) { return Vec(beta.derivative(t) * tau.velocity(beta(t))); }, beta);
}

LoopPath::LoopPath(int dim, Fn eval, Fn d_t, Fn d_z) : dim_(dim), eval_(std::move(eval)), dt_(std::move(d_t)), dz_(std::move(d_z)) {
  if (dim < 1 || dim > kMaxAmbientDim) throw DomainError("loop path dimension outside [1, 8]");
}

LoopPath LoopPath::from_expressions(const std::vector<std::string>& components) {
  auto e = std::make_shared<VecExpr>(components, std::vector<std::string>{"t", "z"});
  return LoopPath(
      e->dim,
      [e](double t, double z) {
        const double x[2] = {t, z};
        return VecExpr::run(e->value, x);
      },
      [e](double t, double z) {
        const double x[2] = {t, z};
        return VecExpr::run(e->partial[0], x);
      },
      [e](double t, double z) {
        const double x[2] = {t, z};
        return VecExpr::run(e->partial[1], x);
      });
}

Loop LoopPath::at(double t) const {
  LoopPath self = *this;
  return Loop(dim_, [self, t](double z) { return self(t, z); }, [self, t](double z) { return self.d_z(t, z); });
}

Path LoopPath::base_path() const {
  LoopPath self = *this;
  return Path(dim_, [self](double t) { return self(t, 0.0); }, [self](double t) { return self.d_t(t, 0.0); });
}

}  // namespace hgt
