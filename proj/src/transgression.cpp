#include "hgt/transgression.hpp"

#include "hgt/errors.hpp"

namespace hgt {

namespace {

double simpson_weight(int k, int n) {
  if (k == 0 || k == n) return 1.0 / (3.0 * n);
  return (k % 2 == 1 ? 4.0 : 2.0) / (3.0 * n);
}

void check_dims(const ConnectionPair& pair, int dim, const char* where) {
  if (dim != pair.A().ambient_dim()) throw DomainError(std::string(where) + ": loop and form dimensions differ");
}

}  // namespace

GroupElement loop_holonomy(const ConnectionPair& pair, const Loop& tau, const IntegratorConfig& cfg,
                           const SmoothingProfile& beta) {
  check_dims(pair, tau.dim(), "loop_holonomy");
  return path_transport(pair.A(), loop_to_path(tau, beta), cfg);
}

Mat transgressed_A(const ConnectionPair& pair, const Loop& tau, const LoopVariation& dtau) {
  check_dims(pair, tau.dim(), "transgressed_A");
  return pair.A()(tau(0.0), dtau(0.0));
}

Mat transgressed_phi(const ConnectionPair& pair, const Loop& tau, const LoopVariation& dtau,
                     const IntegratorConfig& cfg) {
  cfg.validate();
  check_dims(pair, tau.dim(), "transgressed_phi");
  const CrossedModule& cm = pair.cm();
  Mat acc = mat::zero(cm.H().n);
  if (pair.B().is_zero()) return acc;
  const int n = cfg.n_quad_t;
  const GroupDescriptor& G = cm.G();
  std::vector<Mat> u;
  if (pair.A().is_zero()) {
    u.assign(static_cast<size_t>(n + 1), mat::identity(G.n));
  } else {
    u = transport_sweep(
        G, [&](double z) { return pair.A()(tau(z), tau.velocity(z)); }, n, cfg.retraction);
  }
  const Mat& u1 = u.back();
  for (int k = 0; k <= n; ++k) {
    const double z = static_cast<double>(k) / n;
    const Vec dz = dtau(z);
    if (dz.cwiseAbs().maxCoeff() == 0.0) continue;
    const Mat y = pair.B()(tau(z), tau.velocity(z), dz);
    const Mat arc = u1 * mat::inverse(G, u[static_cast<size_t>(k)]);
    acc += simpson_weight(k, n) * cm.alpha_g_star(arc, y);
  }
  return acc;
}

Bigon loop_path_bigon(const LoopPath& gamma, const SmoothingProfile& beta) {
  PlaneMap plane;
  plane.dim = gamma.dim();
  plane.eval = [gamma](double u, double v) { return gamma(v, u); };
  plane.d_u = [gamma](double u, double v) { return gamma.d_z(v, u); };
  plane.d_v = [gamma](double u, double v) { return gamma.d_t(v, u); };
  return standard_bigon(plane, 1.0, 1.0, beta);
}

LoopPathMorphism loop_path_two_morphism(const ConnectionPair& pair, const LoopPath& gamma,
                                        const IntegratorConfig& cfg) {
  check_dims(pair, gamma.dim(), "loop_path_two_morphism");
  const CrossedModule& cm = pair.cm();
  const SurfaceTransportResult r = surface_transport(pair, loop_path_bigon(gamma), cfg);
  const Mat base = path_transport_matrix(pair.A(), gamma.base_path(), cfg);
  const Mat l0 = loop_holonomy(pair, gamma.at(0.0), cfg).matrix();
  const Mat l1 = loop_holonomy(pair, gamma.at(1.0), cfg).matrix();
  const Mat lhs = cm.t(r.k.matrix()) * l1 * base;
  const Mat rhs = base * l0;
  const double residual = (lhs - rhs).norm() / std::max(1.0, rhs.norm());
  return LoopPathMorphism{make_two_morphism(cm, r.g_source.matrix(), r.k.matrix()), GroupElement(cm.G(), base),
                          residual};
}

TransgressionReport transgression_consistency(const ConnectionPair& pair, const LoopPath& gamma,
                                              const IntegratorConfig& cfg) {
  const LoopPathMorphism m = loop_path_two_morphism(pair, gamma, cfg);
  const CrossedModule& cm = pair.cm();
  const auto [g, h] = semidirect_transport(
      cm,
      [&](double t) {
        const Loop loop = gamma.at(t);
        const LoopVariation dt = [&gamma, t](double z) { return gamma.d_t(t, z); };
        return std::make_pair(transgressed_A(pair, loop, dt), Mat(-transgressed_phi(pair, loop, dt, cfg)));
      },
      cfg.n_steps_surface_s, cfg.retraction);
  TransgressionReport rep;
  rep.functor_g = m.base.matrix();
  rep.functor_h = mat::inverse(cm.H(), m.surface.h_part.matrix());
  rep.forms_g = g;
  rep.forms_h = h;
  rep.matching_residual = m.matching_residual;
  rep.defect = std::max((rep.functor_g - g).norm(), (rep.functor_h - h).norm());
  return rep;
}

}  // namespace hgt
