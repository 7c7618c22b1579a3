#include "hgt/extraction.hpp"

#include <cmath>

#include "hgt/errors.hpp"

namespace hgt {

namespace {

Vec basis_vector(int n, int i) {
  Vec e = Vec::Zero(n);
  e(i) = 1.0;
  return e;
}

template <class Stencil>
Mat richardson(const Stencil& d, double h, bool on) {
  const Mat dh = d(h);
  if (!on) return dh;
  return (4.0 * dh - d(2.0 * h)) / 3.0;
}

}  // namespace

void FdConfig::validate() const {
  if (!(step > 0.0 && step < 0.1)) throw DomainError("fd step must lie in (0, 0.1)");
}

Mat extract_one_form(const PathFunctor& f, const GroupDescriptor& d, const Vec& x, const Vec& v, const FdConfig& fd) {
  fd.validate();
  if (v.cwiseAbs().maxCoeff() == 0.0) return mat::zero(d.n);
  auto stencil = [&](double h) {
    const Mat fp = f(Path::line(x, Vec(x + h * v)));
    const Mat fm = f(Path::line(x, Vec(x - h * v)));
    return Mat((fp - fm) / (2.0 * h));
  };
  return mat::project_to_algebra(d, -richardson(stencil, fd.step, fd.richardson));
}

Mat extract_two_form(const TwoFunctor& f, const GroupDescriptor& hd, const Vec& x, const Vec& v1, const Vec& v2,
                     const FdConfig& fd) {
  fd.validate();
  const PlaneMap plane = PlaneMap::affine(x, v1, v2);
  auto h_part = [&](double s, double t) { return f(standard_bigon(plane, s, t)).h_part.matrix(); };
  auto stencil = [&](double h) {
    return Mat((h_part(h, h) - h_part(h, -h) - h_part(-h, h) + h_part(-h, -h)) / (4.0 * h * h));
  };
  return mat::project_to_algebra(hd, -richardson(stencil, fd.step, fd.richardson));
}

ExtractedTransformation extract_transformation(const std::function<Mat(const Vec&)>& g, const PathFunctor& h,
                                               const GroupDescriptor& hd, const Vec& x, const Vec& v,
                                               const FdConfig& fd) {
  return ExtractedTransformation{g(x), extract_one_form(h, hd, x, v, fd)};
}

Mat pullback_maurer_cartan(const MatrixField& g, const GroupDescriptor& d, const Vec& x, const Vec& v, double fd_step) {
  GroupCurve curve{d, [&](double t) { return g(Vec(x + t * v)); }, -1.0, 1.0};
  return maurer_cartan_right(curve, 0.0, fd_step).matrix();
}

double residual_prop1(const CrossedModule& cm, const OneForm& a, const TwoForm& b, const SampleSpec& spec) {
  return fake_curvature_residual(cm, a, b, spec).max_residual;
}

Prop2Residual residual_prop2(const CrossedModule& cm, const MatrixField& g, const OneForm& phi, const OneForm& a,
                             const TwoForm& b, const OneForm& a_prime, const TwoForm& b_prime,
                             const SampleSpec& spec) {
  const int n = a.ambient_dim();
  const GroupDescriptor& G = cm.G();
  Prop2Residual r;
  for (const Vec& x : spec.points()) {
    const Mat gx = g(x);
    const Mat ginv = mat::inverse(G, gx);
    for (int i = 0; i < n; ++i) {
      const Vec e = basis_vector(n, i);
      const Mat lhs = a_prime(x, e) + cm.t_star(phi(x, e));
      const Mat rhs = gx * a(x, e) * ginv - pullback_maurer_cartan(g, G, x, e, spec.fd_step);
      r.one_form = std::max(r.one_form, (lhs - rhs).norm());
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Vec e1 = basis_vector(n, i), e2 = basis_vector(n, j);
        const Mat dphi = phi.derivative(x, e1, e2, spec.fd_step) - phi.derivative(x, e2, e1, spec.fd_step);
        const Mat lhs = b_prime(x, e1, e2) + alpha_wedge(cm, a_prime, phi, x, e1, e2) + dphi +
                        mat::commutator(phi(x, e1), phi(x, e2));
        const Mat rhs = cm.alpha_g_star(gx, b(x, e1, e2));
        r.two_form = std::max(r.two_form, (lhs - rhs).norm());
      }
    }
  }
  return r;
}

Prop3Residual residual_prop3(const CrossedModule& cm, const MatrixField& a, const MatrixField& g1,
                             const OneForm& phi1, const MatrixField& g2, const OneForm& phi2,
                             const OneForm& a_prime, const SampleSpec& spec) {
  const int n = a_prime.ambient_dim();
  const GroupDescriptor& H = cm.H();
  Prop3Residual r;
  for (const Vec& x : spec.points()) {
    const Mat ax = a(x);
    const Mat ainv = mat::inverse(H, ax);
    r.group = std::max(r.group, (g2(x) - cm.t(ax) * g1(x)).norm());
    for (int i = 0; i < n; ++i) {
      const Vec e = basis_vector(n, i);
      const Mat lhs = phi2(x, e) + cm.alpha_h_star(ax, a_prime(x, e)) * ainv;
      const Mat rhs = ax * phi1(x, e) * ainv - pullback_maurer_cartan(a, H, x, e, spec.fd_step);
      r.one_form = std::max(r.one_form, (lhs - rhs).norm());
    }
  }
  return r;
}

Z2Morphism compose_z2_morphisms(const Z2Morphism& first, const Z2Morphism& second, const CrossedModule& cm) {
  const int n = first.phi.ambient_dim();
  if (second.phi.ambient_dim() != n) throw CompositionError("compose_z2_morphisms: dimensions differ");
  const MatrixField g1 = first.g, g2 = second.g;
  MatrixField g = MatrixField::native(cm.G().n, n, [g1, g2](const Vec& x) { return Mat(g2(x) * g1(x)); });
  std::vector<MatrixField> comps;
  for (int i = 0; i < n; ++i) {
    const Vec e = basis_vector(n, i);
    const OneForm p1 = first.phi, p2 = second.phi;
    comps.push_back(MatrixField::native(cm.H().n, n, [cm, g2, p1, p2, e](const Vec& x) {
      return Mat(cm.alpha_g_star(g2(x), p1(x, e)) + p2(x, e));
    }));
  }
  return Z2Morphism{g, OneForm(cm.H(), comps)};
}

std::pair<OneForm, TwoForm> transform_pair(const CrossedModule& cm, const Z2Morphism& z, const OneForm& a,
                                           const TwoForm& b, double fd_step) {
  const int n = a.ambient_dim();
  const MatrixField g = z.g;
  const OneForm phi = z.phi;
  const GroupDescriptor G = cm.G();
  std::vector<MatrixField> comps;
  for (int i = 0; i < n; ++i) {
    const Vec e = basis_vector(n, i);
    comps.push_back(MatrixField::native(G.n, n, [cm, g, phi, a, G, e, fd_step](const Vec& x) {
      const Mat gx = g(x);
      return Mat(gx * a(x, e) * mat::inverse(G, gx) - pullback_maurer_cartan(g, G, x, e, fd_step) -
                 cm.t_star(phi(x, e)));
    }));
  }
  const OneForm a_prime(G, comps);
  TwoForm b_prime(cm.H(), n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Vec e1 = basis_vector(n, i), e2 = basis_vector(n, j);
      b_prime.set(i, j, MatrixField::native(cm.H().n, n, [cm, g, phi, b, a_prime, e1, e2, fd_step](const Vec& x) {
        const Mat dphi = phi.derivative(x, e1, e2, fd_step) - phi.derivative(x, e2, e1, fd_step);
        return Mat(cm.alpha_g_star(g(x), b(x, e1, e2)) - alpha_wedge(cm, a_prime, phi, x, e1, e2) - dphi -
                   mat::commutator(phi(x, e1), phi(x, e2)));
      }));
    }
  }
  return {a_prime, b_prime};
}

Z2Morphism modify_transformation(const CrossedModule& cm, const MatrixField& a, const Z2Morphism& z1,
                                 const OneForm& a_prime, double fd_step) {
  const int n = a_prime.ambient_dim();
  const MatrixField g1 = z1.g;
  const OneForm phi1 = z1.phi;
  const GroupDescriptor H = cm.H();
  MatrixField g2 = MatrixField::native(cm.G().n, n, [cm, a, g1](const Vec& x) { return Mat(cm.t(a(x)) * g1(x)); });
  std::vector<MatrixField> comps;
  for (int i = 0; i < n; ++i) {
    const Vec e = basis_vector(n, i);
    comps.push_back(MatrixField::native(H.n, n, [cm, a, phi1, a_prime, H, e, fd_step](const Vec& x) {
      const Mat ax = a(x);
      const Mat ainv = mat::inverse(H, ax);
      return Mat(ax * phi1(x, e) * ainv - pullback_maurer_cartan(a, H, x, e, fd_step) -
                 cm.alpha_h_star(ax, a_prime(x, e)) * ainv);
    }));
  }
  return Z2Morphism{g2, OneForm(H, comps)};
}

}  // namespace hgt
