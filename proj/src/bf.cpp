#include "hgt/bf.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "hgt/errors.hpp"

namespace hgt {

namespace {

constexpr int kPlanes[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

Vec basis_vector(int n, int i) {
  Vec e = Vec::Zero(n);
  e(i) = 1.0;
  return e;
}

double pairwise_sum(const double* v, size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

// Symmetrized quadratic form Q(X, Y) of two 6-component 2-forms with the
// (12|34) - (13|24) + (14|23) sign pattern.
double q_form(const PairingSpec& p, const std::array<Mat, 6>& x, const std::array<Mat, 6>& y) {
  auto sym = [&](int i, int j) { return 0.5 * (p(x[i], y[j]) + p(x[j], y[i])); };
  return sym(0, 5) - sym(1, 4) + sym(2, 3);
}

struct Integrals {
  double ff = 0.0, ft = 0.0, tt = 0.0, bb = 0.0;
  double beta_sup = 0.0;
};

Integrals integrate(const CrossedModule& cm, const OneForm& a, const TwoForm& b, const PairingSpec& pairing, int n,
                    double fd_step) {
  std::vector<double> nodes, weights;
  gauss_legendre(n, nodes, weights);
  const size_t total = static_cast<size_t>(n) * n * n * n;
  std::vector<double> ff(total), ft(total), tt(total), bb(total);
  Integrals out;
  size_t idx = 0;
  Vec x(4);
  const Vec e[4] = {basis_vector(4, 0), basis_vector(4, 1), basis_vector(4, 2), basis_vector(4, 3)};
  for (int i0 = 0; i0 < n; ++i0) {
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2) {
        for (int i3 = 0; i3 < n; ++i3, ++idx) {
          x << nodes[static_cast<size_t>(i0)], nodes[static_cast<size_t>(i1)], nodes[static_cast<size_t>(i2)],
              nodes[static_cast<size_t>(i3)];
          const double w = weights[static_cast<size_t>(i0)] * weights[static_cast<size_t>(i1)] *
                           weights[static_cast<size_t>(i2)] * weights[static_cast<size_t>(i3)];
          std::array<Mat, 6> f, t, beta;
          for (int p = 0; p < 6; ++p) {
            const Vec& u = e[kPlanes[p][0]];
            const Vec& v = e[kPlanes[p][1]];
            f[static_cast<size_t>(p)] = curvature_two_form(a, x, u, v, fd_step);
            t[static_cast<size_t>(p)] = cm.t_star(b(x, u, v));
            beta[static_cast<size_t>(p)] = f[static_cast<size_t>(p)] - t[static_cast<size_t>(p)];
            out.beta_sup = std::max(out.beta_sup, beta[static_cast<size_t>(p)].norm());
          }
          ff[idx] = w * q_form(pairing, f, f);
          ft[idx] = w * q_form(pairing, f, t);
          tt[idx] = w * q_form(pairing, t, t);
          bb[idx] = w * q_form(pairing, beta, beta);
        }
      }
    }
  }
  out.ff = pairwise_sum(ff.data(), total);
  out.ft = pairwise_sum(ft.data(), total);
  out.tt = pairwise_sum(tt.data(), total);
  out.bb = pairwise_sum(bb.data(), total);
  return out;
}

void check_inputs(const CrossedModule& cm, const OneForm& a, const TwoForm& b, const GridSpec& grid) {
  if (a.ambient_dim() != 4 || b.ambient_dim() != 4) throw DomainError("the BF action is defined on the 4-cube");
  if (!(a.descriptor() == cm.G()) || !(b.descriptor() == cm.H())) {
    throw DomainError("BF action: forms do not match the crossed module");
  }
  if (grid.n < 2) throw DomainError("BF grid needs at least 2 nodes per axis");
}

MatrixField add_fields(const MatrixField& base, const MatrixField& delta, double eps, int n) {
  if (base.is_symbolic() && delta.is_symbolic()) {
    return MatrixField::symbolic(base.expr() + Expr::constant(eps) * delta.expr(), n);
  }
  return MatrixField::native(base.rows(), n, [base, delta, eps](const Vec& x) { return Mat(base(x) + eps * delta(x)); });
}

// Random quadratic polynomial in x1..x4 times a random algebra element.
ExprMatrix random_term(const GroupDescriptor& d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto vars = coordinate_names(4);
  Expr p = Expr::constant(u(rng));
  for (int k = 0; k < 4; ++k) p = p + Expr::constant(u(rng)) * Expr::variable(k, vars[static_cast<size_t>(k)]);
  for (int k = 0; k < 4; ++k) {
    for (int l = k; l < 4; ++l) {
      p = p + Expr::constant(u(rng)) * Expr::variable(k, vars[static_cast<size_t>(k)]) *
                  Expr::variable(l, vars[static_cast<size_t>(l)]);
    }
  }
  return p * ExprMatrix::constant(random_algebra_matrix(d, rng));
}

}  // namespace

PairingSpec PairingSpec::for_group(const GroupDescriptor& g) {
  return PairingSpec{g.compact() ? PairingKind::NegTrace : PairingKind::Trace};
}

double PairingSpec::operator()(const Mat& x, const Mat& y) const {
  const double tr = (x * y).trace().real();
  return kind == PairingKind::NegTrace ? -tr : tr;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<size_t>(n), 0.0);
  weights.assign(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    nodes[static_cast<size_t>(i)] = 0.5 * (1.0 - z);
    weights[static_cast<size_t>(i)] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

std::array<Mat, 6> beta_field(const CrossedModule& cm, const OneForm& a, const TwoForm& b, const Vec& x,
                              double fd_step) {
  if (a.ambient_dim() != 4) throw DomainError("beta_field: ambient dimension must be 4");
  std::array<Mat, 6> out;
  for (int p = 0; p < 6; ++p) {
    out[static_cast<size_t>(p)] =
        beta_value(cm, a, b, x, basis_vector(4, kPlanes[p][0]), basis_vector(4, kPlanes[p][1]), fd_step);
  }
  return out;
}

Mat beta_value(const CrossedModule& cm, const OneForm& a, const TwoForm& b, const Vec& x, const Vec& v1,
               const Vec& v2, double fd_step) {
  return curvature_two_form(a, x, v1, v2, fd_step) - cm.t_star(b(x, v1, v2));
}

double bf_action(const CrossedModule& cm, const OneForm& a, const TwoForm& b, const PairingSpec& pairing,
                 const GridSpec& grid, double fd_step) {
  check_inputs(cm, a, b, grid);
  return integrate(cm, a, b, pairing, grid.n, fd_step).bb;
}

BfAction action_decomposition(const CrossedModule& cm, const OneForm& a, const TwoForm& b,
                              const PairingSpec& pairing, const GridSpec& grid, double fd_step) {
  check_inputs(cm, a, b, grid);
  const Integrals fine = integrate(cm, a, b, pairing, grid.n, fd_step);
  const Integrals coarse = integrate(cm, a, b, pairing, std::max(2, grid.n / 2), fd_step);
  BfAction r;
  r.S = fine.bb;
  r.yang_mills = fine.ff;
  r.bf_term = -2.0 * fine.ft;
  r.cosmological = fine.tt;
  r.quadrature_error = std::abs(fine.bb - coarse.bb);
  r.beta_sup = fine.beta_sup;
  return r;
}

CriticalityReport criticality_check(const CrossedModule& cm, const OneForm& a, const TwoForm& b,
                                    const PairingSpec& pairing, const GridSpec& grid, int n_directions,
                                    double epsilon, std::uint64_t seed, double fd_step) {
  check_inputs(cm, a, b, grid);
  if (n_directions < 1) throw DomainError("criticality_check: need at least one direction");
  if (!(epsilon > 0.0)) throw DomainError("criticality_check: epsilon must be positive");
  CriticalityReport rep;
  rep.seed = seed;
  rep.epsilon = epsilon;
  const Integrals base = integrate(cm, a, b, pairing, grid.n, fd_step);
  rep.S = base.bb;
  rep.beta_sup = base.beta_sup;

  std::vector<double> nodes, weights;
  gauss_legendre(grid.n, nodes, weights);
  std::mt19937_64 rng(seed);
  const int n = 4;
  for (int dir = 0; dir < n_directions; ++dir) {
    std::vector<ExprMatrix> da;
    std::vector<ExprMatrix> db;
    for (int i = 0; i < n; ++i) da.push_back(random_term(cm.G(), rng));
    for (int p = 0; p < 6; ++p) db.push_back(random_term(cm.H(), rng));
    // Normalize to unit sup-norm over the grid nodes.
    double sup = 0.0;
    std::vector<CompiledMatrix> compiled;
    for (const auto& m : da) compiled.emplace_back(m);
    for (const auto& m : db) compiled.emplace_back(m);
    Vec x(4);
    for (double x0 : nodes)
      for (double x1 : nodes)
        for (double x2 : nodes)
          for (double x3 : nodes) {
            x << x0, x1, x2, x3;
            for (const auto& c : compiled) sup = std::max(sup, c.eval(x.data()).norm());
          }
    const Expr scale = Expr::constant(sup > 0.0 ? 1.0 / sup : 1.0);

    auto perturbed = [&](double eps, OneForm& ap, TwoForm& bp) {
      std::vector<MatrixField> comps;
      for (int i = 0; i < n; ++i) {
        comps.push_back(add_fields(a.component(i), MatrixField::symbolic(scale * da[static_cast<size_t>(i)], n), eps, n));
      }
      ap = OneForm(cm.G(), comps);
      bp = TwoForm(cm.H(), n);
      for (int p = 0; p < 6; ++p) {
        const int i = kPlanes[p][0], j = kPlanes[p][1];
        const MatrixField* c = b.component(i, j);
        const MatrixField basef = c ? *c : MatrixField::zero(cm.H().n, n);
        bp.set(i, j, add_fields(basef, MatrixField::symbolic(scale * db[static_cast<size_t>(p)], n), eps, n));
      }
    };
    OneForm ap, am;
    TwoForm bp, bm;
    perturbed(epsilon, ap, bp);
    perturbed(-epsilon, am, bm);
    const double sp = integrate(cm, ap, bp, pairing, grid.n, fd_step).bb;
    const double sm = integrate(cm, am, bm, pairing, grid.n, fd_step).bb;
    const double d = (sp - sm) / (2.0 * epsilon);
    rep.derivatives.push_back(d);
    rep.max_derivative = std::max(rep.max_derivative, std::abs(d));
  }
  return rep;
}

}  // namespace hgt
