#include "hgt/crossed_module.hpp"

#include <algorithm>
#include <cmath>

#include "hgt/errors.hpp"

namespace hgt {

struct AutInnerData {
  GroupDescriptor H;
  int m = 0;
  /// Pseudo-inverse of the map z -> vec(ad_Z) in basis coordinates.
  Eigen::MatrixXd ad_pinv;
  std::vector<Eigen::MatrixXd> ad_basis;
};

namespace {

double rel_diff(const Mat& a, const Mat& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

Eigen::MatrixXd real_of(const Mat& m) { return m.real(); }

Mat to_mat(const Eigen::MatrixXd& m) { return m.cast<cplx>(); }

std::shared_ptr<const AutInnerData> build_aut_inner(const GroupDescriptor& h) {
  auto d = std::make_shared<AutInnerData>();
  d->H = h;
  const auto& basis = mat::algebra_basis(h);
  d->m = static_cast<int>(basis.size());
  const int m = d->m;
  Eigen::MatrixXd stacked(m * m, m);
  for (int c = 0; c < m; ++c) {
    Eigen::MatrixXd ad(m, m);
    for (int b = 0; b < m; ++b) {
      ad.col(b) = mat::coordinates(h, mat::commutator(basis[static_cast<size_t>(c)], basis[static_cast<size_t>(b)]));
    }
    d->ad_basis.push_back(ad);
    stacked.col(c) = Eigen::Map<const Eigen::VectorXd>(ad.data(), m * m);
  }
  d->ad_pinv = stacked.completeOrthogonalDecomposition().pseudoInverse();
  return d;
}

Mat aut_t(const AutInnerData& d, const Mat& h) {
  const auto& basis = mat::algebra_basis(d.H);
  const Mat hinv = mat::inverse(d.H, h);
  Eigen::MatrixXd r(d.m, d.m);
  for (int b = 0; b < d.m; ++b) r.col(b) = mat::coordinates(d.H, h * basis[static_cast<size_t>(b)] * hinv);
  return to_mat(r);
}

// An H element g0 with Ad(g0) = R, up to a central factor that cancels in
// conjugation. Solves g0 E_b = (sum_a R_ab E_a) g0 for all basis elements.
Mat aut_lift(const AutInnerData& d, const Mat& rot) {
  const auto& basis = mat::algebra_basis(d.H);
  const int n = d.H.n;
  const Eigen::MatrixXd r = real_of(rot);
  Eigen::MatrixXcd sys(d.m * n * n, n * n);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  for (int b = 0; b < d.m; ++b) {
    Mat f = mat::zero(n);
    for (int a = 0; a < d.m; ++a) f += r(a, b) * basis[static_cast<size_t>(a)];
    const Eigen::MatrixXcd eb = basis[static_cast<size_t>(b)];
    const Eigen::MatrixXcd fb = f;
    // vec(g E) = (E^T kron I) vec(g); vec(F g) = (I kron F) vec(g).
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        sys.block(b * n * n + i * n, j * n, n, n) = eb(j, i) * id;
        if (i == j) sys.block(b * n * n + i * n, j * n, n, n) -= fb;
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  if (smallest > 1e-6 * std::max(1.0, sv(0))) {
    throw DomainError("aut_inner: element is not in the adjoint image (defect " + std::to_string(smallest) + ")");
  }
  const Eigen::VectorXcd v = svd.matrixV().col(n * n - 1);
  Mat g0(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g0(i, j) = v(j * n + i);
  return g0;
}

Mat expm_small(const Mat& x) { return mat::expm(x); }

}  // namespace

CrossedModule CrossedModule::custom(GroupDescriptor G, GroupDescriptor H, TEval t, AlphaEval alpha,
                                    std::string name) {
  CrossedModule cm;
  cm.kind_ = CrossedModuleKind::Custom;
  cm.G_ = G;
  cm.H_ = H;
  cm.t_ = std::move(t);
  cm.alpha_ = std::move(alpha);
  cm.name_ = std::move(name);
  return cm;
}

CrossedModule make_b_abelian(const GroupDescriptor& a) {
  if (!a.abelian()) throw DomainError("b_abelian requires an abelian group, got " + a.name());
  CrossedModule cm;
  cm.kind_ = CrossedModuleKind::BAbelian;
  cm.G_ = GroupDescriptor::so(1);
  cm.H_ = a;
  cm.t_ = [](const Mat&) { return mat::identity(1); };
  cm.alpha_ = [](const Mat&, const Mat& h) { return h; };
  cm.name_ = a == GroupDescriptor::u1() ? "b_u1" : "b_abelian:" + a.name();
  return cm;
}

CrossedModule make_eg(const GroupDescriptor& g) {
  CrossedModule cm;
  cm.kind_ = CrossedModuleKind::EG;
  cm.G_ = g;
  cm.H_ = g;
  cm.t_ = [](const Mat& h) { return h; };
  cm.alpha_ = [g](const Mat& x, const Mat& h) { return Mat(x * h * mat::inverse(g, x)); };
  cm.name_ = "eg:" + g.name();
  return cm;
}

CrossedModule make_aut_inner(const GroupDescriptor& h) {
  const bool semisimple = (h.family == Family::SU && h.n >= 2) || (h.family == Family::SO && h.n >= 3);
  if (!semisimple) throw DomainError("aut_inner requires SU(n), n >= 2, or SO(n), n >= 3; got " + h.name());
  const int m = h.algebra_dim();
  if (m > kMaxMatrixDim) throw DomainError("aut_inner: adjoint dimension of " + h.name() + " exceeds 8");
  CrossedModule cm;
  cm.kind_ = CrossedModuleKind::AutInner;
  cm.G_ = GroupDescriptor::so(m);
  cm.H_ = h;
  cm.aut_ = build_aut_inner(h);
  auto data = cm.aut_;
  cm.t_ = [data](const Mat& x) { return aut_t(*data, x); };
  cm.alpha_ = [data](const Mat& rot, const Mat& x) {
    const Mat g0 = aut_lift(*data, rot);
    return Mat(g0 * x * g0.inverse());
  };
  cm.name_ = "aut_inner:" + h.name();
  return cm;
}

CrossedModule parse_crossed_module(const std::string& text) {
  if (text == "b_u1") return make_b_abelian(GroupDescriptor::u1());
  auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("unknown crossed module '" + text + "'");
  const std::string head = text.substr(0, colon);
  const GroupDescriptor g = GroupDescriptor::parse(text.substr(colon + 1));
  try {
    if (head == "eg") return make_eg(g);
    if (head == "aut_inner") return make_aut_inner(g);
    if (head == "b_abelian") return make_b_abelian(g);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown crossed module '" + text + "'");
}

Mat CrossedModule::t(const Mat& h) const { return t_(h); }

Mat CrossedModule::alpha(const Mat& g, const Mat& h) const { return alpha_(g, h); }

Mat CrossedModule::t_star(const Mat& y, double fd_step) const {
  switch (kind_) {
    case CrossedModuleKind::BAbelian: return mat::zero(1);
    case CrossedModuleKind::EG: return y;
    case CrossedModuleKind::AutInner: {
      const Eigen::VectorXd c = mat::coordinates(H_, y);
      Eigen::MatrixXd r = Eigen::MatrixXd::Zero(aut_->m, aut_->m);
      for (int k = 0; k < aut_->m; ++k) r += c(k) * aut_->ad_basis[static_cast<size_t>(k)];
      return to_mat(r);
    }
    case CrossedModuleKind::Custom: break;
  }
  const Mat d = (t_(expm_small(fd_step * y)) - t_(expm_small(-fd_step * y))) / (2.0 * fd_step);
  return mat::project_to_algebra(G_, d);
}

Mat CrossedModule::alpha_star(const Mat& x, const Mat& y, double fd_step) const {
  switch (kind_) {
    case CrossedModuleKind::BAbelian: return mat::zero(H_.n);
    case CrossedModuleKind::EG: return mat::commutator(x, y);
    case CrossedModuleKind::AutInner:
      return mat::from_coordinates(H_, real_of(x) * mat::coordinates(H_, y));
    case CrossedModuleKind::Custom: break;
  }
  const double e = fd_step;
  const Mat gp = expm_small(e * x), gm = expm_small(-e * x);
  const Mat hp = expm_small(e * y), hm = expm_small(-e * y);
  const Mat d = (alpha_(gp, hp) - alpha_(gp, hm) - alpha_(gm, hp) + alpha_(gm, hm)) / (4.0 * e * e);
  return mat::project_to_algebra(H_, d);
}

Mat CrossedModule::alpha_g_star(const Mat& g, const Mat& y, double fd_step) const {
  switch (kind_) {
    case CrossedModuleKind::BAbelian: return y;
    case CrossedModuleKind::EG: return g * y * mat::inverse(G_, g);
    case CrossedModuleKind::AutInner:
      return mat::from_coordinates(H_, real_of(g) * mat::coordinates(H_, y));
    case CrossedModuleKind::Custom: break;
  }
  const Mat d = (alpha_(g, expm_small(fd_step * y)) - alpha_(g, expm_small(-fd_step * y))) / (2.0 * fd_step);
  return mat::project_to_algebra(H_, d);
}

Mat CrossedModule::alpha_h_star(const Mat& h, const Mat& x, double fd_step) const {
  switch (kind_) {
    case CrossedModuleKind::BAbelian: return mat::zero(H_.n);
    case CrossedModuleKind::EG: return x * h - h * x;
    case CrossedModuleKind::AutInner: {
      const Eigen::MatrixXd xr = real_of(x);
      const Eigen::VectorXd z = aut_->ad_pinv * Eigen::Map<const Eigen::VectorXd>(xr.data(), xr.size());
      const Mat zm = mat::from_coordinates(H_, z);
      return zm * h - h * zm;
    }
    case CrossedModuleKind::Custom: break;
  }
  return (alpha_(expm_small(fd_step * x), h) - alpha_(expm_small(-fd_step * x), h)) / (2.0 * fd_step);
}

Mat random_g(const CrossedModule& cm, std::mt19937_64& rng, double scale) {
  if (cm.kind() == CrossedModuleKind::AutInner) return cm.t(random_group_matrix(cm.H(), rng, scale));
  return random_group_matrix(cm.G(), rng, scale);
}

Mat random_h(const CrossedModule& cm, std::mt19937_64& rng, double scale) {
  return random_group_matrix(cm.H(), rng, scale);
}

double AxiomReport::max_residual() const {
  double m = 0.0;
  for (const auto& [k, v] : residuals) m = std::max(m, v);
  return m;
}

AxiomReport verify_axioms(const CrossedModule& cm, int n_samples, double tol, std::uint64_t seed) {
  if (n_samples < 1) throw DomainError("verify_axioms: n_samples must be at least 1");
  std::mt19937_64 rng(seed);
  AxiomReport rep;
  rep.seed = seed;
  rep.n_samples = n_samples;
  rep.tolerance = tol;
  for (const char* k : {"t_homomorphism", "alpha_identity", "alpha_action", "alpha_homomorphism", "equivariance",
                        "peiffer"}) {
    rep.residuals[k] = 0.0;
  }
  auto bump = [&rep](const char* k, double v) {
    double& r = rep.residuals[k];
    r = std::isnan(v) ? std::numeric_limits<double>::infinity() : std::max(r, v);
  };
  const GroupDescriptor& G = cm.G();
  for (int i = 0; i < n_samples; ++i) {
    const Mat g1 = random_g(cm, rng), g2 = random_g(cm, rng);
    const Mat h1 = random_h(cm, rng), h2 = random_h(cm, rng);
    bump("t_homomorphism", rel_diff(cm.t(h1 * h2), cm.t(h1) * cm.t(h2)));
    bump("alpha_identity", rel_diff(cm.alpha(mat::identity(G.n), h1), h1));
    bump("alpha_action", rel_diff(cm.alpha(g1 * g2, h1), cm.alpha(g1, cm.alpha(g2, h1))));
    bump("alpha_homomorphism", rel_diff(cm.alpha(g1, h1 * h2), cm.alpha(g1, h1) * cm.alpha(g1, h2)));
    bump("equivariance", rel_diff(cm.t(cm.alpha(g1, h1)), g1 * cm.t(h1) * mat::inverse(G, g1)));
    bump("peiffer", rel_diff(cm.alpha(cm.t(h1), h2), h1 * h2 * mat::inverse(cm.H(), h1)));
  }
  rep.pass = rep.max_residual() <= tol;
  return rep;
}

TwoMorphismValue make_two_morphism(const CrossedModule& cm, const Mat& g, const Mat& h) {
  return TwoMorphismValue{GroupElement(cm.G(), g), GroupElement(cm.H(), h), GroupElement(cm.G(), cm.t(h) * g)};
}

double target_matching_residual(const CrossedModule& cm, const TwoMorphismValue& m) {
  return rel_diff(cm.t(m.h_part.matrix()) * m.source.matrix(), m.target.matrix());
}

TwoMorphismValue vcompose(const CrossedModule& cm, const TwoMorphismValue& a, const TwoMorphismValue& b) {
  const double mismatch = rel_diff(b.target.matrix(), a.source.matrix());
  if (mismatch > 1e-6) {
    throw CompositionError("vcompose: target of the first 2-morphism does not match the source of the second (" +
                           std::to_string(mismatch) + ")");
  }
  return make_two_morphism(cm, b.source.matrix(), a.h_part.matrix() * b.h_part.matrix());
}

TwoMorphismValue hcompose(const CrossedModule& cm, const TwoMorphismValue& a, const TwoMorphismValue& b) {
  if (!(a.source.descriptor() == b.source.descriptor()) || !(a.h_part.descriptor() == b.h_part.descriptor())) {
    throw CompositionError("hcompose: descriptors differ");
  }
  const Mat g = a.source.matrix() * b.source.matrix();
  const Mat h = a.h_part.matrix() * cm.alpha(a.source.matrix(), b.h_part.matrix());
  return make_two_morphism(cm, g, h);
}

double interchange_residual(const CrossedModule& cm, int n_samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const Mat g1 = random_g(cm, rng), g2 = random_g(cm, rng);
    const Mat a1 = random_h(cm, rng), a2 = random_h(cm, rng);
    const Mat b1 = random_h(cm, rng), b2 = random_h(cm, rng);
    const TwoMorphismValue phi1 = make_two_morphism(cm, g1, a1);
    const TwoMorphismValue psi1 = make_two_morphism(cm, phi1.target.matrix(), b1);
    const TwoMorphismValue phi2 = make_two_morphism(cm, g2, a2);
    const TwoMorphismValue psi2 = make_two_morphism(cm, phi2.target.matrix(), b2);
    const TwoMorphismValue lhs = vcompose(cm, hcompose(cm, psi2, psi1), hcompose(cm, phi2, phi1));
    const TwoMorphismValue rhs = hcompose(cm, vcompose(cm, psi2, phi2), vcompose(cm, psi1, phi1));
    worst = std::max({worst, rel_diff(lhs.h_part.matrix(), rhs.h_part.matrix()),
                      rel_diff(lhs.source.matrix(), rhs.source.matrix()),
                      rel_diff(lhs.target.matrix(), rhs.target.matrix())});
  }
  return worst;
}

}  // namespace hgt
