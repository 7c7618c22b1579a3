#include "hgt/forms.hpp"

#include <cmath>
#include <random>

#include "hgt/errors.hpp"

namespace hgt {

struct MatrixField::State {
  int rows = 0;
  int n = 0;
  bool symbolic = false;
  bool zero = false;
  ExprMatrix expr;
  CompiledMatrix value;
  std::vector<CompiledMatrix> partials;
  Native native;
};

namespace {

void check_dim(int n) {
  if (n < 1 || n > kMaxAmbientDim) throw DomainError("ambient dimension outside [1, 8]");
}

Vec basis_vector(int n, int i) {
  Vec e = Vec::Zero(n);
  e(i) = 1.0;
  return e;
}

}  // namespace

std::vector<std::string> coordinate_names(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

MatrixField MatrixField::symbolic(const ExprMatrix& m, int n) {
  check_dim(n);
  if (m.max_var() >= n) throw ConfigError("field references a coordinate beyond x" + std::to_string(n));
  auto s = std::make_shared<State>();
  s->rows = m.rows();
  s->n = n;
  s->symbolic = true;
  s->zero = m.is_zero();
  s->expr = m;
  s->value = CompiledMatrix(m);
  for (int i = 0; i < n; ++i) s->partials.emplace_back(m.diff(i));
  MatrixField f;
  f.s_ = s;
  return f;
}

MatrixField MatrixField::native(int rows, int n, Native fn) {
  check_dim(n);
  auto s = std::make_shared<State>();
  s->rows = rows;
  s->n = n;
  s->native = std::move(fn);
  MatrixField f;
  f.s_ = s;
  return f;
}

MatrixField MatrixField::constant(const Mat& m, int n) { return symbolic(ExprMatrix::constant(m), n); }

MatrixField MatrixField::zero(int rows, int n) { return symbolic(ExprMatrix::zero(rows), n); }

MatrixField MatrixField::parse(const std::vector<std::vector<std::string>>& rows, int n) {
  return symbolic(ExprMatrix::parse(rows, coordinate_names(n)), n);
}

bool MatrixField::is_symbolic() const { return s_ && s_->symbolic; }
bool MatrixField::is_zero() const { return s_ && s_->zero; }
int MatrixField::rows() const { return s_ ? s_->rows : 0; }
int MatrixField::ambient_dim() const { return s_ ? s_->n : 0; }

const ExprMatrix& MatrixField::expr() const {
  if (!is_symbolic()) throw DomainError("field has no symbolic form");
  return s_->expr;
}

Mat MatrixField::operator()(const Vec& x) const {
  if (s_->symbolic) return s_->value.eval(x.data());
  return s_->native(x);
}

Mat MatrixField::partial(int i, const Vec& x, double fd_step) const {
  if (s_->symbolic) return s_->partials[static_cast<size_t>(i)].eval(x.data());
  Vec xp = x, xm = x;
  xp(i) += fd_step;
  xm(i) -= fd_step;
  return (s_->native(xp) - s_->native(xm)) / (2.0 * fd_step);
}

// ---------------------------------------------------------------------------

OneForm::OneForm(GroupDescriptor d, std::vector<MatrixField> components) : desc_(d), c_(std::move(components)) {
  check_dim(static_cast<int>(c_.size()));
  for (const MatrixField& f : c_) {
    if (f.rows() != d.n) throw DomainError("one-form component has the wrong matrix size for " + d.name());
    if (f.ambient_dim() != static_cast<int>(c_.size())) throw DomainError("one-form component has the wrong ambient dimension");
  }
}

OneForm OneForm::zero(const GroupDescriptor& d, int n) {
  return OneForm(d, std::vector<MatrixField>(static_cast<size_t>(n), MatrixField::zero(d.n, n)));
}

bool OneForm::is_symbolic() const {
  for (const MatrixField& f : c_)
    if (!f.is_symbolic()) return false;
  return true;
}

bool OneForm::is_zero() const {
  for (const MatrixField& f : c_)
    if (!f.is_zero()) return false;
  return true;
}

Mat OneForm::operator()(const Vec& x, const Vec& v) const {
  Mat r = mat::zero(desc_.n);
  for (size_t i = 0; i < c_.size(); ++i) {
    const double vi = v(static_cast<Eigen::Index>(i));
    if (vi != 0.0 && !c_[i].is_zero()) r += vi * c_[i](x);
  }
  return r;
}

Mat OneForm::derivative(const Vec& x, const Vec& u, const Vec& v, double fd_step) const {
  Mat r = mat::zero(desc_.n);
  for (size_t i = 0; i < c_.size(); ++i) {
    const double vi = v(static_cast<Eigen::Index>(i));
    if (vi == 0.0 || c_[i].is_zero()) continue;
    for (int k = 0; k < ambient_dim(); ++k) {
      if (u(k) != 0.0) r += (u(k) * vi) * c_[i].partial(k, x, fd_step);
    }
  }
  return r;
}

TwoForm::TwoForm(GroupDescriptor d, int n) : desc_(d), n_(n), c_(static_cast<size_t>(n * n)) { check_dim(n); }

void TwoForm::set(int i, int j, MatrixField f) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j) throw DomainError("two-form index out of range");
  if (f.rows() != desc_.n || f.ambient_dim() != n_) throw DomainError("two-form component has the wrong shape");
  if (i > j) throw DomainError("two-form components are stored for i < j only");
  c_[static_cast<size_t>(i * n_ + j)] = std::move(f);
}

const MatrixField* TwoForm::component(int i, int j) const {
  const auto& c = c_[static_cast<size_t>(i * n_ + j)];
  return c ? &*c : nullptr;
}

bool TwoForm::is_symbolic() const {
  for (const auto& c : c_)
    if (c && !c->is_symbolic()) return false;
  return true;
}

bool TwoForm::is_zero() const {
  for (const auto& c : c_)
    if (c && !c->is_zero()) return false;
  return true;
}

Mat TwoForm::operator()(const Vec& x, const Vec& v1, const Vec& v2) const {
  Mat r = mat::zero(desc_.n);
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      const auto& c = c_[static_cast<size_t>(i * n_ + j)];
      if (!c || c->is_zero()) continue;
      const double w = v1(i) * v2(j) - v1(j) * v2(i);
      if (w != 0.0) r += w * (*c)(x);
    }
  }
  return r;
}

Mat TwoForm::derivative(const Vec& x, const Vec& u, const Vec& v1, const Vec& v2, double fd_step) const {
  Mat r = mat::zero(desc_.n);
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      const auto& c = c_[static_cast<size_t>(i * n_ + j)];
      if (!c || c->is_zero()) continue;
      const double w = v1(i) * v2(j) - v1(j) * v2(i);
      if (w == 0.0) continue;
      for (int k = 0; k < n_; ++k) {
        if (u(k) != 0.0) r += (w * u(k)) * c->partial(k, x, fd_step);
      }
    }
  }
  return r;
}

Mat eval_one_form(const OneForm& a, const Vec& x, const Vec& v) { return a(x, v); }

Mat eval_two_form(const TwoForm& b, const Vec& x, const Vec& v1, const Vec& v2) { return b(x, v1, v2); }

Mat curvature_two_form(const OneForm& a, const Vec& x, const Vec& v1, const Vec& v2, double fd_step) {
  const Mat da = a.derivative(x, v1, v2, fd_step) - a.derivative(x, v2, v1, fd_step);
  return da + mat::commutator(a(x, v1), a(x, v2));
}

TwoForm curvature_form(const OneForm& a, double fd_step) {
  const int n = a.ambient_dim();
  TwoForm k(a.descriptor(), n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (a.is_symbolic()) {
        const ExprMatrix& ai = a.component(i).expr();
        const ExprMatrix& aj = a.component(j).expr();
        k.set(i, j, MatrixField::symbolic(aj.diff(i) - ai.diff(j) + commutator(ai, aj), n));
      } else {
        const Vec ei = basis_vector(n, i), ej = basis_vector(n, j);
        k.set(i, j,
              MatrixField::native(a.descriptor().n, n,
                                  [a, ei, ej, fd_step](const Vec& x) { return curvature_two_form(a, x, ei, ej, fd_step); }));
      }
    }
  }
  return k;
}

Mat alpha_wedge(const CrossedModule& cm, const OneForm& a_prime, const OneForm& phi, const Vec& x, const Vec& v1,
                const Vec& v2) {
  return cm.alpha_star(a_prime(x, v1), phi(x, v2)) - cm.alpha_star(a_prime(x, v2), phi(x, v1));
}

// ---------------------------------------------------------------------------

SampleSpec SampleSpec::unit_box(int n, int n_points, std::uint64_t seed) {
  SampleSpec s;
  s.lo = Vec::Zero(n);
  s.hi = Vec::Ones(n);
  s.n_points = n_points;
  s.seed = seed;
  return s;
}

std::vector<Vec> SampleSpec::points() const {
  static constexpr int kPrimes[kMaxAmbientDim] = {2, 3, 5, 7, 11, 13, 17, 19};
  const auto n = lo.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec shift(n);
  for (Eigen::Index d = 0; d < n; ++d) shift(d) = u(rng);
  std::vector<Vec> out;
  out.reserve(static_cast<size_t>(n_points));
  for (int k = 1; k <= n_points; ++k) {
    Vec p(n);
    for (Eigen::Index d = 0; d < n; ++d) {
      double f = 1.0, r = 0.0;
      for (int i = k; i > 0; i /= kPrimes[d]) {
        f /= kPrimes[d];
        r += f * (i % kPrimes[d]);
      }
      r += shift(d);
      r -= std::floor(r);
      p(d) = lo(d) + r * (hi(d) - lo(d));
    }
    out.push_back(p);
  }
  return out;
}

FakeCurvatureReport fake_curvature_residual(const CrossedModule& cm, const OneForm& a, const TwoForm& b,
                                            const SampleSpec& spec) {
  const int n = a.ambient_dim();
  if (b.ambient_dim() != n || spec.lo.size() != n) throw DomainError("fake_curvature_residual: dimension mismatch");
  if (!(a.descriptor() == cm.G()) || !(b.descriptor() == cm.H())) {
    throw DomainError("fake_curvature_residual: forms do not match the crossed module");
  }
  FakeCurvatureReport rep;
  rep.n_points = spec.n_points;
  rep.seed = spec.seed;
  rep.argmax = spec.lo;
  for (const Vec& x : spec.points()) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Vec ei = basis_vector(n, i), ej = basis_vector(n, j);
        const Mat k = curvature_two_form(a, x, ei, ej, spec.fd_step);
        const double r = (k - cm.t_star(b(x, ei, ej))).norm();
        if (std::isnan(r) || r > rep.max_residual) {
          rep.max_residual = std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
          rep.argmax = x;
        }
      }
    }
  }
  return rep;
}

ConnectionPair::ConnectionPair(CrossedModule cm, OneForm a, TwoForm b, std::optional<double> fc_tolerance,
                               std::optional<SampleSpec> spec)
    : cm_(std::move(cm)), a_(std::move(a)), b_(std::move(b)) {
  const bool exact = a_.is_symbolic();
  tol_ = fc_tolerance.value_or(exact ? 1e-5 : 1e-3);
  const SampleSpec s = spec.value_or(SampleSpec::unit_box(a_.ambient_dim()));
  report_ = fake_curvature_residual(cm_, a_, b_, s);
  if (!(report_.max_residual <= tol_)) {
    throw FakeCurvatureError("fake-curvature residual " + std::to_string(report_.max_residual) + " exceeds " +
                                 std::to_string(tol_),
                             report_.max_residual);
  }
}

Mat curvature_three_form(const ConnectionPair& pair, const Vec& x, const Vec& v1, const Vec& v2, const Vec& v3,
                         double fd_step) {
  const TwoForm& b = pair.B();
  const OneForm& a = pair.A();
  const CrossedModule& cm = pair.cm();
  const Mat db = b.derivative(x, v1, v2, v3, fd_step) - b.derivative(x, v2, v1, v3, fd_step) +
                 b.derivative(x, v3, v1, v2, fd_step);
  const Mat ab = cm.alpha_star(a(x, v1), b(x, v2, v3)) - cm.alpha_star(a(x, v2), b(x, v1, v3)) +
                 cm.alpha_star(a(x, v3), b(x, v1, v2));
  return db + ab;
}

}  // namespace hgt
