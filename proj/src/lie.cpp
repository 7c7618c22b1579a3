#include "hgt/lie.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "hgt/errors.hpp"

namespace hgt {

namespace {

std::atomic<bool> g_debug_validate{true};

void require_dim(int n, int lo) {
  if (n < lo || n > kMaxMatrixDim) {
    throw DomainError("matrix dimension " + std::to_string(n) + " outside [" + std::to_string(lo) + ", " +
                      std::to_string(kMaxMatrixDim) + "]");
  }
}

double frob(const Mat& m) { return m.norm(); }

double imag_norm(const Mat& m) { return m.imag().norm(); }

// Newton-Schulz polar iteration; converges quadratically for near-unitary input.
Mat polar_unitary(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  const Mat id = mat::identity(n);
  Mat x = m;
  double res = frob(x.adjoint() * x - id);
  if (res > 0.5) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
  }
  for (int it = 0; it < 6 && res > 1e-15; ++it) {
    x = 0.5 * x * (3.0 * id - x.adjoint() * x);
    res = frob(x.adjoint() * x - id);
  }
  return x;
}

struct BasisData {
  std::vector<Mat> basis;
  Eigen::MatrixXd gram_inv;
};

BasisData build_basis(const GroupDescriptor& d) {
  const int n = d.n;
  const cplx I(0.0, 1.0);
  std::vector<Mat> b;
  auto unit = [n](int r, int c) {
    Mat e = mat::zero(n);
    e(r, c) = 1.0;
    return e;
  };
  switch (d.family) {
    case Family::U1: {
      Mat e = mat::zero(1);
      e(0, 0) = I;
      b.push_back(e);
      break;
    }
    case Family::SU: {
      for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
          b.push_back(0.5 * I * (unit(j, k) + unit(k, j)));
          b.push_back(0.5 * (unit(j, k) - unit(k, j)));
        }
      }
      for (int l = 1; l < n; ++l) {
        Mat e = mat::zero(n);
        const double c = 1.0 / std::sqrt(2.0 * l * (l + 1));
        for (int j = 0; j < l; ++j) e(j, j) = I * c;
        e(l, l) = -I * c * static_cast<double>(l);
        b.push_back(e);
      }
      break;
    }
    case Family::SO:
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) b.push_back(unit(j, k) - unit(k, j));
      break;
    case Family::GL:
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          b.push_back(unit(j, k));
          if (d.field == Field::Complex) b.push_back(I * unit(j, k));
        }
      }
      break;
    case Family::UT:
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) b.push_back(unit(j, k));
      break;
  }
  const auto m = static_cast<Eigen::Index>(b.size());
  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index c = 0; c < m; ++c) gram(a, c) = (b[a].adjoint() * b[c]).trace().real();
  BasisData out;
  out.basis = std::move(b);
  out.gram_inv = m > 0 ? Eigen::MatrixXd(gram.inverse()) : Eigen::MatrixXd(0, 0);
  return out;
}

const BasisData& basis_data(const GroupDescriptor& d) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, BasisData> cache;
  const auto key = std::make_tuple(static_cast<int>(d.family), d.n, static_cast<int>(d.field));
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_basis(d)).first;
  return it->second;
}

}  // namespace

// ---------------------------------------------------------------------------
// GroupDescriptor

GroupDescriptor GroupDescriptor::u1() { return {Family::U1, 1, Field::Complex}; }

GroupDescriptor GroupDescriptor::su(int n) {
  require_dim(n, 1);
  return {Family::SU, n, Field::Complex};
}

GroupDescriptor GroupDescriptor::so(int n) {
  require_dim(n, 1);
  return {Family::SO, n, Field::Real};
}

GroupDescriptor GroupDescriptor::gl(int n, Field field) {
  require_dim(n, 1);
  return {Family::GL, n, field};
}

GroupDescriptor GroupDescriptor::ut(int n) {
  require_dim(n, 1);
  return {Family::UT, n, Field::Real};
}

GroupDescriptor GroupDescriptor::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (s == "U1" || s == "U(1)") return u1();
  auto paren = s.find('(');
  if (paren == std::string::npos || s.back() != ')') throw ConfigError("unknown group '" + text + "'");
  const std::string head = s.substr(0, paren);
  std::string args = s.substr(paren + 1, s.size() - paren - 2);
  bool complex_field = false;
  if (auto comma = args.find(','); comma != std::string::npos) {
    const std::string f = args.substr(comma + 1);
    if (f == "C") {
      complex_field = true;
    } else if (f != "R") {
      throw ConfigError("unknown field in group '" + text + "'");
    }
    args = args.substr(0, comma);
  }
  int n = 0;
  try {
    size_t used = 0;
    n = std::stoi(args, &used);
    if (used != args.size()) throw std::invalid_argument(args);
  } catch (const std::exception&) {
    throw ConfigError("bad dimension in group '" + text + "'");
  }
  try {
    if (head == "SU" && !complex_field) return su(n);
    if (head == "SO" && !complex_field) return so(n);
    if (head == "GL") return gl(n, complex_field ? Field::Complex : Field::Real);
    if (head == "UT" && !complex_field) return ut(n);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown group '" + text + "'");
}

std::string GroupDescriptor::name() const {
  std::ostringstream os;
  switch (family) {
    case Family::U1: return "U1";
    case Family::SU: os << "SU(" << n << ")"; break;
    case Family::SO: os << "SO(" << n << ")"; break;
    case Family::GL: os << "GL(" << n << (field == Field::Complex ? ",C)" : ")"); break;
    case Family::UT: os << "UT(" << n << ")"; break;
  }
  return os.str();
}

bool GroupDescriptor::abelian() const {
  switch (family) {
    case Family::U1: return true;
    case Family::SU: return n == 1;
    case Family::SO: return n <= 2;
    case Family::GL: return n == 1;
    case Family::UT: return n <= 2;
  }
  return false;
}

int GroupDescriptor::algebra_dim() const { return static_cast<int>(basis_data(*this).basis.size()); }

// ---------------------------------------------------------------------------
// Raw matrix helpers

namespace mat {

Mat identity(int n) { return Mat::Identity(n, n); }
Mat zero(int n) { return Mat::Zero(n, n); }

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool all_finite(const Mat& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m(i).real()) || !std::isfinite(m(i).imag())) return false;
  }
  return true;
}

Mat expm(const Mat& x) {
  if (!all_finite(x)) throw NumericalError("expm: non-finite input");
  const int n = static_cast<int>(x.rows());
  const double norm = x.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Mat a = x / std::ldexp(1.0, squarings);
  // Horner evaluation of the degree-18 Taylor polynomial; ||a|| <= 1/2 so the
  // truncation error is below 1e-22.
  constexpr int kDegree = 18;
  Mat r = identity(n);
  for (int k = kDegree; k >= 1; --k) r = identity(n) + (a * r) / static_cast<double>(k);
  for (int i = 0; i < squarings; ++i) r = r * r;
  if (!all_finite(r)) throw NumericalError("expm: overflow");
  return r;
}

double group_residual(const GroupDescriptor& d, const Mat& m) {
  if (m.rows() != d.n || m.cols() != d.n) return std::numeric_limits<double>::infinity();
  if (!all_finite(m)) return std::numeric_limits<double>::infinity();
  const Mat id = identity(d.n);
  switch (d.family) {
    case Family::U1: return std::abs(std::abs(m(0, 0)) - 1.0);
    case Family::SU: return frob(m.adjoint() * m - id) + std::abs(m.determinant() - 1.0);
    case Family::SO: return imag_norm(m) + frob(m.adjoint() * m - id) + std::abs(m.determinant() - 1.0);
    case Family::GL: {
      const double re = d.field == Field::Real ? imag_norm(m) : 0.0;
      const double det = std::abs(m.determinant());
      return re + (det > d.membership_tolerance ? 0.0 : 1.0);
    }
    case Family::UT: {
      double r = imag_norm(m);
      for (int i = 0; i < d.n; ++i) {
        r += std::abs(m(i, i) - 1.0);
        for (int j = 0; j < i; ++j) r += std::abs(m(i, j));
      }
      return r;
    }
  }
  return 0.0;
}

Mat project_to_algebra(const GroupDescriptor& d, const Mat& m) {
  switch (d.family) {
    case Family::U1: {
      Mat r = zero(1);
      r(0, 0) = cplx(0.0, m(0, 0).imag());
      return r;
    }
    case Family::SU: {
      Mat r = 0.5 * (m - m.adjoint());
      const cplx tr = r.trace() / static_cast<double>(d.n);
      r -= tr * identity(d.n);
      return r;
    }
    case Family::SO: {
      const Eigen::MatrixXd re = m.real();
      return (0.5 * (re - re.transpose())).cast<cplx>();
    }
    case Family::GL:
      if (d.field == Field::Real) return m.real().cast<cplx>();
      return m;
    case Family::UT: {
      Mat r = zero(d.n);
      for (int i = 0; i < d.n; ++i)
        for (int j = i + 1; j < d.n; ++j) r(i, j) = m(i, j).real();
      return r;
    }
  }
  return m;
}

double algebra_residual(const GroupDescriptor& d, const Mat& m) {
  if (m.rows() != d.n || m.cols() != d.n) return std::numeric_limits<double>::infinity();
  if (!all_finite(m)) return std::numeric_limits<double>::infinity();
  return frob(m - project_to_algebra(d, m));
}

Mat retract(const GroupDescriptor& d, const Mat& m) {
  switch (d.family) {
    case Family::U1: {
      Mat r = m;
      const double a = std::abs(m(0, 0));
      if (a == 0.0) throw NumericalError("retract: zero U1 element");
      r(0, 0) /= a;
      return r;
    }
    case Family::SU: {
      Mat u = polar_unitary(m);
      const cplx det = u.determinant();
      u /= std::pow(det, 1.0 / static_cast<double>(d.n));
      return u;
    }
    case Family::SO: {
      const Mat re = m.real().cast<cplx>();
      return polar_unitary(re).real().cast<cplx>();
    }
    case Family::GL:
      if (d.field == Field::Real) return m.real().cast<cplx>();
      return m;
    case Family::UT: {
      Mat r = m.real().cast<cplx>();
      for (int i = 0; i < d.n; ++i) {
        r(i, i) = 1.0;
        for (int j = 0; j < i; ++j) r(i, j) = 0.0;
      }
      return r;
    }
  }
  return m;
}

Mat inverse(const GroupDescriptor& d, const Mat& m) {
  switch (d.family) {
    case Family::U1:
    case Family::SU:
    case Family::SO:
      return m.adjoint();
    case Family::GL:
    case Family::UT: {
      const cplx det = m.determinant();
      if (std::abs(det) < 1e-300 || !std::isfinite(std::abs(det))) throw NumericalError("inverse: singular matrix");
      return m.inverse();
    }
  }
  return m.inverse();
}

const std::vector<Mat>& algebra_basis(const GroupDescriptor& d) { return basis_data(d).basis; }

Eigen::VectorXd coordinates(const GroupDescriptor& d, const Mat& x) {
  const BasisData& bd = basis_data(d);
  const auto m = static_cast<Eigen::Index>(bd.basis.size());
  Eigen::VectorXd rhs(m);
  for (Eigen::Index a = 0; a < m; ++a) rhs(a) = (bd.basis[a].adjoint() * x).trace().real();
  return bd.gram_inv * rhs;
}

Mat from_coordinates(const GroupDescriptor& d, const Eigen::VectorXd& c) {
  const BasisData& bd = basis_data(d);
  Mat r = zero(d.n);
  for (size_t a = 0; a < bd.basis.size(); ++a) r += c(static_cast<Eigen::Index>(a)) * bd.basis[a];
  return r;
}

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

}  // namespace mat

// ---------------------------------------------------------------------------
// Validated value types

void set_debug_validate(bool on) { g_debug_validate.store(on); }
bool debug_validate() { return g_debug_validate.load(); }

GroupElement::GroupElement(GroupDescriptor d, Mat m) : desc_(d), m_(std::move(m)) {
  if (!mat::all_finite(m_)) throw NumericalError("group element has non-finite entries");
  if (debug_validate()) {
    const double r = mat::group_residual(desc_, m_);
    if (!(r <= desc_.membership_tolerance)) {
      throw DomainError("matrix is not in " + desc_.name() + " (residual " + std::to_string(r) + ")");
    }
  }
}

GroupElement GroupElement::identity(const GroupDescriptor& d) { return trusted(d, mat::identity(d.n)); }

GroupElement GroupElement::trusted(GroupDescriptor d, Mat m) { return GroupElement(Trusted{}, d, std::move(m)); }

GroupElement GroupElement::inverse() const { return trusted(desc_, mat::inverse(desc_, m_)); }

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  if (!(a.desc_ == b.desc_)) throw DomainError("product of elements of different groups");
  return GroupElement::trusted(a.desc_, a.m_ * b.m_);
}

AlgebraElement::AlgebraElement(GroupDescriptor d, Mat m) : desc_(d), m_(std::move(m)) {
  if (!mat::all_finite(m_)) throw NumericalError("algebra element has non-finite entries");
  if (debug_validate()) {
    const double scale = std::max(1.0, m_.norm());
    const double r = mat::algebra_residual(desc_, m_);
    if (!(r <= desc_.membership_tolerance * scale)) {
      throw DomainError("matrix is not in the Lie algebra of " + desc_.name() + " (residual " + std::to_string(r) +
                        ")");
    }
  }
}

AlgebraElement AlgebraElement::zero(const GroupDescriptor& d) { return trusted(d, mat::zero(d.n)); }

AlgebraElement AlgebraElement::trusted(GroupDescriptor d, Mat m) {
  return AlgebraElement(Trusted{}, d, std::move(m));
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  if (!(a.desc_ == b.desc_)) throw DomainError("sum of elements of different algebras");
  return AlgebraElement::trusted(a.desc_, a.m_ + b.m_);
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  if (!(a.desc_ == b.desc_)) throw DomainError("difference of elements of different algebras");
  return AlgebraElement::trusted(a.desc_, a.m_ - b.m_);
}

AlgebraElement operator*(double s, const AlgebraElement& a) { return AlgebraElement::trusted(a.desc_, s * a.m_); }

// ---------------------------------------------------------------------------
// Operations

GroupElement exp_map(const AlgebraElement& x) {
  const GroupDescriptor& d = x.descriptor();
  return GroupElement::trusted(d, mat::retract(d, mat::expm(x.matrix())));
}

AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x) {
  if (!(g.descriptor() == x.descriptor())) throw DomainError("adjoint: group and algebra differ");
  const GroupDescriptor& d = g.descriptor();
  return AlgebraElement::trusted(d, g.matrix() * x.matrix() * mat::inverse(d, g.matrix()));
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  if (!(x.descriptor() == y.descriptor())) throw DomainError("bracket: algebras differ");
  return AlgebraElement::trusted(x.descriptor(), mat::commutator(x.matrix(), y.matrix()));
}

Mat right_translate_diff(const GroupElement& g, const AlgebraElement& x) {
  if (!(g.descriptor() == x.descriptor())) throw DomainError("right_translate_diff: group and algebra differ");
  return x.matrix() * g.matrix();
}

AlgebraElement maurer_cartan_right(const GroupCurve& curve, double t, double fd_step) {
  if (!(fd_step > 0.0)) throw DomainError("maurer_cartan_right: fd_step must be positive");
  if (t - fd_step < curve.lo || t + fd_step > curve.hi) {
    throw DomainError("maurer_cartan_right: stencil leaves the curve's domain");
  }
  const GroupDescriptor& d = curve.descriptor;
  const Mat dg = (curve.eval(t + fd_step) - curve.eval(t - fd_step)) / (2.0 * fd_step);
  const Mat x = dg * mat::inverse(d, curve.eval(t));
  return AlgebraElement::trusted(d, mat::project_to_algebra(d, x));
}

Mat random_algebra_matrix(const GroupDescriptor& d, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  const auto& basis = mat::algebra_basis(d);
  Mat r = mat::zero(d.n);
  for (const Mat& e : basis) r += u(rng) * e;
  return r;
}

Mat random_group_matrix(const GroupDescriptor& d, std::mt19937_64& rng, double scale) {
  return mat::retract(d, mat::expm(random_algebra_matrix(d, rng, scale)));
}

}  // namespace hgt
