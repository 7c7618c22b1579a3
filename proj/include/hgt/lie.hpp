#pragma once

// Matrix Lie groups and their Lie algebras.
//
// Every group in this library is realized as a group of small dense complex
// matrices; real families simply keep a vanishing imaginary part. Raw matrix
// helpers live in `hgt::mat` and are what the integrators use in their inner
// loops; `GroupElement` and `AlgebraElement` are the validated value types
// handed across module boundaries.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace hgt {

using cplx = std::complex<double>;

inline constexpr int kMaxMatrixDim = 8;
inline constexpr int kMaxAmbientDim = 8;

/// Small dense complex matrix, stack allocated up to kMaxMatrixDim.
using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                          kMaxMatrixDim, kMaxMatrixDim>;
/// Point or tangent vector of the ambient space R^n.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxAmbientDim, 1>;

enum class Family { U1, SU, SO, GL, UT };
enum class Field { Real, Complex };

struct GroupDescriptor {
  Family family = Family::U1;
  int n = 1;
  Field field = Field::Complex;
  double membership_tolerance = 1e-9;

  static GroupDescriptor u1();
  static GroupDescriptor su(int n);
  static GroupDescriptor so(int n);
  static GroupDescriptor gl(int n, Field field = Field::Real);
  /// Upper triangular unipotent matrices.
  static GroupDescriptor ut(int n);
  /// Parses "U1", "SU(n)", "SO(n)", "GL(n)", "GL(n,C)", "UT(n)".
  static GroupDescriptor parse(const std::string& text);

  int matrix_dim() const { return n; }
  std::string name() const;
  bool compact() const { return family == Family::U1 || family == Family::SU || family == Family::SO; }
  bool abelian() const;
  /// Real dimension of the Lie algebra.
  int algebra_dim() const;

  friend bool operator==(const GroupDescriptor& a, const GroupDescriptor& b) {
    return a.family == b.family && a.n == b.n && a.field == b.field;
  }
};

namespace mat {

Mat identity(int n);
Mat zero(int n);

/// Scaling-and-squaring with a truncated Taylor series.
Mat expm(const Mat& x);

/// Largest absolute entry.
double max_abs(const Mat& m);
bool all_finite(const Mat& m);

/// Distance of `m` from the group (0 for exact members).
double group_residual(const GroupDescriptor& d, const Mat& m);
/// Distance of `m` from the Lie algebra.
double algebra_residual(const GroupDescriptor& d, const Mat& m);

/// Nearest algebra element in the Frobenius sense.
Mat project_to_algebra(const GroupDescriptor& d, const Mat& m);

/// Pulls a matrix that drifted slightly off the group back onto it: polar
/// retraction for unitary and orthogonal families, determinant normalization
/// for SU/SO, the unipotent pattern for UT, nothing for GL.
Mat retract(const GroupDescriptor& d, const Mat& m);

/// Group inverse; uses the adjoint for unitary and orthogonal families.
Mat inverse(const GroupDescriptor& d, const Mat& m);

/// Real basis of the Lie algebra.
const std::vector<Mat>& algebra_basis(const GroupDescriptor& d);

/// Real coordinates of an algebra element in `algebra_basis(d)`.
Eigen::VectorXd coordinates(const GroupDescriptor& d, const Mat& x);
Mat from_coordinates(const GroupDescriptor& d, const Eigen::VectorXd& c);

Mat commutator(const Mat& a, const Mat& b);

}  // namespace mat

/// Process-wide switch for revalidating membership on construction. On by
/// default; hot loops bypass validation through the `trusted` factories.
void set_debug_validate(bool on);
bool debug_validate();

class GroupElement {
 public:
  /// Throws DomainError when `m` is not a member within the descriptor's tolerance.
  GroupElement(GroupDescriptor d, Mat m);
  static GroupElement identity(const GroupDescriptor& d);
  static GroupElement trusted(GroupDescriptor d, Mat m);

  const GroupDescriptor& descriptor() const { return desc_; }
  const Mat& matrix() const { return m_; }
  GroupElement inverse() const;

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b);

 private:
  struct Trusted {};
  GroupElement(Trusted, GroupDescriptor d, Mat m) : desc_(d), m_(std::move(m)) {}
  GroupDescriptor desc_;
  Mat m_;
};

class AlgebraElement {
 public:
  AlgebraElement(GroupDescriptor d, Mat m);
  static AlgebraElement zero(const GroupDescriptor& d);
  static AlgebraElement trusted(GroupDescriptor d, Mat m);

  const GroupDescriptor& descriptor() const { return desc_; }
  const Mat& matrix() const { return m_; }

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator*(double s, const AlgebraElement& a);

 private:
  struct Trusted {};
  AlgebraElement(Trusted, GroupDescriptor d, Mat m) : desc_(d), m_(std::move(m)) {}
  GroupDescriptor desc_;
  Mat m_;
};

/// Matrix exponential; the result is retracted onto the group.
GroupElement exp_map(const AlgebraElement& x);

/// g X g^-1.
AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x);

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);

/// Differential of right multiplication by g at the identity, applied to X: X g.
Mat right_translate_diff(const GroupElement& g, const AlgebraElement& x);

/// Curve in a matrix group, evaluated on [lo, hi].
struct GroupCurve {
  GroupDescriptor descriptor;
  std::function<Mat(double)> eval;
  double lo = 0.0;
  double hi = 1.0;
};

/// Central-difference estimate of (dg/dt) g(t)^-1, projected to the algebra.
/// Throws DomainError when the stencil leaves [lo, hi].
AlgebraElement maurer_cartan_right(const GroupCurve& curve, double t, double fd_step);

/// Random algebra element with coordinates uniform in [-scale, scale].
Mat random_algebra_matrix(const GroupDescriptor& d, std::mt19937_64& rng, double scale = 1.0);
/// exp of a random algebra element; covers the identity component.
Mat random_group_matrix(const GroupDescriptor& d, std::mt19937_64& rng, double scale = 1.0);

}  // namespace hgt
