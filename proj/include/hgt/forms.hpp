#pragma once

// Lie-algebra-valued differential forms on open subsets of R^n.
//
// Wedge-bracket normalization: [A ^ A](v1, v2) = [A(v1), A(v2)], so the
// curvature is K = dA + [A ^ A] with no factor 1/2. The same rule is used for
// [phi ^ phi] and for alpha_*(A ^ phi).

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hgt/crossed_module.hpp"
#include "hgt/expr.hpp"
#include "hgt/lie.hpp"

namespace hgt {

/// Matrix-valued function on R^n, given by expressions in x1..xn or natively.
class MatrixField {
 public:
  using Native = std::function<Mat(const Vec&)>;

  MatrixField() = default;
  static MatrixField symbolic(const ExprMatrix& m, int ambient_dim);
  static MatrixField native(int rows, int ambient_dim, Native f);
  static MatrixField constant(const Mat& m, int ambient_dim);
  static MatrixField zero(int rows, int ambient_dim);
  static MatrixField parse(const std::vector<std::vector<std::string>>& rows, int ambient_dim);

  bool is_symbolic() const;
  bool is_zero() const;
  int rows() const;
  int ambient_dim() const;
  /// Requires is_symbolic().
  const ExprMatrix& expr() const;

  Mat operator()(const Vec& x) const;
  /// d/dx_i: exact for symbolic fields, central difference otherwise.
  Mat partial(int i, const Vec& x, double fd_step = 1e-4) const;

 private:
  struct State;
  std::shared_ptr<const State> s_;
};

/// Names x1..xn used by expression fields.
std::vector<std::string> coordinate_names(int ambient_dim);

class OneForm {
 public:
  OneForm() = default;
  OneForm(GroupDescriptor d, std::vector<MatrixField> components);
  static OneForm zero(const GroupDescriptor& d, int ambient_dim);

  const GroupDescriptor& descriptor() const { return desc_; }
  int ambient_dim() const { return static_cast<int>(c_.size()); }
  const MatrixField& component(int i) const { return c_[static_cast<size_t>(i)]; }
  bool is_symbolic() const;
  bool is_zero() const;

  /// sum_i A_i(x) v_i.
  Mat operator()(const Vec& x, const Vec& v) const;
  /// Directional derivative of the coefficient in direction u, applied to v.
  Mat derivative(const Vec& x, const Vec& u, const Vec& v, double fd_step = 1e-4) const;

 private:
  GroupDescriptor desc_;
  std::vector<MatrixField> c_;
};

class TwoForm {
 public:
  TwoForm() = default;
  TwoForm(GroupDescriptor d, int ambient_dim);
  static TwoForm zero(const GroupDescriptor& d, int ambient_dim) { return TwoForm(d, ambient_dim); }

  /// Sets B_ij for i < j (the (j, i) entry is implied by antisymmetry).
  void set(int i, int j, MatrixField f);
  const MatrixField* component(int i, int j) const;

  const GroupDescriptor& descriptor() const { return desc_; }
  int ambient_dim() const { return n_; }
  bool is_symbolic() const;
  bool is_zero() const;

  /// sum_{i<j} B_ij(x) (v1_i v2_j - v1_j v2_i).
  Mat operator()(const Vec& x, const Vec& v1, const Vec& v2) const;
  /// Directional derivative of the coefficients in direction u, applied to (v1, v2).
  Mat derivative(const Vec& x, const Vec& u, const Vec& v1, const Vec& v2, double fd_step = 1e-4) const;

 private:
  GroupDescriptor desc_;
  int n_ = 0;
  std::vector<std::optional<MatrixField>> c_;
};

Mat eval_one_form(const OneForm& a, const Vec& x, const Vec& v);
Mat eval_two_form(const TwoForm& b, const Vec& x, const Vec& v1, const Vec& v2);

/// dA(v1, v2) + [A(v1), A(v2)].
Mat curvature_two_form(const OneForm& a, const Vec& x, const Vec& v1, const Vec& v2, double fd_step = 1e-4);
/// The curvature K_A as a form; symbolic when A is.
TwoForm curvature_form(const OneForm& a, double fd_step = 1e-4);

/// alpha_*(A'(v1), phi(v2)) - alpha_*(A'(v2), phi(v1)).
Mat alpha_wedge(const CrossedModule& cm, const OneForm& a_prime, const OneForm& phi, const Vec& x, const Vec& v1,
                const Vec& v2);

struct SampleSpec {
  Vec lo;
  Vec hi;
  int n_points = 256;
  std::uint64_t seed = 1;
  double fd_step = 1e-4;

  static SampleSpec unit_box(int ambient_dim, int n_points = 256, std::uint64_t seed = 1);
  /// Shifted Halton points in [lo, hi].
  std::vector<Vec> points() const;
};

struct FakeCurvatureReport {
  double max_residual = 0.0;
  Vec argmax;
  int n_points = 0;
  std::uint64_t seed = 0;
};

/// max over samples and coordinate planes of ||dA + [A ^ A] - t_* B||.
FakeCurvatureReport fake_curvature_residual(const CrossedModule& cm, const OneForm& a, const TwoForm& b,
                                            const SampleSpec& spec);

class ConnectionPair {
 public:
  /// Throws FakeCurvatureError when the residual exceeds the tolerance. The
  /// default tolerance is 1e-5 for symbolic forms and 1e-3 otherwise.
  ConnectionPair(CrossedModule cm, OneForm a, TwoForm b, std::optional<double> fc_tolerance = std::nullopt,
                 std::optional<SampleSpec> spec = std::nullopt);

  const CrossedModule& cm() const { return cm_; }
  const OneForm& A() const { return a_; }
  const TwoForm& B() const { return b_; }
  double fc_tolerance() const { return tol_; }
  const FakeCurvatureReport& fc_report() const { return report_; }

 private:
  CrossedModule cm_;
  OneForm a_;
  TwoForm b_;
  double tol_;
  FakeCurvatureReport report_;
};

/// dB(v1,v2,v3) + alpha_*(A ^ B)(v1,v2,v3).
Mat curvature_three_form(const ConnectionPair& pair, const Vec& x, const Vec& v1, const Vec& v2, const Vec& v3,
                         double fd_step = 1e-4);

}  // namespace hgt
