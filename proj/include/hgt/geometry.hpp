#pragma once

// Paths, bigons and loops in open subsets of R^n.
//
// Everything is a closure with an analytic first derivative. A bigon
// Sigma(s, t) runs from its source path Sigma(0, .) to its target path
// Sigma(1, .); t is the path parameter.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hgt/lie.hpp"

namespace hgt {

/// Flat-ended step: 0 on [0, eps], 1 on [1 - eps, 1], built from exp(-1/u).
class SmoothingProfile {
 public:
  enum class Kernel { Exp, ExpSquared };  // exp(-1/u) or exp(-1/u^2)

  explicit SmoothingProfile(double epsilon = 0.1, Kernel kernel = Kernel::Exp);

  double epsilon() const { return eps_; }
  Kernel kernel() const { return kernel_; }
  double operator()(double u) const;
  double derivative(double u) const;

 private:
  double eps_;
  Kernel kernel_;
};

/// Orientation-preserving diffeomorphism of [0, 1].
struct Reparam {
  std::function<double(double)> f;
  std::function<double(double)> df;

  static Reparam identity();
  static Reparam from_profile(const SmoothingProfile& p);
  /// 3u^2 - 2u^3.
  static Reparam smoothstep();
  /// u + a sin(2 pi u) / (2 pi), |a| < 1.
  static Reparam wobble(double a);
};

class Path {
 public:
  using Fn = std::function<Vec(double)>;

  Path(int dim, Fn eval, Fn velocity, std::optional<SmoothingProfile> sitting = std::nullopt);

  static Path constant(const Vec& x);
  /// a + beta(t) (b - a); sits at both ends.
  static Path line(const Vec& a, const Vec& b, const SmoothingProfile& beta = SmoothingProfile());
  /// Straight line with constant speed, no sitting instants.
  static Path affine(const Vec& a, const Vec& b);
  /// Component expressions in the variable `t`.
  static Path from_expressions(const std::vector<std::string>& components);

  int dim() const { return dim_; }
  Vec operator()(double t) const { return eval_(t); }
  Vec velocity(double t) const { return vel_(t); }
  Vec start() const { return eval_(0.0); }
  Vec end() const { return eval_(1.0); }
  const std::optional<SmoothingProfile>& sitting() const { return sitting_; }

 private:
  int dim_;
  Fn eval_;
  Fn vel_;
  std::optional<SmoothingProfile> sitting_;
};

/// First gamma1, then gamma2, meeting at parameter 1/2.
Path path_compose(const Path& gamma1, const Path& gamma2);
Path path_reverse(const Path& gamma);
Path reparameterize(const Path& gamma, const Reparam& beta);

/// Max distance over 64 Chebyshev nodes in [0, 1].
double path_distance(const Path& a, const Path& b);

class Bigon {
 public:
  using Fn = std::function<Vec(double, double)>;

  Bigon(int dim, Fn eval, Fn d_s, Fn d_t);

  static Bigon identity(const Path& gamma);
  /// Component expressions in the variables `s` and `t`.
  static Bigon from_expressions(const std::vector<std::string>& components);

  int dim() const { return dim_; }
  Vec operator()(double s, double t) const { return eval_(s, t); }
  Vec d_s(double s, double t) const { return ds_(s, t); }
  Vec d_t(double s, double t) const { return dt_(s, t); }
  Path source() const;
  Path target() const;

 private:
  int dim_;
  Fn eval_;
  Fn ds_;
  Fn dt_;
};

/// Sigma first, then Sigma' (stacked in s). Throws CompositionError when the
/// target of Sigma and the source of Sigma' differ by more than 1e-8.
Bigon bigon_vcompose(const Bigon& sigma, const Bigon& sigma_prime);
/// Sigma1 along the first half of t, Sigma2 along the second.
Bigon bigon_hcompose(const Bigon& sigma1, const Bigon& sigma2);
Bigon bigon_reparameterize(const Bigon& sigma, const Reparam& in_s, const Reparam& in_t);

/// A smooth map R^2 -> R^n with its Jacobian columns.
struct PlaneMap {
  int dim = 2;
  std::function<Vec(double, double)> eval;
  std::function<Vec(double, double)> d_u;
  std::function<Vec(double, double)> d_v;

  static PlaneMap identity();
  /// x + u v1 + v v2.
  static PlaneMap affine(const Vec& x, const Vec& v1, const Vec& v2);
  /// Component expressions in the variables `s` and `t`.
  static PlaneMap from_expressions(const std::vector<std::string>& components);
};

/// Image under Gamma of the standard bigon over the rectangle [0,s] x [0,t].
/// Its source runs (0,0) -> (0,t) -> (s,t), its target (0,0) -> (s,0) -> (s,t).
Bigon standard_bigon(const PlaneMap& gamma, double s, double t, const SmoothingProfile& beta = SmoothingProfile());

/// x0 + beta(t) (x1 - x0) + lambda sin(pi beta(t)) w: a family of sitting
/// paths from x0 to x1 indexed by lambda.
Path bulge_path(const Vec& x0, const Vec& x1, const Vec& w, double lambda,
                const SmoothingProfile& beta = SmoothingProfile());
/// The bigon sweeping bulge_path from lambda0 to lambda1 as s runs through
/// beta(s). Bigons with matching lambdas are vertically composable.
Bigon bulge_bigon(const Vec& x0, const Vec& x1, const Vec& w, double lambda0, double lambda1,
                  const SmoothingProfile& beta = SmoothingProfile());

/// Smooth loop parameterized by z in [0, 1], periodic.
class Loop {
 public:
  using Fn = std::function<Vec(double)>;
  Loop(int dim, Fn eval, Fn velocity);
  static Loop from_expressions(const std::vector<std::string>& components);

  int dim() const { return dim_; }
  Vec operator()(double z) const { return eval_(z); }
  Vec velocity(double z) const { return vel_(z); }
  Vec base_point() const { return eval_(0.0); }
  /// The loop started at z0 instead of 0.
  Loop rotated(double z0) const;

 private:
  int dim_;
  Fn eval_;
  Fn vel_;
};

/// t -> tau(beta(t)), based at tau(0).
Path loop_to_path(const Loop& tau, const SmoothingProfile& beta = SmoothingProfile());

/// A path of loops gamma(t)(z); sits in t near both ends.
class LoopPath {
 public:
  using Fn = std::function<Vec(double, double)>;
  LoopPath(int dim, Fn eval, Fn d_t, Fn d_z);
  /// Component expressions in `t` and `z`.
  static LoopPath from_expressions(const std::vector<std::string>& components);

  int dim() const { return dim_; }
  Vec operator()(double t, double z) const { return eval_(t, z); }
  Vec d_t(double t, double z) const { return dt_(t, z); }
  Vec d_z(double t, double z) const { return dz_(t, z); }
  Loop at(double t) const;
  /// t -> gamma(t)(0).
  Path base_path() const;

 private:
  int dim_;
  Fn eval_;
  Fn dt_;
  Fn dz_;
};

}  // namespace hgt
