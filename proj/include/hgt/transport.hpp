#pragma once

// Path and surface transport reconstructed from differential forms.
//
// Path transport solves u' = -A(gamma') u, u(0) = 1. Surface transport
// integrates f' = -D(s) f over the bigon parameter s, where D(s) is the fibre
// integral over t of alpha(F(gamma_{s,t})^-1)_* B(d_s Sigma, d_t Sigma) with a
// leading minus sign, and reports k = alpha(F(gamma_0), f(1)^-1).

#include <functional>
#include <utility>
#include <vector>

#include "hgt/crossed_module.hpp"
#include "hgt/forms.hpp"
#include "hgt/geometry.hpp"

namespace hgt {

struct IntegratorConfig {
  int n_steps_path = 256;
  int n_steps_surface_s = 128;
  /// Simpson nodes for the fibre integral over t; must be even.
  int n_quad_t = 128;
  bool retraction = true;

  void validate() const;
  /// Every step count multiplied by `factor`.
  IntegratorConfig scaled(double factor) const;
};

/// u(1) of u' = -a(t) u on [0, 1], classical RK4 with `n` steps.
Mat transport_ode(const GroupDescriptor& d, const std::function<Mat(double)>& a, int n, bool retraction);
/// The same ODE, returning u at every node k/n.
std::vector<Mat> transport_sweep(const GroupDescriptor& d, const std::function<Mat(double)>& a, int n,
                                 bool retraction);

/// Transport in G x| H of a 1-form (a, phi): g' = -a g, h' = -phi h - (alpha_h)_*(a),
/// starting at (1, 1). `coef(t)` returns (a, phi) contracted with the velocity.
std::pair<Mat, Mat> semidirect_transport(const CrossedModule& cm,
                                         const std::function<std::pair<Mat, Mat>(double)>& coef, int n,
                                         bool retraction);

GroupElement path_transport(const OneForm& a, const Path& gamma, const IntegratorConfig& cfg = {});
Mat path_transport_matrix(const OneForm& a, const Path& gamma, const IntegratorConfig& cfg = {});

Mat surface_driver(const ConnectionPair& pair, const Bigon& sigma, double s, const IntegratorConfig& cfg = {});

struct SurfaceTransportResult {
  GroupElement k;
  GroupElement g_source;
  GroupElement g_target;
  double matching_residual = 0.0;
};

/// Throws TargetMatchingError when the matching residual exceeds 1e-3.
SurfaceTransportResult surface_transport(const ConnectionPair& pair, const Bigon& sigma,
                                         const IntegratorConfig& cfg = {});

using TwoFunctor = std::function<TwoMorphismValue(const Bigon&)>;

/// Bigon -> (F(source), k, t(k) F(source)).
TwoFunctor two_functor(const ConnectionPair& pair, const IntegratorConfig& cfg = {});

/// The EG-valued 2-functor with h-part F(gamma_1) F(gamma_0)^-1.
TwoFunctor derivative_2functor(const OneForm& a, const GroupDescriptor& g, const IntegratorConfig& cfg = {});

struct TransformationResult {
  GroupElement h;
  /// || F'(gamma) g(x) - t(h^-1) g(y) F(gamma) || relative.
  double matching_residual = 0.0;
};

/// h(1) of h' = -phi(gamma') h - (alpha_h)_*(A'(gamma')), h(0) = 1, for a
/// transformation with components g from the functor of A to that of A'.
/// Throws TargetMatchingError when the residual exceeds 1e-3.
TransformationResult transformation_transport(const CrossedModule& cm, const MatrixField& g, const OneForm& phi,
                                              const OneForm& a, const OneForm& a_prime, const Path& gamma,
                                              const IntegratorConfig& cfg = {});

/// The H-component alone (no matching check).
Mat transformation_h(const CrossedModule& cm, const OneForm& phi, const OneForm& a_prime, const Path& gamma,
                     const IntegratorConfig& cfg = {});

/// || alpha(F'(gamma), a(x)) h1(gamma)^-1 - h2(gamma)^-1 a(y) || for a
/// modification a between the transformations with 1-forms phi1 and phi2.
double modification_whisker(const CrossedModule& cm, const MatrixField& a, const OneForm& a_prime,
                            const OneForm& phi1, const OneForm& phi2, const Path& gamma,
                            const IntegratorConfig& cfg = {});

struct StokesReport {
  Mat lhs;
  Mat rhs;
  double error = 0.0;
};

/// lhs: transport along the target of `sigma`; rhs: w(1) of
/// w' = w D(s), D(s) = -int_0^1 Ad(F(gamma_{s,t}))^-1 K(d_s, d_t) dt.
/// `sigma` must have a constant source path.
StokesReport stokes_check(const OneForm& a, const Bigon& sigma, const IntegratorConfig& cfg = {});

}  // namespace hgt
