#pragma once

// Transgression of a 2-functor to the free loop space.
//
// Loops are parameterized by z in [0, 1] and based at z = 0. Tangent vectors
// to the loop space are explicit variation fields along the loop. For the
// loop-path bigon m(gamma), the reported pair is (F(b o gamma), k^-1): the
// H-part is inverted, matching the loop-space functor.

#include <functional>

#include "hgt/forms.hpp"
#include "hgt/geometry.hpp"
#include "hgt/transport.hpp"

namespace hgt {

/// Variation field along a loop: z -> delta tau(z).
using LoopVariation = std::function<Vec(double)>;

GroupElement loop_holonomy(const ConnectionPair& pair, const Loop& tau, const IntegratorConfig& cfg = {},
                           const SmoothingProfile& beta = SmoothingProfile());

/// A at the base point, applied to the variation at the base point.
Mat transgressed_A(const ConnectionPair& pair, const Loop& tau, const LoopVariation& dtau);

/// int_0^1 (alpha_{F(arc z -> 1)})_* B(tau'(z), dtau(z)) dz, with one
/// transport sweep around the loop and Simpson's rule on cfg.n_quad_t nodes.
Mat transgressed_phi(const ConnectionPair& pair, const Loop& tau, const LoopVariation& dtau,
                     const IntegratorConfig& cfg = {});

/// The image of the unit standard bigon under (z, t) -> gamma(t)(z).
Bigon loop_path_bigon(const LoopPath& gamma, const SmoothingProfile& beta = SmoothingProfile());

struct LoopPathMorphism {
  /// Surface transport over m(gamma).
  TwoMorphismValue surface;
  /// F(b o gamma).
  GroupElement base;
  /// Matching residual of t(k) F(l(gamma(1))) F(b o gamma) = F(b o gamma) F(l(gamma(0))).
  double matching_residual = 0.0;
};

LoopPathMorphism loop_path_two_morphism(const ConnectionPair& pair, const LoopPath& gamma,
                                        const IntegratorConfig& cfg = {});

struct TransgressionReport {
  Mat functor_g;
  Mat functor_h;
  Mat forms_g;
  Mat forms_h;
  double defect = 0.0;
  double matching_residual = 0.0;
};

/// Compares (F(b o gamma), k^-1) with the transport in G x| H of the
/// loop-space 1-form (A_F, -phi_F) along gamma.
TransgressionReport transgression_consistency(const ConnectionPair& pair, const LoopPath& gamma,
                                              const IntegratorConfig& cfg = {});

}  // namespace hgt
