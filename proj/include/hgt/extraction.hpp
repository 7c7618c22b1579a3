#pragma once

// Differential forms read back out of transport evaluators by difference
// quotients, and the defects of the equations relating extracted data.

#include <functional>
#include <utility>

#include "hgt/crossed_module.hpp"
#include "hgt/forms.hpp"
#include "hgt/geometry.hpp"
#include "hgt/transport.hpp"

namespace hgt {

struct FdConfig {
  double step = 1e-3;
  bool richardson = true;
  void validate() const;
};

using PathFunctor = std::function<Mat(const Path&)>;

/// -d/dt F(x -> x + t v) at t = 0, projected to the algebra of `d`.
Mat extract_one_form(const PathFunctor& f, const GroupDescriptor& d, const Vec& x, const Vec& v,
                     const FdConfig& fd = {});

/// -d^2/ds dt of the H-part of F on standard bigons over x + s v1 + t v2.
Mat extract_two_form(const TwoFunctor& f, const GroupDescriptor& h, const Vec& x, const Vec& v1, const Vec& v2,
                     const FdConfig& fd = {});

struct ExtractedTransformation {
  Mat g;
  Mat phi;
};

/// g(x) and phi_x(v) of a transformation given by its point and path components.
ExtractedTransformation extract_transformation(const std::function<Mat(const Vec&)>& g, const PathFunctor& h,
                                               const GroupDescriptor& hd, const Vec& x, const Vec& v,
                                               const FdConfig& fd = {});

/// Pullback of the right Maurer-Cartan form along x + t v at t = 0.
Mat pullback_maurer_cartan(const MatrixField& g, const GroupDescriptor& d, const Vec& x, const Vec& v,
                           double fd_step = 1e-4);

double residual_prop1(const CrossedModule& cm, const OneForm& a, const TwoForm& b, const SampleSpec& spec);

struct Prop2Residual {
  double one_form = 0.0;  // A' + t_* phi = Ad_g A - g^* theta
  double two_form = 0.0;  // B' + alpha_*(A' ^ phi) + d phi + [phi ^ phi] = (alpha_g)_* B
  double max() const { return std::max(one_form, two_form); }
};

Prop2Residual residual_prop2(const CrossedModule& cm, const MatrixField& g, const OneForm& phi, const OneForm& a,
                             const TwoForm& b, const OneForm& a_prime, const TwoForm& b_prime,
                             const SampleSpec& spec);

struct Prop3Residual {
  double group = 0.0;      // g2 = t(a) g1
  double one_form = 0.0;   // phi2 + (alpha_a)_*(A') a^-1 = Ad_a phi1 - a^* theta
  double max() const { return std::max(group, one_form); }
};

Prop3Residual residual_prop3(const CrossedModule& cm, const MatrixField& a, const MatrixField& g1,
                             const OneForm& phi1, const MatrixField& g2, const OneForm& phi2,
                             const OneForm& a_prime, const SampleSpec& spec);

/// A 1-morphism (g, phi) between objects of the form category.
struct Z2Morphism {
  MatrixField g;
  OneForm phi;
};

/// (g2 g1, (alpha_g2)_* phi1 + phi2).
Z2Morphism compose_z2_morphisms(const Z2Morphism& first, const Z2Morphism& second, const CrossedModule& cm);

/// The pair (A', B') reached from (A, B) by the transformation (g, phi):
/// A' = Ad_g A - g^* theta - t_* phi and
/// B' = (alpha_g)_* B - alpha_*(A' ^ phi) - d phi - [phi ^ phi].
std::pair<OneForm, TwoForm> transform_pair(const CrossedModule& cm, const Z2Morphism& z, const OneForm& a,
                                           const TwoForm& b, double fd_step = 1e-5);

/// The transformation (t(a) g1, phi2) that `a` is a modification to, with
/// phi2 = Ad_a phi1 - a^* theta - (alpha_a)_*(A') a^-1.
Z2Morphism modify_transformation(const CrossedModule& cm, const MatrixField& a, const Z2Morphism& z1,
                                 const OneForm& a_prime, double fd_step = 1e-5);

}  // namespace hgt
