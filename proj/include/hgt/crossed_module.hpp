#pragma once

// Smooth crossed modules (G, H, t, alpha) and the 2-group compositions.
//
// Hot paths work on raw matrices: `t`, `alpha` and the differentials take
// and return `Mat`. 2-morphisms are pairs (g, h) in G x H with target t(h) g.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "hgt/lie.hpp"

namespace hgt {

enum class CrossedModuleKind { BAbelian, EG, AutInner, Custom };

struct AutInnerData;

class CrossedModule {
 public:
  using TEval = std::function<Mat(const Mat& h)>;
  using AlphaEval = std::function<Mat(const Mat& g, const Mat& h)>;

  /// User-supplied evaluators; differentials fall back to difference quotients.
  static CrossedModule custom(GroupDescriptor G, GroupDescriptor H, TEval t, AlphaEval alpha, std::string name);

  CrossedModuleKind kind() const { return kind_; }
  const GroupDescriptor& G() const { return G_; }
  const GroupDescriptor& H() const { return H_; }
  const std::string& name() const { return name_; }

  Mat t(const Mat& h) const;
  Mat alpha(const Mat& g, const Mat& h) const;

  /// dt at 1.
  Mat t_star(const Mat& y, double fd_step = 1e-5) const;
  /// Mixed derivative of alpha at (1, 1).
  Mat alpha_star(const Mat& x, const Mat& y, double fd_step = 1e-4) const;
  /// Differential of alpha(g, -) at 1.
  Mat alpha_g_star(const Mat& g, const Mat& y, double fd_step = 1e-5) const;
  /// Differential of alpha(-, h) at 1; a tangent vector at h.
  Mat alpha_h_star(const Mat& h, const Mat& x, double fd_step = 1e-5) const;

  friend CrossedModule make_b_abelian(const GroupDescriptor& a);
  friend CrossedModule make_eg(const GroupDescriptor& g);
  friend CrossedModule make_aut_inner(const GroupDescriptor& h);

 private:
  CrossedModule() = default;
  CrossedModuleKind kind_ = CrossedModuleKind::Custom;
  GroupDescriptor G_;
  GroupDescriptor H_;
  TEval t_;
  AlphaEval alpha_;
  std::string name_;
  std::shared_ptr<const AutInnerData> aut_;
};

/// BA: trivial G (represented as SO(1)), H = A abelian, trivial action.
CrossedModule make_b_abelian(const GroupDescriptor& a);
/// EG: H = G, t = id, alpha = conjugation.
CrossedModule make_eg(const GroupDescriptor& g);
/// Inner automorphisms of a semisimple H, realized as the adjoint image
/// Ad(H) inside SO(dim h) with alpha(Ad_g, h) = g h g^-1.
CrossedModule make_aut_inner(const GroupDescriptor& h);

/// Parses "b_u1", "b_abelian:<group>", "eg:<group>", "aut_inner:<group>".
CrossedModule parse_crossed_module(const std::string& text);

/// Random element of G; for AutInner this is t of a random H element, so it
/// stays inside the adjoint image.
Mat random_g(const CrossedModule& cm, std::mt19937_64& rng, double scale = 1.0);
Mat random_h(const CrossedModule& cm, std::mt19937_64& rng, double scale = 1.0);

struct AxiomReport {
  std::uint64_t seed = 0;
  int n_samples = 0;
  double tolerance = 0.0;
  /// Max residual per axiom, keyed by a short axiom name.
  std::map<std::string, double> residuals;
  bool pass = false;
  double max_residual() const;
};

AxiomReport verify_axioms(const CrossedModule& cm, int n_samples, double tol, std::uint64_t seed = 1);

/// A 2-morphism g => t(h) g of the one-object 2-groupoid.
struct TwoMorphismValue {
  GroupElement source;
  GroupElement h_part;
  GroupElement target;
};

/// Builds (g, h) with target t(h) g.
TwoMorphismValue make_two_morphism(const CrossedModule& cm, const Mat& g, const Mat& h);
/// || t(h) g - g' || / max(1, ||g'||).
double target_matching_residual(const CrossedModule& cm, const TwoMorphismValue& m);

/// a after b; requires b.target == a.source within 1e-6.
TwoMorphismValue vcompose(const CrossedModule& cm, const TwoMorphismValue& a, const TwoMorphismValue& b);
/// Horizontal composite of b (first) followed by a (second):
/// source a.g b.g, h-part a.h alpha(a.g, b.h), target a.g' b.g'.
TwoMorphismValue hcompose(const CrossedModule& cm, const TwoMorphismValue& a, const TwoMorphismValue& b);

/// Max residual of the interchange law over sampled composable quadruples.
double interchange_residual(const CrossedModule& cm, int n_samples, std::uint64_t seed = 1);

}  // namespace hgt
