#pragma once

// The BF action on the unit 4-cube.
//
// beta = K_A - t_* B and S = int <b12,b34> - <b13,b24> + <b14,b23> d^4x, which
// is one half of the integral of <beta ^ beta>. No boundary terms.

#include <array>
#include <cstdint>
#include <vector>

#include "hgt/crossed_module.hpp"
#include "hgt/forms.hpp"

namespace hgt {

enum class PairingKind { NegTrace, Trace };

struct PairingSpec {
  PairingKind kind = PairingKind::NegTrace;
  /// NegTrace for compact groups, Trace otherwise.
  static PairingSpec for_group(const GroupDescriptor& g);
  double operator()(const Mat& x, const Mat& y) const;
};

struct GridSpec {
  /// Gauss-Legendre nodes per axis.
  int n = 12;
};

/// beta(e_i, e_j) for i < j, in the order 12, 13, 14, 23, 24, 34.
std::array<Mat, 6> beta_field(const CrossedModule& cm, const OneForm& a, const TwoForm& b, const Vec& x,
                              double fd_step = 1e-4);

/// beta(v1, v2) at x for any ambient dimension.
Mat beta_value(const CrossedModule& cm, const OneForm& a, const TwoForm& b, const Vec& x, const Vec& v1,
               const Vec& v2, double fd_step = 1e-4);

struct BfAction {
  double S = 0.0;
  double yang_mills = 0.0;
  double bf_term = 0.0;
  double cosmological = 0.0;
  /// |S_n - S_{n/2}|.
  double quadrature_error = 0.0;
  /// Largest Frobenius norm of a beta component at the grid nodes.
  double beta_sup = 0.0;
};

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

double bf_action(const CrossedModule& cm, const OneForm& a, const TwoForm& b, const PairingSpec& pairing,
                 const GridSpec& grid = {}, double fd_step = 1e-4);

/// S and its Yang-Mills, BF and cosmological parts, plus the error estimate.
BfAction action_decomposition(const CrossedModule& cm, const OneForm& a, const TwoForm& b,
                              const PairingSpec& pairing, const GridSpec& grid = {}, double fd_step = 1e-4);

struct CriticalityReport {
  double S = 0.0;
  double beta_sup = 0.0;
  std::vector<double> derivatives;
  double max_derivative = 0.0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
};

/// Central differences of S along seeded random polynomial perturbations of
/// A and B with unit sup-norm on the grid.
CriticalityReport criticality_check(const CrossedModule& cm, const OneForm& a, const TwoForm& b,
                                    const PairingSpec& pairing, const GridSpec& grid, int n_directions,
                                    double epsilon = 1e-3, std::uint64_t seed = 1, double fd_step = 1e-4);

}  // namespace hgt
