#pragma once

// Shared fixtures: the frozen reference values and a few standard fields.

#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "hgt/crossed_module.hpp"
#include "hgt/forms.hpp"
#include "hgt/lie.hpp"

namespace hgt::test {

/// Abelian surface holonomy is k = exp(kAbelianSign * integral of B over the bigon),
/// pinned once against the reference quadrature.
inline constexpr double kAbelianSign = -1.0;

inline const nlohmann::json& oracle() {
  static const nlohmann::json j = [] {
    std::ifstream in(std::string(HGT_TEST_DATA) + "/oracle.json");
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
  }();
  return j;
}

inline Mat mat_of(const nlohmann::json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  const int n = static_cast<int>(re.size());
  Mat m(n, static_cast<int>(re[0].size()));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m.cols(); ++k) m(i, k) = cplx(re[i][k].get<double>(), im[i][k].get<double>());
  return m;
}

inline Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

inline Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

inline Vec unit(int n, int i) {
  Vec v = Vec::Zero(n);
  v(i) = 1.0;
  return v;
}

/// The su(2) connection on the unit square used across the suite.
inline OneForm su2_connection() {
  return OneForm(GroupDescriptor::su(2),
                 {MatrixField::parse({{"i*x2", "0.5*x1 + 0.3"}, {"-0.5*x1 - 0.3", "-i*x2"}}, 2),
                  MatrixField::parse({{"0.7*i*x1^2", "0.2*i + 0.4*x2"}, {"0.2*i - 0.4*x2", "-0.7*i*x1^2"}}, 2)});
}

/// A u(1) connection on the plane.
inline OneForm u1_connection() {
  return OneForm(GroupDescriptor::u1(), {MatrixField::parse({{"i*(0.3*x2^2 + 0.5*sin(x1))"}}, 2),
                                         MatrixField::parse({{"i*(x1*x2 - 0.2*cos(x2))"}}, 2)});
}

/// The EG(SU(2)) pair (A, K_A).
inline ConnectionPair eg_pair() {
  const OneForm a = su2_connection();
  return ConnectionPair(make_eg(GroupDescriptor::su(2)), a, curvature_form(a));
}

/// BU(1) with B = i (0.5 + x1 x2 - 0.3 x2^2) dx1 ^ dx2.
inline ConnectionPair b_u1_pair() {
  const CrossedModule cm = make_b_abelian(GroupDescriptor::u1());
  TwoForm b(cm.H(), 2);
  b.set(0, 1, MatrixField::parse({{"i*(0.5 + x1*x2 - 0.3*x2^2)"}}, 2));
  return ConnectionPair(cm, OneForm::zero(cm.G(), 2), b);
}

inline double dist(const Mat& a, const Mat& b) { return (a - b).norm(); }

}  // namespace hgt::test
