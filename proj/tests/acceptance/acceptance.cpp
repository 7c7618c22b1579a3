// Runs the shipped acceptance configs and checks each criterion against its
// thresholds, reading the raw numbers out of the reports.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hgt/commands.hpp"
#include "hgt/config.hpp"

namespace fs = std::filesystem;
using hgt::Json;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::vector<fs::path> configs(const std::string& prefix) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(HGT_CONFIG_DIR)) {
    const std::string name = e.path().filename().string();
    if (name.rfind(prefix, 0) == 0 && e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Json run(const fs::path& p) { return hgt::run_command(hgt::ExperimentConfig::from_file(p.string())); }

double num(const Json& r, const char* key) { return r.at(key).get<double>(); }

void c1(Outcome& o) {
  const auto files = configs("c1_");
  o.require(files.size() == 3, "three crossed modules");
  double axioms = 0.0, inter = 0.0;
  for (const auto& f : files) {
    const Json r = run(f);
    o.require(r.at("samples").get<int>() >= 200, f.filename().string() + " samples");
    o.require(r.at("quadruples").get<int>() >= 100, f.filename().string() + " quadruples");
    axioms = std::max(axioms, num(r, "max_residual"));
    inter = std::max(inter, num(r, "interchange_residual"));
  }
  o.require(axioms <= 1e-9, "axiom residual");
  o.require(inter <= 1e-9, "interchange residual");
  o.detail << "axioms " << axioms << ", interchange " << inter;
}

void c2(Outcome& o) {
  const auto files = configs("c2_");
  o.require(files.size() == 5, "five one-forms");
  double worst = 0.0;
  for (const auto& f : files) {
    const Json r = run(f);
    o.require(r.at("one_form_samples").get<int>() >= 32, "32 samples");
    o.require(r.at("integrator").at("n_steps_path").get<int>() == 512, "512 steps");
    worst = std::max(worst, num(r, "one_form_error"));
  }
  o.require(worst <= 5e-5, "one-form error");
  o.detail << "max one-form error " << worst;
}

void c3(Outcome& o) {
  const auto files = configs("c3_");
  int eg = 0, bu1 = 0;
  double worst = 0.0;
  for (const auto& f : files) {
    const Json r = run(f);
    (f.filename().string().find("eg_") != std::string::npos ? eg : bu1)++;
    o.require(r.at("two_form_samples").get<int>() >= 16, "16 samples");
    worst = std::max(worst, num(r, "two_form_error"));
  }
  o.require(eg == 3 && bu1 == 2, "three EG and two BU(1) pairs");
  o.require(worst <= 1e-4, "two-form error");
  o.detail << "max two-form error " << worst;
}

// Criteria 4 and 5 share the functoriality runs.
std::vector<Json>& functoriality_reports() {
  static std::vector<Json> reports = [] {
    std::vector<Json> v;
    for (const auto& f : configs("c4_c5_")) v.push_back(run(f));
    return v;
  }();
  return reports;
}

void c4(Outcome& o) {
  const auto& rs = functoriality_reports();
  o.require(rs.size() == 3, "three crossed-module kinds");
  double vert = 0.0, hor = 0.0, id = 0.0, match = 0.0;
  for (const Json& r : rs) {
    o.require(r.at("cases").get<int>() >= 6, "6 bigon pairs");
    vert = std::max(vert, num(r, "vertical_residual"));
    hor = std::max(hor, num(r, "horizontal_residual"));
    id = std::max(id, num(r, "identity_residual"));
    match = std::max(match, num(r, "matching_residual"));
  }
  o.require(vert <= 1e-6, "vertical");
  o.require(hor <= 1e-6, "horizontal");
  o.require(id <= 1e-8, "identity");
  o.require(match <= 1e-6, "target matching");
  o.detail << "vertical " << vert << ", horizontal " << hor << ", identity " << id << ", matching " << match;
}

void c5(Outcome& o) {
  const auto& rs = functoriality_reports();
  double rep = 0.0, prof = 0.0;
  for (const Json& r : rs) {
    o.require(r.at("reparams").get<int>() >= 3, "3 reparameterizations");
    rep = std::max(rep, num(r, "reparam_residual"));
    prof = std::max(prof, num(r, "profile_residual"));
  }
  o.require(!rs.empty(), "runs");
  o.require(rep <= 1e-6, "reparameterization");
  o.require(prof <= 1e-6, "profile swap");
  o.detail << "reparam " << rep << ", profile " << prof << ", timed under criterion 4";
}

void c6(Outcome& o) {
  const Json r = run(fs::path(HGT_CONFIG_DIR) / "c6_stokes_su2.json");
  const double err = num(r, "error");
  const auto& conv = r.at("convergence");
  const double order = conv.at("order").get<double>();
  o.require(err <= 1e-5, "stokes error");
  o.require(conv.at("errors").size() >= 3, "three refinements");
  o.require(order >= 2.0, "convergence order");
  const Json a = run(fs::path(HGT_CONFIG_DIR) / "c6_stokes_u1_abelian.json");
  const double ref = num(a, "reference_error");
  o.require(ref <= 1e-7, "abelian reference");
  o.detail << "error " << err << ", order " << order << ", abelian reference " << ref;
}

void c7(Outcome& o) {
  const Json acc = run(fs::path(HGT_CONFIG_DIR) / "c7_check_fc_accept.json");
  const Json rej = run(fs::path(HGT_CONFIG_DIR) / "c7_check_fc_reject.json");
  o.require(acc.at("accepted").get<bool>(), "EG pair accepted");
  o.require(!rej.at("accepted").get<bool>(), "shifted pair rejected");
  const double res = num(rej, "rejected_residual");
  o.require(res >= 0.05, "rejected residual");
  o.detail << "accepted residual " << num(acc, "max_residual") << ", rejected residual " << res;
}

void c8(Outcome& o) {
  const Json crit = run(fs::path(HGT_CONFIG_DIR) / "c8_bf_critical.json");
  const Json non = run(fs::path(HGT_CONFIG_DIR) / "c8_bf_noncritical.json");
  o.require(crit.at("grid").get<int>() == 12 && non.at("grid").get<int>() == 12, "grid 12");
  o.require(crit.at("derivatives").size() == 8, "8 perturbations");
  const double s = std::abs(num(crit, "S")), d = num(crit, "max_derivative");
  const double beta = num(non, "beta_sup"), dn = num(non, "max_derivative");
  o.require(s <= 1e-5, "|S|");
  o.require(d <= 1e-4, "critical derivative");
  o.require(beta >= 0.15 && beta <= 0.6, "beta sup near 0.3");
  o.require(dn >= 1e-2, "non-critical derivative");
  o.detail << "|S| " << s << ", max derivative " << d << "; beta_sup " << beta << ", max derivative " << dn;
}

void c9(Outcome& o) {
  const Json r = run(fs::path(HGT_CONFIG_DIR) / "c9_transgress_b_u1_cylinder.json");
  const double defect = num(r, "defect");
  const double order = r.at("convergence").at("order").get<double>();
  double phi = 0.0;
  o.require(r.at("loops").size() == 3, "three loops");
  for (const Json& l : r.at("loops")) phi = std::max(phi, l.at("phi_error").get<double>());
  o.require(phi <= 1e-6, "phi quadrature");
  o.require(defect <= 1e-4, "defect");
  o.require(order >= 2.0, "order");
  o.detail << "phi error " << phi << ", defect " << defect << ", order " << order;
}

void c10(Outcome& o) {
  const Json r = run(fs::path(HGT_CONFIG_DIR) / "c10_morphism_eg_su2.json");
  const double match = std::max(num(r, "matching_residual"), num(r, "whisker_residual"));
  const auto mx = [](const Json& j) {
    double m = 0.0;
    for (const auto& [k, v] : j.items()) m = std::max(m, v.get<double>());
    return m;
  };
  const double p2 = mx(r.at("prop2")), p3 = mx(r.at("prop3"));
  const double b2 = mx(r.at("prop2_perturbed")), b3 = mx(r.at("prop3_perturbed"));
  o.require(match <= 1e-6, "transport matching");
  o.require(p2 <= 1e-4 && p3 <= 1e-4, "round-trip residuals");
  o.require(b2 >= 5e-2 && b3 >= 5e-2, "perturbed residuals");
  o.detail << "matching " << match << ", residuals " << p2 << " " << p3 << ", perturbed " << b2 << " " << b3;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::function<void(Outcome&)> run;
    double budget_s;
  };
  const std::vector<Criterion> all{{1, c1, 5},   {2, c2, 30},  {3, c3, 120}, {4, c4, 60},  {5, c5, 30},
                                   {6, c6, 30},  {7, c7, 5},   {8, c8, 180}, {9, c9, 60},  {10, c10, 60}};
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    o.detail.precision(3);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [error: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs <= c.budget_s, "runtime budget");
    std::printf("%s criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, o.detail.str().c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
