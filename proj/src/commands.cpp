#include "hgt/commands.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "hgt/bf.hpp"
#include "hgt/errors.hpp"
#include "hgt/transgression.hpp"

namespace hgt {

namespace {

// Records every tolerance a command consults so the report can echo it.
class Tolerances {
 public:
  explicit Tolerances(const ExperimentConfig& cfg) : cfg_(cfg) {}
  double operator()(const std::string& key, double fallback) {
    const double v = cfg_.tolerance(key, fallback);
    used_[key] = v;
    return v;
  }
  const Json& used() const { return used_; }

 private:
  const ExperimentConfig& cfg_;
  Json used_ = Json::object();
};

Json integrator_json(const IntegratorConfig& c) {
  return Json{{"n_steps_path", c.n_steps_path},
              {"n_steps_surface_s", c.n_steps_surface_s},
              {"n_quad_t", c.n_quad_t},
              {"retraction", c.retraction}};
}

Json vec_json(const Vec& v) {
  Json out = Json::array();
  for (int k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

Vec unit_direction(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Vec v(n);
  for (int k = 0; k < n; ++k) v(k) = nd(rng);
  return v / v.norm();
}

Vec basis_vector(int n, int i) {
  Vec e = Vec::Zero(n);
  e(i) = 1.0;
  return e;
}

// Gauss-Legendre rule on [0, 1] applied to f.
template <class F>
Mat gl_integral(int nodes, int rows, F&& f) {
  std::vector<double> x, w;
  gauss_legendre(nodes, x, w);
  Mat acc = mat::zero(rows);
  for (std::size_t k = 0; k < x.size(); ++k) acc += w[k] * f(x[k]);
  return acc;
}

double observed_order(const std::vector<double>& errors) {
  double order = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) order = std::min(order, std::log2(errors[k] / errors[k + 1]));
  return order;
}

Json cmd_holonomy(const ExperimentConfig& cfg, Tolerances& tol) {
  const CrossedModule cm = cfg.crossed_module();
  const OneForm a = cfg.A(cm);
  const IntegratorConfig ic = cfg.integrator();
  const Path p = cfg.has("/loop") ? loop_to_path(cfg.loop("/loop"), cfg.profile("/profile")) : cfg.path("/path");
  const Mat u = path_transport_matrix(a, p, ic);
  const double residual = mat::group_residual(cm.G(), u);
  Json r;
  r["holonomy"] = matrix_json(u);
  r["group_residual"] = residual;
  r["pass"] = residual <= tol("group_residual", 1e-8);
  return r;
}

Json cmd_surface(const ExperimentConfig& cfg, Tolerances& tol) {
  const ConnectionPair pair = cfg.pair();
  const SurfaceTransportResult s = surface_transport(pair, cfg.bigon("/bigon"), cfg.integrator());
  const double id_err = (s.k.matrix() - mat::identity(pair.cm().H().n)).norm();
  Json r;
  r["k"] = matrix_json(s.k.matrix());
  r["g_source"] = matrix_json(s.g_source.matrix());
  r["g_target"] = matrix_json(s.g_target.matrix());
  r["matching_residual"] = s.matching_residual;
  r["h_identity_error"] = id_err;
  bool pass = s.matching_residual <= tol("matching", 1e-6);
  if (cfg.boolean("/expect_identity", false)) pass = pass && id_err <= tol("identity", 1e-12);
  r["pass"] = pass;
  return r;
}

Json cmd_check_cm(const ExperimentConfig& cfg, Tolerances& tol) {
  const CrossedModule cm = cfg.crossed_module();
  const int n = cfg.integer("/check/samples", 200, 1, 1 << 20);
  const int q = cfg.integer("/check/quadruples", 100, 1, 1 << 20);
  const double ta = tol("axioms", 1e-9), ti = tol("interchange", 1e-9);
  const AxiomReport ax = verify_axioms(cm, n, ta, cfg.seed());
  const double inter = interchange_residual(cm, q, cfg.seed());
  Json r;
  r["residuals"] = Json::object();
  for (const auto& [k, v] : ax.residuals) r["residuals"][k] = v;
  r["max_residual"] = ax.max_residual();
  r["interchange_residual"] = inter;
  r["samples"] = n;
  r["quadruples"] = q;
  r["pass"] = ax.pass && inter <= ti;
  return r;
}

Json cmd_check_fc(const ExperimentConfig& cfg, Tolerances& tol) {
  const CrossedModule cm = cfg.crossed_module();
  const OneForm a = cfg.A(cm);
  const TwoForm b = cfg.B(cm);
  const SampleSpec spec = cfg.samples("/samples", 256);
  const std::string expect = cfg.string("/expect", std::string("accept"));
  const double t = tol("fake_curvature", 1e-5);
  const FakeCurvatureReport fc = fake_curvature_residual(cm, a, b, spec);
  Json r;
  r["max_residual"] = fc.max_residual;
  r["argmax"] = vec_json(fc.argmax);
  r["n_points"] = fc.n_points;
  bool accepted = true;
  double thrown_residual = 0.0;
  try {
    ConnectionPair(cm, a, b, t, spec);
  } catch (const FakeCurvatureError& e) {
    accepted = false;
    thrown_residual = e.residual();
  }
  r["accepted"] = accepted;
  if (expect == "accept") {
    r["pass"] = accepted && fc.max_residual <= t;
  } else if (expect == "reject") {
    r["rejected_residual"] = thrown_residual;
    r["pass"] = !accepted && thrown_residual >= tol("reject_min", 0.05);
  } else {
    throw ConfigError("expect must be \"accept\" or \"reject\"", "/expect");
  }
  return r;
}

Json cmd_roundtrip(const ExperimentConfig& cfg, Tolerances& tol) {
  const ConnectionPair pair = cfg.pair();
  const IntegratorConfig ic = cfg.integrator();
  const FdConfig fd = cfg.fd();
  const SampleSpec spec = cfg.samples("/samples", 32);
  const int n = cfg.ambient_dim();
  std::mt19937_64 rng(spec.seed);
  const std::vector<Vec> pts = spec.points();
  Json r;
  bool pass = true;
  if (cfg.boolean("/one_form", true)) {
    const PathFunctor f = [&](const Path& p) { return path_transport_matrix(pair.A(), p, ic); };
    double worst = 0.0;
    for (const Vec& x : pts) {
      const Vec v = unit_direction(rng, n);
      const Mat got = extract_one_form(f, pair.cm().G(), x, v, fd);
      worst = std::max(worst, (got - pair.A()(x, v)).norm());
    }
    r["one_form_error"] = worst;
    r["one_form_samples"] = pts.size();
    pass = pass && worst <= tol("one_form", 5e-5);
  }
  if (cfg.boolean("/two_form", !pair.B().is_zero())) {
    if (n < 2) throw ConfigError("two-form extraction needs ambient_dim >= 2", "/two_form");
    const int m = std::min<int>(cfg.integer("/two_form_samples", 16, 1, 1 << 16), static_cast<int>(pts.size()));
    const TwoFunctor f = two_functor(pair, ic);
    double worst = 0.0;
    for (int k = 0; k < m; ++k) {
      const Vec& x = pts[static_cast<std::size_t>(k)];
      const Vec v1 = unit_direction(rng, n), v2 = unit_direction(rng, n);
      const Mat got = extract_two_form(f, pair.cm().H(), x, v1, v2, fd);
      worst = std::max(worst, (got - pair.B()(x, v1, v2)).norm());
    }
    r["two_form_error"] = worst;
    r["two_form_samples"] = m;
    pass = pass && worst <= tol("two_form", 1e-4);
  }
  r["pass"] = pass;
  return r;
}

Json cmd_stokes(const ExperimentConfig& cfg, Tolerances& tol) {
  const CrossedModule cm = cfg.crossed_module();
  const OneForm a = cfg.A(cm);
  const Bigon sigma = cfg.bigon("/bigon");
  const IntegratorConfig ic = cfg.integrator();
  const StokesReport s = stokes_check(a, sigma, ic);
  Json r;
  r["lhs"] = matrix_json(s.lhs);
  r["rhs"] = matrix_json(s.rhs);
  r["error"] = s.error;
  bool pass = s.error <= tol("error", 1e-5);
  const int levels = cfg.integer("/convergence/levels", 0, 0, 8);
  if (levels > 0) {
    const int base = cfg.integer("/convergence/base_steps", 8, 8, 1 << 16);
    std::vector<double> errors;
    Json steps = Json::array();
    for (int k = 0; k < levels; ++k) {
      IntegratorConfig c = ic;
      c.n_steps_path = c.n_steps_surface_s = c.n_quad_t = base << k;
      errors.push_back(stokes_check(a, sigma, c).error);
      steps.push_back(base << k);
    }
    const double order = observed_order(errors);
    r["convergence"] = Json{{"steps", steps}, {"errors", errors}, {"order", order}};
    pass = pass && order >= tol("order", 2.0);
  }
  if (cfg.boolean("/abelian_reference", false)) {
    if (!cm.G().abelian()) throw ConfigError("the abelian reference needs an abelian group", "/abelian_reference");
    const int nodes = cfg.integer("/reference_nodes", 48, 2, 512);
    const int rows = cm.G().n;
    const Mat flux = gl_integral(nodes, rows, [&](double s) {
      return gl_integral(nodes, rows, [&](double t) {
        return curvature_two_form(a, sigma(s, t), sigma.d_s(s, t), sigma.d_t(s, t));
      });
    });
    const Mat ref = mat::expm(Mat(-flux));
    const double err = (s.rhs - ref).norm();
    r["reference"] = matrix_json(ref);
    r["reference_error"] = err;
    pass = pass && err <= tol("reference", 1e-7);
  }
  r["pass"] = pass;
  return r;
}

Json cmd_bf(const ExperimentConfig& cfg, Tolerances& tol) {
  const CrossedModule cm = cfg.crossed_module();
  if (cfg.ambient_dim() != 4) throw ConfigError("the bf command needs ambient_dim 4", "/ambient_dim");
  const OneForm a = cfg.A(cm);
  const TwoForm b = cfg.B(cm);
  const GridSpec grid{cfg.integer("/bf/grid", 12, 2, 64)};
  const PairingSpec pairing = PairingSpec::for_group(cm.G());
  const BfAction act = action_decomposition(cm, a, b, pairing, grid);
  Json r;
  r["S"] = act.S;
  r["yang_mills"] = act.yang_mills;
  r["bf_term"] = act.bf_term;
  r["cosmological"] = act.cosmological;
  r["quadrature_error"] = act.quadrature_error;
  r["beta_sup"] = act.beta_sup;
  r["grid"] = grid.n;
  const std::string expect = cfg.string("/bf/expect", std::string("critical"));
  const int dirs = cfg.integer("/bf/directions", 8, 0, 1024);
  bool pass = true;
  if (dirs > 0) {
    const double eps = cfg.number("/bf/epsilon", 1e-3);
    const CriticalityReport c = criticality_check(cm, a, b, pairing, grid, dirs, eps, cfg.seed());
    r["derivatives"] = c.derivatives;
    r["max_derivative"] = c.max_derivative;
    r["epsilon"] = c.epsilon;
    if (expect == "critical") {
      pass = std::abs(act.S) <= tol("action", 1e-5) && c.max_derivative <= tol("derivative", 1e-4);
    } else if (expect == "noncritical") {
      pass = c.max_derivative >= tol("noncritical_min", 1e-2);
    } else if (expect != "none") {
      throw ConfigError("expect must be \"critical\", \"noncritical\" or \"none\"", "/bf/expect");
    }
  } else if (expect == "critical") {
    pass = std::abs(act.S) <= tol("action", 1e-5);
  }
  r["pass"] = pass;
  return r;
}

Json cmd_transgress(const ExperimentConfig& cfg, Tolerances& tol) {
  const ConnectionPair pair = cfg.pair();
  const CrossedModule& cm = pair.cm();
  const IntegratorConfig ic = cfg.integrator();
  Json r;
  bool pass = true;
  if (cfg.has("/loop_path")) {
    const LoopPath gamma = cfg.loop_path("/loop_path");
    const TransgressionReport t = transgression_consistency(pair, gamma, ic);
    r["defect"] = t.defect;
    r["matching_residual"] = t.matching_residual;
    r["functor_g"] = matrix_json(t.functor_g);
    r["functor_h"] = matrix_json(t.functor_h);
    r["forms_g"] = matrix_json(t.forms_g);
    r["forms_h"] = matrix_json(t.forms_h);
    pass = t.defect <= tol("defect", 1e-4) && t.matching_residual <= tol("matching", 1e-6);
    const int levels = cfg.integer("/convergence/levels", 0, 0, 6);
    if (levels > 0) {
      const double base = cfg.number("/convergence/base_scale", 0.125);
      std::vector<double> defects;
      for (int k = 0; k < levels; ++k) {
        defects.push_back(transgression_consistency(pair, gamma, ic.scaled(base * std::ldexp(1.0, k))).defect);
      }
      const double order = observed_order(defects);
      r["convergence"] = Json{{"base_scale", base}, {"defects", defects}, {"order", order}};
      pass = pass && order >= tol("order", 2.0);
    }
  }
  if (cfg.has("/loops")) {
    const bool abelian = cm.kind() == CrossedModuleKind::BAbelian;
    const int nodes = cfg.integer("/reference_nodes", 64, 2, 512);
    Json out = Json::array();
    for (std::size_t k = 0; k < cfg.length("/loops"); ++k) {
      const std::string p = "/loops/" + std::to_string(k);
      const Loop tau = cfg.loop(p + "/loop");
      const Loop var = cfg.loop(p + "/variation");
      const LoopVariation dtau = [var](double z) { return var(z); };
      const Mat phi = transgressed_phi(pair, tau, dtau, ic);
      Json e;
      e["holonomy"] = matrix_json(loop_holonomy(pair, tau, ic).matrix());
      e["A_F"] = matrix_json(transgressed_A(pair, tau, dtau));
      e["phi_F"] = matrix_json(phi);
      if (abelian) {
        const Mat direct =
            gl_integral(nodes, cm.H().n, [&](double z) { return pair.B()(tau(z), tau.velocity(z), dtau(z)); });
        const double err = (phi - direct).norm();
        e["direct"] = matrix_json(direct);
        e["phi_error"] = err;
        pass = pass && err <= tol("phi_quadrature", 1e-6);
      }
      out.push_back(e);
    }
    r["loops"] = out;
  }
  r["pass"] = pass;
  return r;
}

Json cmd_functoriality(const ExperimentConfig& cfg, Tolerances& tol) {
  const ConnectionPair pair = cfg.pair();
  const CrossedModule& cm = pair.cm();
  const IntegratorConfig ic = cfg.integrator();
  const int n = cfg.ambient_dim();
  const SmoothingProfile beta = cfg.profile("/functoriality/profile");
  const SmoothingProfile alt = cfg.has("/functoriality/alt_profile")
                                   ? cfg.profile("/functoriality/alt_profile")
                                   : SmoothingProfile(0.15, SmoothingProfile::Kernel::ExpSquared);
  std::vector<std::pair<Reparam, Reparam>> reparams;
  if (cfg.has("/functoriality/reparams")) {
    for (std::size_t k = 0; k < cfg.length("/functoriality/reparams"); ++k) {
      const std::string p = "/functoriality/reparams/" + std::to_string(k);
      reparams.emplace_back(cfg.reparam(p + "/0"), cfg.reparam(p + "/1"));
    }
  } else {
    reparams = {{Reparam::smoothstep(), Reparam::identity()},
                {Reparam::identity(), Reparam::wobble(0.5)},
                {Reparam::wobble(0.3), Reparam::smoothstep()}};
  }

  double vertical = 0.0, horizontal = 0.0, identity = 0.0, matching = 0.0, reparam = 0.0, profile = 0.0;
  auto transport = [&](const Bigon& b) {
    const SurfaceTransportResult s = surface_transport(pair, b, ic);
    matching = std::max(matching, s.matching_residual);
    return make_two_morphism(cm, s.g_source.matrix(), s.k.matrix());
  };
  const std::size_t n_cases = cfg.length("/functoriality/cases");
  for (std::size_t k = 0; k < n_cases; ++k) {
    const std::string p = "/functoriality/cases/" + std::to_string(k);
    const Vec x0 = cfg.vector(p + "/from", n), x1 = cfg.vector(p + "/mid", n), x2 = cfg.vector(p + "/to", n);
    const Vec w = cfg.vector(p + "/direction", n);
    const double l0 = cfg.number(p + "/lambda/0"), l1 = cfg.number(p + "/lambda/1"), l2 = cfg.number(p + "/lambda/2");

    // Vertical: two stacked sweeps from x0 to x2.
    const Bigon s1 = bulge_bigon(x0, x2, w, l0, l1, beta), s2 = bulge_bigon(x0, x2, w, l1, l2, beta);
    const TwoMorphismValue v1 = transport(s1), v2 = transport(s2);
    const TwoMorphismValue stacked = transport(bigon_vcompose(s1, s2));
    const TwoMorphismValue law = vcompose(cm, v2, v1);
    vertical = std::max(vertical, (stacked.h_part.matrix() - law.h_part.matrix()).norm());

    // Horizontal: x0 -> x1 then x1 -> x2.
    const Bigon h1 = bulge_bigon(x0, x1, w, l0, l1, beta), h2 = bulge_bigon(x1, x2, w, l0, l1, beta);
    const TwoMorphismValue a1 = transport(h1), a2 = transport(h2);
    const TwoMorphismValue side = transport(bigon_hcompose(h1, h2));
    const TwoMorphismValue hlaw = hcompose(cm, a2, a1);
    horizontal = std::max(horizontal, (side.h_part.matrix() - hlaw.h_part.matrix()).norm());

    const TwoMorphismValue id = transport(Bigon::identity(bulge_path(x0, x2, w, l0, beta)));
    identity = std::max(identity, (id.h_part.matrix() - mat::identity(cm.H().n)).norm());

    for (const auto& [rs, rt] : reparams) {
      const TwoMorphismValue rv = transport(bigon_reparameterize(s1, rs, rt));
      reparam = std::max(reparam, (rv.h_part.matrix() - v1.h_part.matrix()).norm());
    }
    const TwoMorphismValue swapped = transport(bulge_bigon(x0, x2, w, l0, l1, alt));
    profile = std::max(profile, (swapped.h_part.matrix() - v1.h_part.matrix()).norm());
  }
  Json r;
  r["cases"] = n_cases;
  r["reparams"] = reparams.size();
  r["vertical_residual"] = vertical;
  r["horizontal_residual"] = horizontal;
  r["identity_residual"] = identity;
  r["matching_residual"] = matching;
  r["reparam_residual"] = reparam;
  r["profile_residual"] = profile;
  r["pass_laws"] = vertical <= tol("vertical", 1e-6) && horizontal <= tol("horizontal", 1e-6) &&
                   identity <= tol("identity", 1e-8) && matching <= tol("matching", 1e-6);
  r["pass_invariance"] = reparam <= tol("reparam", 1e-6) && profile <= tol("profile", 1e-6);
  r["pass"] = r["pass_laws"].get<bool>() && r["pass_invariance"].get<bool>();
  return r;
}

// phi read back from the transport of the transformation, one component per
// coordinate direction.
OneForm extracted_phi(const CrossedModule& cm, const OneForm& phi, const OneForm& a_prime, const IntegratorConfig& ic,
                      const FdConfig& fd) {
  const int n = phi.ambient_dim();
  std::vector<MatrixField> comps;
  for (int i = 0; i < n; ++i) {
    const Vec e = basis_vector(n, i);
    comps.push_back(MatrixField::native(cm.H().n, n, [cm, phi, a_prime, ic, fd, e](const Vec& x) {
      const PathFunctor h = [&](const Path& p) { return transformation_h(cm, phi, a_prime, p, ic); };
      return extract_one_form(h, cm.H(), x, e, fd);
    }));
  }
  return OneForm(cm.H(), comps);
}

OneForm shifted(const OneForm& f, const Mat& delta) {
  std::vector<MatrixField> comps;
  const int n = f.ambient_dim();
  for (int i = 0; i < n; ++i) {
    const MatrixField c = f.component(i);
    if (i == 0) {
      comps.push_back(MatrixField::native(c.rows(), n, [c, delta](const Vec& x) { return Mat(c(x) + delta); }));
    } else {
      comps.push_back(c);
    }
  }
  return OneForm(f.descriptor(), comps);
}

Json cmd_morphism(const ExperimentConfig& cfg, Tolerances& tol) {
  const ConnectionPair pair = cfg.pair();
  const CrossedModule& cm = pair.cm();
  const IntegratorConfig ic = cfg.integrator();
  const FdConfig fd = cfg.fd();
  const MatrixField g = cfg.matrix_field("/morphism/g", cm.G().n);
  const OneForm phi = cfg.one_form("/morphism/phi", cm.H());
  const MatrixField a = cfg.matrix_field("/morphism/a", cm.H().n);
  const Mat delta = cfg.matrix_field("/morphism/perturbation", cm.H().n)(Vec::Zero(cfg.ambient_dim()));
  SampleSpec spec = cfg.samples("/samples", 8);
  if (!cfg.has("/samples/fd_step")) spec.fd_step = 1e-3;

  const Z2Morphism z{g, phi};
  const auto [a_prime, b_prime] = transform_pair(cm, z, pair.A(), pair.B());
  const Z2Morphism z2 = modify_transformation(cm, a, z, a_prime);

  double matching = 0.0, whisker = 0.0;
  for (std::size_t k = 0; k < cfg.length("/morphism/paths"); ++k) {
    const Path p = cfg.path("/morphism/paths/" + std::to_string(k));
    matching = std::max(matching, transformation_transport(cm, g, phi, pair.A(), a_prime, p, ic).matching_residual);
    matching = std::max(matching, transformation_transport(cm, z2.g, z2.phi, pair.A(), a_prime, p, ic).matching_residual);
    whisker = std::max(whisker, modification_whisker(cm, a, a_prime, phi, z2.phi, p, ic));
  }

  const OneForm phi_rt = extracted_phi(cm, phi, a_prime, ic, fd);
  const OneForm phi2_rt = extracted_phi(cm, z2.phi, a_prime, ic, fd);
  const Prop2Residual p2 = residual_prop2(cm, g, phi_rt, pair.A(), pair.B(), a_prime, b_prime, spec);
  const Prop3Residual p3 = residual_prop3(cm, a, g, phi_rt, z2.g, phi2_rt, a_prime, spec);
  const Prop2Residual p2_bad =
      residual_prop2(cm, g, shifted(phi_rt, delta), pair.A(), pair.B(), a_prime, b_prime, spec);
  const Prop3Residual p3_bad = residual_prop3(cm, a, g, phi_rt, z2.g, shifted(phi2_rt, delta), a_prime, spec);

  Json r;
  r["matching_residual"] = matching;
  r["whisker_residual"] = whisker;
  r["prop2"] = Json{{"one_form", p2.one_form}, {"two_form", p2.two_form}};
  r["prop3"] = Json{{"group", p3.group}, {"one_form", p3.one_form}};
  r["prop2_perturbed"] = Json{{"one_form", p2_bad.one_form}, {"two_form", p2_bad.two_form}};
  r["prop3_perturbed"] = Json{{"group", p3_bad.group}, {"one_form", p3_bad.one_form}};
  const double t_match = tol("matching", 1e-6), t_res = tol("residual", 1e-4), t_bad = tol("perturbed_min", 5e-2);
  r["pass_transport"] = matching <= t_match && whisker <= t_match;
  r["pass_roundtrip"] = p2.max() <= t_res && p3.max() <= t_res;
  r["pass_counterexample"] = p2_bad.max() >= t_bad && p3_bad.max() >= t_bad;
  r["pass"] = r["pass_transport"].get<bool>() && r["pass_roundtrip"].get<bool>() &&
              r["pass_counterexample"].get<bool>();
  return r;
}

void write_value(std::ostringstream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(k).dump() << ": ";
        write_value(os, v, indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        os << "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) os << ", ";
          write_value(os, j[k], indent);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) os << ",\n";
        os << pad;
        write_value(os, j[k], indent + 2);
      }
      os << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf;
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

Json matrix_json(const Mat& m) {
  Json re = Json::array(), im = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json rr = Json::array(), ri = Json::array();
    for (int j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return Json{{"re", re}, {"im", im}};
}

Json run_command(const ExperimentConfig& cfg) {
  Tolerances tol(cfg);
  const std::string& c = cfg.command();
  Json r;
  try {
    if (c == "holonomy") r = cmd_holonomy(cfg, tol);
    else if (c == "surface") r = cmd_surface(cfg, tol);
    else if (c == "check-cm") r = cmd_check_cm(cfg, tol);
    else if (c == "check-fc") r = cmd_check_fc(cfg, tol);
    else if (c == "roundtrip") r = cmd_roundtrip(cfg, tol);
    else if (c == "stokes") r = cmd_stokes(cfg, tol);
    else if (c == "bf") r = cmd_bf(cfg, tol);
    else if (c == "transgress") r = cmd_transgress(cfg, tol);
    else if (c == "functoriality") r = cmd_functoriality(cfg, tol);
    else if (c == "morphism") r = cmd_morphism(cfg, tol);
  } catch (const ConfigError&) {
    throw;
  } catch (const TargetMatchingError& e) {
    throw TargetMatchingError(c + ": " + e.what(), e.residual());
  } catch (const FakeCurvatureError& e) {
    throw FakeCurvatureError(c + ": " + e.what(), e.residual());
  } catch (const NumericalError& e) {
    throw NumericalError(c + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(c + ": " + e.what());
  }
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, cfg.hash());
  r["command"] = c;
  r["version"] = kVersion;
  r["config_hash"] = hash;
  r["seed"] = cfg.seed();
  r["tolerances"] = tol.used();
  r["integrator"] = integrator_json(cfg.integrator());
  const FdConfig fd = cfg.fd();
  r["fd"] = Json{{"step", fd.step}, {"richardson", fd.richardson}};
  return r;
}

bool all_pass(const Json& report) {
  if (report.is_object()) {
    for (const auto& [k, v] : report.items()) {
      if (k.rfind("pass", 0) == 0 && v.is_boolean() && !v.get<bool>()) return false;
      if (!all_pass(v)) return false;
    }
  } else if (report.is_array()) {
    for (const auto& v : report)
      if (!all_pass(v)) return false;
  }
  return true;
}

std::string dump_report(const Json& report) {
  std::ostringstream os;
  write_value(os, report, 0);
  os << "\n";
  return os.str();
}

}  // namespace hgt
