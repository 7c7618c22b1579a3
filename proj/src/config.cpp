#include "hgt/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "hgt/errors.hpp"

namespace hgt {

namespace {

template <class F>
auto located(const std::string& pointer, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError& e) {
    if (!e.pointer().empty()) throw;
    throw ConfigError(e.what(), pointer);
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), pointer);
  }
}

std::string join(const std::string& pointer, const std::string& key) { return pointer + "/" + key; }

std::vector<std::vector<std::string>> string_rows(const Json& j, const std::string& pointer) {
  if (!j.is_array() || j.empty()) throw ConfigError("expected a non-empty array of rows", pointer);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rp = join(pointer, std::to_string(r));
    if (!j[r].is_array()) throw ConfigError("expected an array of entries", rp);
    std::vector<std::string> row;
    for (std::size_t c = 0; c < j[r].size(); ++c) {
      const Json& e = j[r][c];
      if (e.is_string()) {
        row.push_back(e.get<std::string>());
      } else if (e.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << e.get<double>();
        row.push_back(os.str());
      } else {
        throw ConfigError("matrix entries must be strings or numbers", join(rp, std::to_string(c)));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// "12" -> (0, 1).
std::pair<int, int> plane_key(std::string key, int n, const std::string& pointer) {
  // "(i,j)" and "ij" name the same component.
  if (key.size() == 5 && key[0] == '(' && key[2] == ',' && key[4] == ')') key = {key[1], key[3]};
  if (key.size() != 2 || key[0] < '1' || key[1] < '1' || key[0] > '8' || key[1] > '8') {
    throw ConfigError("two-form keys are index pairs such as \"12\" or \"(1,2)\"", pointer);
  }
  const int i = key[0] - '1', j = key[1] - '1';
  if (i >= j || j >= n) throw ConfigError("two-form key needs i < j <= ambient_dim", pointer);
  return {i, j};
}

TwoForm sum_forms(const TwoForm& a, const TwoForm& b) {
  const int n = a.ambient_dim();
  TwoForm out(a.descriptor(), n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const MatrixField* x = a.component(i, j);
      const MatrixField* y = b.component(i, j);
      if (!x && !y) continue;
      if (!x || !y) {
        out.set(i, j, x ? *x : *y);
      } else if (x->is_symbolic() && y->is_symbolic()) {
        out.set(i, j, MatrixField::symbolic(x->expr() + y->expr(), n));
      } else {
        const MatrixField fx = *x, fy = *y;
        out.set(i, j, MatrixField::native(fx.rows(), n, [fx, fy](const Vec& p) { return Mat(fx(p) + fy(p)); }));
      }
    }
  }
  return out;
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> c{"holonomy", "surface",   "check-cm",      "check-fc",  "roundtrip",
                                          "stokes",   "bf",        "transgress",    "functoriality", "morphism"};
  return c;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

ExperimentConfig::ExperimentConfig(Json doc) : doc_(std::move(doc)) {
  if (!doc_.is_object()) throw ConfigError("config must be a JSON object", "");
  command_ = string("/command");
  const auto& cmds = known_commands();
  if (std::find(cmds.begin(), cmds.end(), command_) == cmds.end()) {
    throw ConfigError("unknown command '" + command_ + "'", "/command");
  }
  dim_ = integer("/ambient_dim", std::nullopt, 1, kMaxAmbientDim);
  if (has("/seed")) {
    const Json& s = at("/seed");
    if (!s.is_number_unsigned()) throw ConfigError("seed must be a non-negative integer", "/seed");
    seed_ = s.get<std::uint64_t>();
  }
  hash_ = fnv1a(doc_.dump());
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return ExperimentConfig(std::move(j));
}

void ExperimentConfig::override_steps(int n) {
  if (n < 8) throw ConfigError("--steps must be at least 8");
  steps_ = n;
}

const Json& ExperimentConfig::at(const std::string& pointer) const {
  try {
    return doc_.at(Json::json_pointer(pointer));
  } catch (const Json::exception&) {
    throw ConfigError("missing required value", pointer);
  }
}

bool ExperimentConfig::has(const std::string& pointer) const { return doc_.contains(Json::json_pointer(pointer)); }

double ExperimentConfig::number(const std::string& pointer, std::optional<double> fallback) const {
  if (!has(pointer) && fallback) return *fallback;
  const Json& j = at(pointer);
  if (!j.is_number()) throw ConfigError("expected a number", pointer);
  return j.get<double>();
}

int ExperimentConfig::integer(const std::string& pointer, std::optional<int> fallback, int lo, int hi) const {
  if (!has(pointer) && fallback) return *fallback;
  const Json& j = at(pointer);
  if (!j.is_number_integer()) throw ConfigError("expected an integer", pointer);
  const auto v = j.get<long long>();
  if (v < lo || v > hi) {
    throw ConfigError("integer outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]", pointer);
  }
  return static_cast<int>(v);
}

bool ExperimentConfig::boolean(const std::string& pointer, std::optional<bool> fallback) const {
  if (!has(pointer) && fallback) return *fallback;
  const Json& j = at(pointer);
  if (!j.is_boolean()) throw ConfigError("expected a boolean", pointer);
  return j.get<bool>();
}

std::string ExperimentConfig::string(const std::string& pointer, std::optional<std::string> fallback) const {
  if (!has(pointer) && fallback) return *fallback;
  const Json& j = at(pointer);
  if (!j.is_string()) throw ConfigError("expected a string", pointer);
  return j.get<std::string>();
}

std::vector<std::string> ExperimentConfig::strings(const std::string& pointer) const {
  const Json& j = at(pointer);
  if (!j.is_array() || j.empty()) throw ConfigError("expected a non-empty array of strings", pointer);
  std::vector<std::string> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_string()) throw ConfigError("expected a string", join(pointer, std::to_string(k)));
    out.push_back(j[k].get<std::string>());
  }
  return out;
}

std::size_t ExperimentConfig::length(const std::string& pointer) const {
  const Json& j = at(pointer);
  if (!j.is_array()) throw ConfigError("expected an array", pointer);
  return j.size();
}

Vec ExperimentConfig::vector(const std::string& pointer, int dim) const {
  const Json& j = at(pointer);
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw ConfigError("expected an array of " + std::to_string(dim) + " numbers", pointer);
  }
  Vec v(dim);
  for (int k = 0; k < dim; ++k) {
    if (!j[static_cast<std::size_t>(k)].is_number()) throw ConfigError("expected a number", join(pointer, std::to_string(k)));
    v(k) = j[static_cast<std::size_t>(k)].get<double>();
  }
  return v;
}

CrossedModule ExperimentConfig::crossed_module() const {
  const std::string text = string("/crossed_module");
  CrossedModule cm = located("/crossed_module", [&] { return parse_crossed_module(text); });
  if (has("/group")) {
    const std::string g = string("/group");
    if (!(located("/group", [&] { return GroupDescriptor::parse(g); }) == cm.G())) {
      throw ConfigError("group " + g + " is not the G of " + cm.name() + " (" + cm.G().name() + ")", "/group");
    }
  }
  return cm;
}

MatrixField ExperimentConfig::matrix_field(const std::string& pointer, int rows) const {
  const auto r = string_rows(at(pointer), pointer);
  if (static_cast<int>(r.size()) != rows) {
    throw ConfigError("expected a " + std::to_string(rows) + "x" + std::to_string(rows) + " matrix", pointer);
  }
  const std::vector<std::string> vars = coordinate_names(dim_);
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t k = 0; k < r[i].size(); ++k)
      located(join(join(pointer, std::to_string(i)), std::to_string(k)), [&] { return Expr::parse(r[i][k], vars); });
  const MatrixField f = located(pointer, [&] { return MatrixField::parse(r, dim_); });
  if (f.expr().max_var() >= dim_) throw ConfigError("expression uses a coordinate beyond ambient_dim", pointer);
  return f;
}

OneForm ExperimentConfig::one_form(const std::string& pointer, const GroupDescriptor& d) const {
  const Json& j = at(pointer);
  if (!j.is_array() || static_cast<int>(j.size()) != dim_) {
    throw ConfigError("a one-form needs one matrix per coordinate (" + std::to_string(dim_) + ")", pointer);
  }
  std::vector<MatrixField> comps;
  for (int i = 0; i < dim_; ++i) comps.push_back(matrix_field(join(pointer, std::to_string(i)), d.n));
  return located(pointer, [&] { return OneForm(d, comps); });
}

OneForm ExperimentConfig::A(const CrossedModule& cm) const {
  if (has("/A") && has("/A_h")) throw ConfigError("give either A or A_h, not both", "/A_h");
  if (has("/A")) return one_form("/A", cm.G());
  if (has("/A_h")) {
    const OneForm ah = one_form("/A_h", cm.H());
    std::vector<MatrixField> comps;
    for (int i = 0; i < dim_; ++i) {
      const MatrixField c = ah.component(i);
      comps.push_back(MatrixField::native(cm.G().n, dim_, [cm, c](const Vec& x) { return cm.t_star(c(x)); }));
    }
    return OneForm(cm.G(), comps);
  }
  return OneForm::zero(cm.G(), dim_);
}

TwoForm ExperimentConfig::B(const CrossedModule& cm) const {
  if (!has("/B")) return TwoForm::zero(cm.H(), dim_);
  const Json& j = at("/B");
  auto curvature = [&]() -> TwoForm {
    if (has("/A_h")) return curvature_form(one_form("/A_h", cm.H()));
    if (cm.G().n != cm.H().n) throw ConfigError("curvature of A is not H-valued for this crossed module", "/B");
    const OneForm a = A(cm);
    TwoForm k = curvature_form(a);
    TwoForm out(cm.H(), dim_);
    for (int i = 0; i < dim_; ++i)
      for (int jj = i + 1; jj < dim_; ++jj)
        if (const MatrixField* f = k.component(i, jj)) out.set(i, jj, *f);
    return out;
  };
  if (j.is_string()) {
    if (j.get<std::string>() != "curvature") throw ConfigError("the only named two-form is \"curvature\"", "/B");
    return curvature();
  }
  if (!j.is_object()) throw ConfigError("B must be \"curvature\" or an object of components", "/B");
  TwoForm b(cm.H(), dim_);
  bool add_curvature = false;
  for (const auto& [key, value] : j.items()) {
    const std::string p = join("/B", key);
    if (key == "curvature") {
      add_curvature = boolean(p);
      continue;
    }
    const auto [i, jj] = plane_key(key, dim_, p);
    b.set(i, jj, matrix_field(p, cm.H().n));
  }
  return add_curvature ? sum_forms(curvature(), b) : b;
}

ConnectionPair ExperimentConfig::pair() const {
  const CrossedModule cm = crossed_module();
  std::optional<double> tol;
  if (has("/fc_tolerance")) tol = number("/fc_tolerance");
  std::optional<SampleSpec> spec;
  if (has("/samples")) spec = samples("/samples", 256);
  return ConnectionPair(cm, A(cm), B(cm), tol, spec);
}

IntegratorConfig ExperimentConfig::integrator() const {
  IntegratorConfig c;
  c.n_steps_path = integer("/integrator/n_steps_path", c.n_steps_path, 8, 1 << 20);
  c.n_steps_surface_s = integer("/integrator/n_steps_surface_s", c.n_steps_surface_s, 2, 1 << 20);
  c.n_quad_t = integer("/integrator/n_quad_t", c.n_quad_t, 2, 1 << 20);
  c.retraction = boolean("/integrator/retraction", c.retraction);
  if (steps_) {
    c.n_steps_path = c.n_steps_surface_s = *steps_;
    c.n_quad_t = *steps_ + (*steps_ % 2);
  }
  located("/integrator", [&] {
    c.validate();
    return 0;
  });
  return c;
}

FdConfig ExperimentConfig::fd() const {
  FdConfig f;
  f.step = number("/fd/step", f.step);
  f.richardson = boolean("/fd/richardson", f.richardson);
  located("/fd", [&] {
    f.validate();
    return 0;
  });
  return f;
}

double ExperimentConfig::tolerance(const std::string& key, double fallback) const {
  return number(join("/tolerances", key), fallback);
}

SmoothingProfile ExperimentConfig::profile(const std::string& pointer) const {
  if (!has(pointer)) return SmoothingProfile();
  const double eps = number(join(pointer, "epsilon"), 0.1);
  const std::string k = string(join(pointer, "kernel"), std::string("exp"));
  SmoothingProfile::Kernel kernel;
  if (k == "exp") {
    kernel = SmoothingProfile::Kernel::Exp;
  } else if (k == "exp_squared") {
    kernel = SmoothingProfile::Kernel::ExpSquared;
  } else {
    throw ConfigError("kernel must be \"exp\" or \"exp_squared\"", join(pointer, "kernel"));
  }
  return located(pointer, [&] { return SmoothingProfile(eps, kernel); });
}

Reparam ExperimentConfig::reparam(const std::string& pointer) const {
  const Json& j = at(pointer);
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "identity") return Reparam::identity();
    if (s == "smoothstep") return Reparam::smoothstep();
    throw ConfigError("unknown reparameterization '" + s + "'", pointer);
  }
  if (has(join(pointer, "wobble"))) {
    const double a = number(join(pointer, "wobble"));
    return located(pointer, [&] { return Reparam::wobble(a); });
  }
  if (has(join(pointer, "profile"))) return Reparam::from_profile(profile(join(pointer, "profile")));
  throw ConfigError("expected \"identity\", \"smoothstep\", {\"wobble\": a} or {\"profile\": {...}}", pointer);
}

Path ExperimentConfig::path(const std::string& pointer) const {
  Path p = [&]() -> Path {
    if (has(join(pointer, "expressions"))) {
      const auto e = strings(join(pointer, "expressions"));
      return located(join(pointer, "expressions"), [&] { return Path::from_expressions(e); });
    }
    if (has(join(pointer, "line"))) {
      const std::string l = join(pointer, "line");
      return Path::line(vector(join(l, "from"), dim_), vector(join(l, "to"), dim_), profile(join(l, "profile")));
    }
    if (has(join(pointer, "bulge"))) {
      const std::string b = join(pointer, "bulge");
      return bulge_path(vector(join(b, "from"), dim_), vector(join(b, "to"), dim_), vector(join(b, "direction"), dim_),
                        number(join(b, "lambda")), profile(join(b, "profile")));
    }
    throw ConfigError("a path needs \"expressions\", \"line\" or \"bulge\"", pointer);
  }();
  if (p.dim() != dim_) throw ConfigError("path dimension differs from ambient_dim", pointer);
  return p;
}

Bigon ExperimentConfig::bigon(const std::string& pointer) const {
  Bigon b = [&]() -> Bigon {
    if (has(join(pointer, "expressions"))) {
      const auto e = strings(join(pointer, "expressions"));
      return located(join(pointer, "expressions"), [&] { return Bigon::from_expressions(e); });
    }
    if (has(join(pointer, "standard"))) {
      const std::string sp = join(pointer, "standard");
      PlaneMap plane;
      if (has(join(sp, "plane"))) {
        const auto e = strings(join(sp, "plane"));
        plane = located(join(sp, "plane"), [&] { return PlaneMap::from_expressions(e); });
      } else {
        plane = PlaneMap::affine(vector(join(sp, "origin"), dim_), vector(join(sp, "u"), dim_),
                                 vector(join(sp, "v"), dim_));
      }
      return standard_bigon(plane, number(join(sp, "s"), 1.0), number(join(sp, "t"), 1.0), profile(join(sp, "profile")));
    }
    if (has(join(pointer, "bulge"))) {
      const std::string bp = join(pointer, "bulge");
      return bulge_bigon(vector(join(bp, "from"), dim_), vector(join(bp, "to"), dim_),
                         vector(join(bp, "direction"), dim_), number(join(bp, "lambda0")),
                         number(join(bp, "lambda1")), profile(join(bp, "profile")));
    }
    if (has(join(pointer, "identity"))) return Bigon::identity(path(join(pointer, "identity")));
    throw ConfigError("a bigon needs \"expressions\", \"standard\", \"bulge\" or \"identity\"", pointer);
  }();
  if (b.dim() != dim_) throw ConfigError("bigon dimension differs from ambient_dim", pointer);
  return b;
}

Loop ExperimentConfig::loop(const std::string& pointer) const {
  const auto e = strings(pointer);
  Loop l = located(pointer, [&] { return Loop::from_expressions(e); });
  if (l.dim() != dim_) throw ConfigError("loop dimension differs from ambient_dim", pointer);
  return l;
}

LoopPath ExperimentConfig::loop_path(const std::string& pointer) const {
  const auto e = strings(pointer);
  LoopPath l = located(pointer, [&] { return LoopPath::from_expressions(e); });
  if (l.dim() != dim_) throw ConfigError("loop path dimension differs from ambient_dim", pointer);
  return l;
}

SampleSpec ExperimentConfig::samples(const std::string& pointer, int default_points) const {
  SampleSpec s = SampleSpec::unit_box(dim_, default_points, seed_);
  s.n_points = integer(join(pointer, "n_points"), default_points, 1, 1 << 16);
  if (has(join(pointer, "seed"))) s.seed = static_cast<std::uint64_t>(integer(join(pointer, "seed"), std::nullopt, 0));
  if (has(join(pointer, "lo"))) s.lo = vector(join(pointer, "lo"), dim_);
  if (has(join(pointer, "hi"))) s.hi = vector(join(pointer, "hi"), dim_);
  s.fd_step = number(join(pointer, "fd_step"), s.fd_step);
  return s;
}

}  // namespace hgt
