#include "hgt/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hgt/errors.hpp"

namespace hgt {

struct Expr::Node {
  Kind kind;
  cplx value = 0.0;
  int index = 0;  // variable index, or exponent for Pow
  std::string name;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

constexpr int kMaxStack = 64;

}  // namespace

Expr::Expr() : node_(std::make_shared<Node>(Node{Kind::Const, 0.0, 0, {}, nullptr, nullptr})) {}

Expr::Kind Expr::kind() const { return node_->kind; }

bool Expr::is_zero() const { return node_->kind == Kind::Const && node_->value == cplx(0.0); }

cplx Expr::const_value() const {
  if (node_->kind != Kind::Const) throw DomainError("expression is not constant");
  return node_->value;
}

Expr Expr::constant(cplx c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = c;
  return Expr(n);
}

Expr Expr::variable(int index, std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->index = index;
  n->name = std::move(name);
  return Expr(n);
}

namespace {

bool is_one(const Expr& e) { return e.is_const() && e.const_value() == cplx(1.0); }

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr::constant(a.const_value() + b.const_value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr(std::make_shared<Expr::Node>(Expr::Node{Expr::Kind::Add, 0.0, 0, {}, a.node_, b.node_}));
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr::constant(a.const_value() - b.const_value());
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return Expr(std::make_shared<Expr::Node>(Expr::Node{Expr::Kind::Sub, 0.0, 0, {}, a.node_, b.node_}));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr::constant(a.const_value() * b.const_value());
  if (a.is_zero() || b.is_zero()) return Expr();
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  return Expr(std::make_shared<Expr::Node>(Expr::Node{Expr::Kind::Mul, 0.0, 0, {}, a.node_, b.node_}));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw DomainError("division by the constant 0");
  if (a.is_const() && b.is_const()) return Expr::constant(a.const_value() / b.const_value());
  if (a.is_zero()) return Expr();
  if (is_one(b)) return a;
  return Expr(std::make_shared<Expr::Node>(Expr::Node{Expr::Kind::Div, 0.0, 0, {}, a.node_, b.node_}));
}

Expr operator-(const Expr& a) {
  if (a.is_const()) return Expr::constant(-a.const_value());
  if (a.kind() == Expr::Kind::Neg) return Expr(a.node_->a);
  return Expr(std::make_shared<Expr::Node>(Expr::Node{Expr::Kind::Neg, 0.0, 0, {}, a.node_, nullptr}));
}

Expr pow(const Expr& a, int n) {
  if (n == 0) return Expr::constant(1.0);
  if (n == 1) return a;
  if (a.is_const()) return Expr::constant(std::pow(a.const_value(), n));
  return Expr(std::make_shared<Expr::Node>(Expr::Node{Expr::Kind::Pow, 0.0, n, {}, a.node_, nullptr}));
}

Expr sin(const Expr& a) {
  if (a.is_const()) return Expr::constant(std::sin(a.const_value()));
  return Expr(std::make_shared<Expr::Node>(Expr::Node{Expr::Kind::Sin, 0.0, 0, {}, a.node_, nullptr}));
}

Expr cos(const Expr& a) {
  if (a.is_const()) return Expr::constant(std::cos(a.const_value()));
  return Expr(std::make_shared<Expr::Node>(Expr::Node{Expr::Kind::Cos, 0.0, 0, {}, a.node_, nullptr}));
}

Expr exp(const Expr& a) {
  if (a.is_const()) return Expr::constant(std::exp(a.const_value()));
  return Expr(std::make_shared<Expr::Node>(Expr::Node{Expr::Kind::Exp, 0.0, 0, {}, a.node_, nullptr}));
}

int Expr::max_var() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const: return -1;
    case Kind::Var: return n.index;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: return std::max(Expr(n.a).max_var(), Expr(n.b).max_var());
    default: return Expr(n.a).max_var();
  }
}

Expr Expr::diff(int var) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const: return Expr();
    case Kind::Var: return Expr::constant(n.index == var ? 1.0 : 0.0);
    case Kind::Add: return Expr(n.a).diff(var) + Expr(n.b).diff(var);
    case Kind::Sub: return Expr(n.a).diff(var) - Expr(n.b).diff(var);
    case Kind::Mul: return Expr(n.a).diff(var) * Expr(n.b) + Expr(n.a) * Expr(n.b).diff(var);
    case Kind::Div: return (Expr(n.a).diff(var) * Expr(n.b) - Expr(n.a) * Expr(n.b).diff(var)) / pow(Expr(n.b), 2);
    case Kind::Neg: return -Expr(n.a).diff(var);
    case Kind::Pow:
      return Expr::constant(static_cast<double>(n.index)) * pow(Expr(n.a), n.index - 1) * Expr(n.a).diff(var);
    case Kind::Sin: return cos(Expr(n.a)) * Expr(n.a).diff(var);
    case Kind::Cos: return -(sin(Expr(n.a)) * Expr(n.a).diff(var));
    case Kind::Exp: return *this * Expr(n.a).diff(var);
  }
  return Expr();
}

cplx Expr::eval(const double* vars) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const: return n.value;
    case Kind::Var: return vars[n.index];
    case Kind::Add: return Expr(n.a).eval(vars) + Expr(n.b).eval(vars);
    case Kind::Sub: return Expr(n.a).eval(vars) - Expr(n.b).eval(vars);
    case Kind::Mul: return Expr(n.a).eval(vars) * Expr(n.b).eval(vars);
    case Kind::Div: return Expr(n.a).eval(vars) / Expr(n.b).eval(vars);
    case Kind::Neg: return -Expr(n.a).eval(vars);
    case Kind::Pow: return std::pow(Expr(n.a).eval(vars), n.index);
    case Kind::Sin: return std::sin(Expr(n.a).eval(vars));
    case Kind::Cos: return std::cos(Expr(n.a).eval(vars));
    case Kind::Exp: return std::exp(Expr(n.a).eval(vars));
  }
  return 0.0;
}

std::string Expr::str() const {
  const Node& n = *node_;
  std::ostringstream os;
  os.precision(17);
  switch (n.kind) {
    case Kind::Const:
      if (n.value.imag() == 0.0) {
        os << n.value.real();
      } else if (n.value.real() == 0.0) {
        os << "(" << n.value.imag() << "*i)";
      } else {
        os << "(" << n.value.real() << "+" << n.value.imag() << "*i)";
      }
      break;
    case Kind::Var: os << n.name; break;
    case Kind::Add: os << "(" << Expr(n.a).str() << " + " << Expr(n.b).str() << ")"; break;
    case Kind::Sub: os << "(" << Expr(n.a).str() << " - " << Expr(n.b).str() << ")"; break;
    case Kind::Mul: os << "(" << Expr(n.a).str() << " * " << Expr(n.b).str() << ")"; break;
    case Kind::Div: os << "(" << Expr(n.a).str() << " / " << Expr(n.b).str() << ")"; break;
    case Kind::Neg: os << "(-" << Expr(n.a).str() << ")"; break;
    case Kind::Pow: os << Expr(n.a).str() << "^" << n.index; break;
    case Kind::Sin: os << "sin(" << Expr(n.a).str() << ")"; break;
    case Kind::Cos: os << "cos(" << Expr(n.a).str() << ")"; break;
    case Kind::Exp: os << "exp(" << Expr(n.a).str() << ")"; break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("expression '" + s_ + "' at offset " + std::to_string(pos_) + ": " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = e + term();
      } else if (accept('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        Expr d = unary();
        if (d.is_zero()) fail("division by zero");
        e = e / d;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    bool paren = accept('(');
    bool neg = accept('-');
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be an integer");
    if (pos_ - start > 3) fail("exponent too large");
    int n = std::stoi(s_.substr(start, pos_ - start));
    if (paren && !accept(')')) fail("expected ')'");
    if (neg) return Expr::constant(1.0) / pow(base, n);
    return pow(base, n);
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "sin" || name == "cos" || name == "exp") {
        if (!accept('(')) fail("expected '(' after " + name);
        Expr arg = expr();
        if (!accept(')')) fail("expected ')'");
        if (name == "sin") return sin(arg);
        if (name == "cos") return cos(arg);
        return exp(arg);
      }
      for (size_t k = 0; k < vars_.size(); ++k) {
        if (vars_[k] == name) return Expr::variable(static_cast<int>(k), name);
      }
      if (name == "i") return Expr::constant(cplx(0.0, 1.0));
      if (name == "pi") return Expr::constant(std::numbers::pi);
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += static_cast<size_t>(end - begin);
    return Expr::constant(v);
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  size_t pos_ = 0;
};

}  // namespace

Expr Expr::parse(const std::string& text, const std::vector<std::string>& vars) { return Parser(text, vars).run(); }

// ---------------------------------------------------------------------------
// Program

Program::Program(const Expr& e) {
  emit(*e.node_);
  if (max_depth_ > kMaxStack) throw ConfigError("expression too deeply nested: " + e.str());
  is_const_ = e.is_const();
  if (is_const_) const_value_ = e.const_value();
}

void Program::emit(const Expr::Node& n) {
  auto push = [this](Op op, int arg, int delta) {
    code_.push_back({op, arg});
    depth_ += delta;
    max_depth_ = std::max(max_depth_, depth_);
  };
  using K = Expr::Kind;
  switch (n.kind) {
    case K::Const:
      consts_.push_back(n.value);
      push(Op::Const, static_cast<int>(consts_.size()) - 1, 1);
      return;
    case K::Var: push(Op::Var, n.index, 1); return;
    case K::Add:
    case K::Sub:
    case K::Mul:
    case K::Div: {
      emit(*n.a);
      emit(*n.b);
      const Op op = n.kind == K::Add ? Op::Add : n.kind == K::Sub ? Op::Sub : n.kind == K::Mul ? Op::Mul : Op::Div;
      push(op, 0, -1);
      return;
    }
    case K::Neg: emit(*n.a); push(Op::Neg, 0, 0); return;
    case K::Pow: emit(*n.a); push(Op::Pow, n.index, 0); return;
    case K::Sin: emit(*n.a); push(Op::Sin, 0, 0); return;
    case K::Cos: emit(*n.a); push(Op::Cos, 0, 0); return;
    case K::Exp: emit(*n.a); push(Op::Exp, 0, 0); return;
  }
}

cplx Program::eval(const double* vars) const {
  if (is_const_) return const_value_;
  cplx st[kMaxStack];
  int sp = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::Const: st[sp++] = consts_[static_cast<size_t>(in.arg)]; break;
      case Op::Var: st[sp++] = vars[in.arg]; break;
      case Op::Add: --sp; st[sp - 1] += st[sp]; break;
      case Op::Sub: --sp; st[sp - 1] -= st[sp]; break;
      case Op::Mul: --sp; st[sp - 1] *= st[sp]; break;
      case Op::Div: --sp; st[sp - 1] /= st[sp]; break;
      case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
      case Op::Pow: {
        const cplx b = st[sp - 1];
        cplx r = 1.0;
        for (int k = 0; k < in.arg; ++k) r *= b;
        st[sp - 1] = r;
        break;
      }
      case Op::Sin: st[sp - 1] = std::sin(st[sp - 1]); break;
      case Op::Cos: st[sp - 1] = std::cos(st[sp - 1]); break;
      case Op::Exp: st[sp - 1] = std::exp(st[sp - 1]); break;
    }
  }
  return st[0];
}

// ---------------------------------------------------------------------------
// ExprMatrix

ExprMatrix ExprMatrix::constant(const Mat& m) {
  ExprMatrix r(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < r.rows_; ++i)
    for (int j = 0; j < r.cols_; ++j) r(i, j) = Expr::constant(m(i, j));
  return r;
}

ExprMatrix ExprMatrix::parse(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& vars) {
  const int n = static_cast<int>(rows.size());
  if (n == 0 || n > kMaxMatrixDim) throw ConfigError("matrix must have between 1 and 8 rows");
  ExprMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != n) throw ConfigError("matrix must be square");
    for (int j = 0; j < n; ++j) m(i, j) = Expr::parse(rows[static_cast<size_t>(i)][static_cast<size_t>(j)], vars);
  }
  return m;
}

bool ExprMatrix::is_zero() const {
  for (const Expr& e : e_)
    if (!e.is_zero()) return false;
  return true;
}

int ExprMatrix::max_var() const {
  int m = -1;
  for (const Expr& e : e_) m = std::max(m, e.max_var());
  return m;
}

ExprMatrix ExprMatrix::diff(int var) const {
  ExprMatrix r(rows_, cols_);
  for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k].diff(var);
  return r;
}

Mat ExprMatrix::eval(const double* vars) const {
  Mat r(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j).eval(vars);
  return r;
}

ExprMatrix operator+(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("ExprMatrix sum: shape mismatch");
  ExprMatrix r(a.rows_, a.cols_);
  for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = a.e_[k] + b.e_[k];
  return r;
}

ExprMatrix operator-(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("ExprMatrix difference: shape mismatch");
  ExprMatrix r(a.rows_, a.cols_);
  for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = a.e_[k] - b.e_[k];
  return r;
}

ExprMatrix operator-(const ExprMatrix& a) {
  ExprMatrix r(a.rows_, a.cols_);
  for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = -a.e_[k];
  return r;
}

ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.cols_ != b.rows_) throw DomainError("ExprMatrix product: shape mismatch");
  ExprMatrix r(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < b.cols_; ++j) {
      Expr acc;
      for (int k = 0; k < a.cols_; ++k) acc = acc + a(i, k) * b(k, j);
      r(i, j) = acc;
    }
  }
  return r;
}

ExprMatrix operator*(const Expr& s, const ExprMatrix& a) {
  ExprMatrix r(a.rows_, a.cols_);
  for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = s * a.e_[k];
  return r;
}

ExprMatrix commutator(const ExprMatrix& a, const ExprMatrix& b) { return a * b - b * a; }

ExprMatrix unimodular_inverse_2x2(const ExprMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw DomainError("unimodular_inverse_2x2: matrix is not 2x2");
  ExprMatrix r(2, 2);
  r(0, 0) = m(1, 1);
  r(0, 1) = -m(0, 1);
  r(1, 0) = -m(1, 0);
  r(1, 1) = m(0, 0);
  return r;
}

// ---------------------------------------------------------------------------
// CompiledMatrix

CompiledMatrix::CompiledMatrix(const ExprMatrix& m) : rows_(m.rows()), cols_(m.cols()) {
  base_ = Mat::Zero(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      if (m(i, j).is_const()) {
        base_(i, j) = m(i, j).const_value();
      } else {
        live_.push_back({i, j, Program(m(i, j))});
      }
    }
  }
}

Mat CompiledMatrix::eval(const double* vars) const {
  Mat r = base_;
  for (const Entry& e : live_) r(e.r, e.c) = e.p.eval(vars);
  return r;
}

}  // namespace hgt
