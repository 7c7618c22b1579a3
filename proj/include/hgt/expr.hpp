#pragma once

// Scalar expression language used to specify forms, maps and geometry.
//
//   expr    := term { ('+' | '-') term }
//   term    := unary { ('*' | '/') unary }
//   unary   := ('-' | '+') unary | power
//   power   := primary [ '^' ['-'] integer ]
//   primary := number | name | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp
//
// `name` is a declared variable or one of the constants `i` and `pi`.
// Expressions are immutable trees with symbolic differentiation; `Program`
// is the compiled stack-machine form used in hot loops.

#include <memory>
#include <string>
#include <vector>

#include "hgt/lie.hpp"

namespace hgt {

class Expr {
 public:
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp };

  Expr();  // the constant 0
  static Expr constant(cplx c);
  static Expr variable(int index, std::string name);

  /// Parses `text`; `vars[k]` is bound to variable index k.
  static Expr parse(const std::string& text, const std::vector<std::string>& vars);

  Kind kind() const;
  bool is_const() const { return kind() == Kind::Const; }
  bool is_zero() const;
  cplx const_value() const;
  /// Largest variable index referenced, or -1.
  int max_var() const;

  Expr diff(int var) const;
  cplx eval(const double* vars) const;
  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& a, int n);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr exp(const Expr& a);

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  friend class Program;
};

/// Compiled expression.
class Program {
 public:
  Program() = default;
  explicit Program(const Expr& e);
  cplx eval(const double* vars) const;
  bool is_const() const { return is_const_; }
  cplx const_value() const { return const_value_; }

 private:
  enum class Op : unsigned char { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp };
  struct Instr {
    Op op;
    int arg;
  };
  void emit(const Expr::Node& n);
  std::vector<Instr> code_;
  std::vector<cplx> consts_;
  int max_depth_ = 0;
  int depth_ = 0;
  bool is_const_ = true;
  cplx const_value_ = 0.0;
};

/// Dense matrix of expressions.
class ExprMatrix {
 public:
  ExprMatrix() = default;
  ExprMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows * cols)) {}
  static ExprMatrix constant(const Mat& m);
  static ExprMatrix zero(int n) { return ExprMatrix(n, n); }
  /// Parses a square matrix given as rows of entry strings.
  static ExprMatrix parse(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& vars);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Expr& operator()(int r, int c) { return e_[static_cast<size_t>(r * cols_ + c)]; }
  const Expr& operator()(int r, int c) const { return e_[static_cast<size_t>(r * cols_ + c)]; }

  bool is_zero() const;
  int max_var() const;
  ExprMatrix diff(int var) const;
  Mat eval(const double* vars) const;

  friend ExprMatrix operator+(const ExprMatrix& a, const ExprMatrix& b);
  friend ExprMatrix operator-(const ExprMatrix& a, const ExprMatrix& b);
  friend ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b);
  friend ExprMatrix operator*(const Expr& s, const ExprMatrix& a);
  friend ExprMatrix operator-(const ExprMatrix& a);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Expr> e_;
};

ExprMatrix commutator(const ExprMatrix& a, const ExprMatrix& b);
/// Inverse of a 2x2 matrix with unit determinant (the adjugate).
ExprMatrix unimodular_inverse_2x2(const ExprMatrix& m);

/// Compiled ExprMatrix; constant entries are stored, not evaluated.
class CompiledMatrix {
 public:
  CompiledMatrix() = default;
  explicit CompiledMatrix(const ExprMatrix& m);
  Mat eval(const double* vars) const;
  int rows() const { return rows_; }

 private:
  struct Entry {
    int r;
    int c;
    Program p;
  };
  int rows_ = 0;
  int cols_ = 0;
  Mat base_;
  std::vector<Entry> live_;
};

}  // namespace hgt
