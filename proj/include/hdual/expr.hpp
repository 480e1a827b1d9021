#pragma once

// Symbolic expressions over the phase-space variables q and p.
//
// Expressions are immutable trees with shared subtrees. They evaluate over
// DualComplex, so evaluating at an eps-shifted point q0 + a*eps returns
// f(q0) + a*f'(q0)*eps. The only simplifications are constant folding and
// the rewrites 0*f -> 0, 1*f -> f, f + 0 -> f; equality is decided by
// sampling (see expr_approx_eq).

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hdual/algebra.hpp"

namespace hdual {

enum class Var { q, p };

struct Env {
  DualComplex q;
  DualComplex p;
};

enum class ExprKind { constant, variable, add, mul, neg, pow, exp, sin, cos };

class Expr {
 public:
  Expr();  // the constant 0
  Expr(DualComplex c);  // NOLINT: constants embed implicitly
  Expr(double c);       // NOLINT
  Expr(int c);          // NOLINT

  static Expr constant(DualComplex c) { return Expr(c); }
  static Expr variable(Var v);
  static Expr q() { return variable(Var::q); }
  static Expr p() { return variable(Var::p); }

  ExprKind kind() const;
  std::optional<DualComplex> as_constant() const;
  /// True only for the structural constant 0.
  bool is_zero() const;
  bool is_one() const;

  // Accessors for tree walkers. Operands are valid only for the matching kind.
  Var variable_name() const;
  const Expr& lhs() const;
  const Expr& rhs() const;
  const Expr& operand() const;
  unsigned exponent() const;

  /// Identity of the underlying node; equal ids mean the same shared subtree.
  const void* identity() const { return node_.get(); }

  std::size_t node_count() const;
  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr pow(const Expr& base, unsigned n);
  friend Expr exp(const Expr& a);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);

  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<const Node> node_;
};

Expr& operator+=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

DualComplex eval(const Expr& f, const Env& env);
/// Exact symbolic partial derivative.
Expr diff(const Expr& f, Var v);
/// Simultaneous substitution q -> q_new, p -> p_new.
Expr substitute(const Expr& f, const Expr& q_new, const Expr& p_new);

/// Largest componentwise |f - g| over the points.
double max_residual(const Expr& f, const Expr& g, std::span<const Env> points);
/// Largest componentwise |f| over the points.
double max_magnitude(const Expr& f, std::span<const Env> points);
bool expr_approx_eq(const Expr& f, const Expr& g, std::span<const Env> points, double tol);

inline constexpr std::uint64_t kSampleSeed = 0x48316475616cULL;  // "H1dual"

/// n points uniform on [-2, 2]^2 with real coordinates, reproducible for a seed.
std::vector<Env> sample_points(std::size_t n, std::uint64_t seed = kSampleSeed);

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Infix syntax: + - * ^, exp() sin() cos(), variables q p, constant i,
/// decimal literals, parentheses. `^` takes a non-negative integer exponent.
Expr parse_expr(std::string_view text);

}  // namespace hdual
