#pragma once

// Two induced representations of H^1 on functions of the phase space (q, p):
//
//   quantum:   f -> exp(sigma*i*h*s - 2*pi*i*(q*x + p*y)) f(q - hbar*y/2, p + hbar*x/2)
//   classical: f -> exp(-2*pi*i*(x*q + y*p)) (f + eps*h*(sigma*s*f + y/(4 pi i) f_q - x/(4 pi i) f_p))
//
// with h = 2*pi*hbar. The central sign sigma of each is fixed by requiring
// rho(g) rho(g') = rho(g * g'); see calibrate_central_sign and CONVENTIONS.md.
//
// Generators and quantized observables are differential operators of order
// at most 2 with Expr coefficients (DiffOp).

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>

#include "hdual/algebra.hpp"
#include "hdual/expr.hpp"
#include "hdual/heisenberg.hpp"

namespace hdual {

class RepParams {
 public:
  /// Throws std::invalid_argument unless hbar is finite and nonzero.
  explicit RepParams(double hbar);

  double hbar() const { return hbar_; }
  double h() const { return h_; }

 private:
  double hbar_;
  double h_;
};

enum class CentralSign { negative = -1, positive = +1 };

inline constexpr double sign_value(CentralSign s) { return s == CentralSign::negative ? -1.0 : 1.0; }

// Values selected by the representation-property calibration.
inline constexpr CentralSign kQuantumCentralSign = CentralSign::negative;
inline constexpr CentralSign kClassicalCentralSign = CentralSign::positive;

enum class Representation { quantum, classical };

Expr rep_quantum(const RepParams& par, const GroupElement& g, const Expr& f,
                 CentralSign sign = kQuantumCentralSign);

Expr rep_classical(const RepParams& par, const GroupElement& g, const Expr& f,
                   CentralSign sign = kClassicalCentralSign);

/// Evaluates the classical representation through eps-shifted arguments,
/// exp(sigma*eps*h*s - 2*pi*i*(q*x + p*y)) f(q - (i*hbar/2)*eps*y, p + (i*hbar/2)*eps*x),
/// at a point whose coordinates have zero eps parts.
DualComplex rep_classical_pointwise(const RepParams& par, const GroupElement& g, const Expr& f,
                                    const Env& env, CentralSign sign = kClassicalCentralSign);

Expr represent(Representation which, const RepParams& par, const GroupElement& g, const Expr& f,
               CentralSign sign);

// ---------------------------------------------------------------------------
// Differential operators

class OrderOverflow : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct DerivativeOrder {
  int dq = 0;
  int dp = 0;

  constexpr int total() const { return dq + dp; }
  friend constexpr auto operator<=>(const DerivativeOrder&, const DerivativeOrder&) = default;
};

/// Sum of coeff(q,p) * d_q^a d_p^b over a + b <= 2.
class DiffOp {
 public:
  static constexpr int kMaxOrder = 2;
  using TermMap = std::map<DerivativeOrder, Expr>;

  DiffOp() = default;

  static DiffOp identity() { return multiplication(Expr(1.0)); }
  static DiffOp multiplication(const Expr& coeff) { return term({0, 0}, coeff); }
  static DiffOp partial(Var v) { return term(v == Var::q ? DerivativeOrder{1, 0} : DerivativeOrder{0, 1}, 1.0); }
  static DiffOp term(DerivativeOrder order, const Expr& coeff);

  /// Adds coeff to the term of the given order. Throws OrderOverflow past kMaxOrder.
  DiffOp& add_term(DerivativeOrder order, const Expr& coeff);

  /// The coefficient of the given order, structural 0 when absent.
  Expr coefficient(DerivativeOrder order) const;
  const TermMap& terms() const { return terms_; }

  /// Highest total order with a nonzero coefficient; 0 for the zero operator.
  int order() const;
  bool is_zero() const { return terms_.empty(); }

  std::string str() const;

  friend DiffOp operator+(const DiffOp& a, const DiffOp& b);
  friend DiffOp operator-(const DiffOp& a);
  friend DiffOp operator-(const DiffOp& a, const DiffOp& b);
  /// Left multiplication by a function.
  friend DiffOp operator*(const Expr& c, const DiffOp& a);

 private:
  TermMap terms_;
};

Expr apply(const DiffOp& op, const Expr& f);

/// A o B via the Leibniz rule. Throws OrderOverflow if order(A) + order(B) > 2.
DiffOp compose(const DiffOp& a, const DiffOp& b);

/// A o B - B o A. The terms where no derivative of A falls on a coefficient
/// of B (and vice versa) cancel pairwise because coefficients commute; they
/// are never formed, so the top-order part vanishes structurally.
DiffOp commutator(const DiffOp& a, const DiffOp& b);

/// Max over all orders present in either operator of the pointwise
/// coefficient difference.
double max_coefficient_residual(const DiffOp& a, const DiffOp& b, std::span<const Env> points);

struct GeneratorPair {
  DiffOp x;
  DiffOp y;
};

/// X = (hbar/2) d_p - 2 pi i q,  Y = -(hbar/2) d_q - 2 pi i p.
GeneratorPair gen_quantum(const RepParams& par);
/// X = -2 pi i q - (eps h / 4 pi i) d_p,  Y = -2 pi i p + (eps h / 4 pi i) d_q.
GeneratorPair gen_classical(const RepParams& par);

// ---------------------------------------------------------------------------
// Central sign calibration

/// Largest pointwise |rho(g) rho(g2) f - rho(g * g2) f| over the points.
double representation_residual(Representation which, const RepParams& par, CentralSign sign,
                               const GroupElement& g, const GroupElement& g2, const Expr& f,
                               std::span<const Env> points);

struct SignCalibration {
  double residual_negative = 0.0;
  double residual_positive = 0.0;
  int passing = 0;  // number of signs whose residual is within tolerance
  CentralSign selected = CentralSign::negative;
};

/// Runs the representation-property test for both central signs over random
/// group pairs (components uniform in [-1, 1]) and selects the one that passes.
SignCalibration calibrate_central_sign(Representation which, const RepParams& par,
                                       std::span<const Expr> functions, std::span<const Env> points,
                                       int pairs, std::uint64_t seed, double tol);

}  // namespace hdual
