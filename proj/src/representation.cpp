#include "hdual/representation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace hdual {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr DualComplex kI = DualComplex::unit_i();
constexpr DualComplex kEps = DualComplex::unit_eps();

/// The constant 1/(4 pi i) = -i/(4 pi).
constexpr DualComplex inv_four_pi_i() { return {0.0, -1.0 / (4.0 * kPi), 0.0, 0.0}; }

/// -2 pi i (q*x + p*y) as an Expr.
Expr oscillating_phase(double x, double y) {
  const DualComplex minus_two_pi_i{0.0, -2.0 * kPi, 0.0, 0.0};
  return Expr(minus_two_pi_i) * (Expr(x) * Expr::q() + Expr(y) * Expr::p());
}

}  // namespace

RepParams::RepParams(double hbar) : hbar_(hbar), h_(2.0 * kPi * hbar) {
  if (!std::isfinite(hbar) || hbar == 0.0) {
    throw std::invalid_argument("hbar must be finite and nonzero");
  }
}

Expr rep_quantum(const RepParams& par, const GroupElement& g, const Expr& f, CentralSign sign) {
  const DualComplex central = DualComplex(sign_value(sign) * par.h() * g.s) * kI;
  const Expr phase = exp(Expr(central) + oscillating_phase(g.x, g.y));
  const Expr q_shift = Expr::q() - Expr(0.5 * par.hbar() * g.y);
  const Expr p_shift = Expr::p() + Expr(0.5 * par.hbar() * g.x);
  return phase * substitute(f, q_shift, p_shift);
}

Expr rep_classical(const RepParams& par, const GroupElement& g, const Expr& f, CentralSign sign) {
  const Expr eps_h(DualComplex(par.h()) * kEps);
  const Expr inner = Expr(sign_value(sign) * g.s) * f +
                     Expr(DualComplex(g.y) * inv_four_pi_i()) * diff(f, Var::q) -
                     Expr(DualComplex(g.x) * inv_four_pi_i()) * diff(f, Var::p);
  return exp(oscillating_phase(g.x, g.y)) * (f + eps_h * inner);
}

DualComplex rep_classical_pointwise(const RepParams& par, const GroupElement& g, const Expr& f,
                                    const Env& env, CentralSign sign) {
  const DualComplex half_i_hbar_eps = DualComplex(0.5 * par.hbar()) * kI * kEps;
  const Env shifted{env.q - half_i_hbar_eps * DualComplex(g.y), env.p + half_i_hbar_eps * DualComplex(g.x)};
  const DualComplex central = DualComplex(sign_value(sign) * par.h() * g.s) * kEps;
  const DualComplex oscillating =
      DualComplex(0.0, -2.0 * kPi, 0.0, 0.0) * (env.q * DualComplex(g.x) + env.p * DualComplex(g.y));
  return exp(central + oscillating) * eval(f, shifted);
}

Expr represent(Representation which, const RepParams& par, const GroupElement& g, const Expr& f,
               CentralSign sign) {
  return which == Representation::quantum ? rep_quantum(par, g, f, sign) : rep_classical(par, g, f, sign);
}

// ---------------------------------------------------------------------------

DiffOp DiffOp::term(DerivativeOrder order, const Expr& coeff) {
  DiffOp op;
  op.add_term(order, coeff);
  return op;
}

DiffOp& DiffOp::add_term(DerivativeOrder order, const Expr& coeff) {
  if (order.dq < 0 || order.dp < 0) throw std::invalid_argument("negative derivative order");
  if (order.total() > kMaxOrder) {
    throw OrderOverflow("differential operator order " + std::to_string(order.total()) +
                        " exceeds the cap of " + std::to_string(kMaxOrder));
  }
  if (coeff.is_zero()) return *this;
  auto it = terms_.find(order);
  if (it == terms_.end()) {
    terms_.emplace(order, coeff);
  } else {
    it->second = it->second + coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
  return *this;
}

Expr DiffOp::coefficient(DerivativeOrder order) const {
  auto it = terms_.find(order);
  return it == terms_.end() ? Expr() : it->second;
}

int DiffOp::order() const {
  int out = 0;
  for (const auto& [ord, coeff] : terms_) out = std::max(out, ord.total());
  return out;
}

std::string DiffOp::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [ord, coeff] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << '[' << coeff.str() << ']';
    for (int k = 0; k < ord.dq; ++k) os << "*d_q";
    for (int k = 0; k < ord.dp; ++k) os << "*d_p";
  }
  return os.str();
}

DiffOp operator+(const DiffOp& a, const DiffOp& b) {
  DiffOp out = a;
  for (const auto& [ord, coeff] : b.terms_) out.add_term(ord, coeff);
  return out;
}

DiffOp operator-(const DiffOp& a) {
  DiffOp out;
  for (const auto& [ord, coeff] : a.terms_) out.add_term(ord, -coeff);
  return out;
}

DiffOp operator-(const DiffOp& a, const DiffOp& b) { return a + (-b); }

DiffOp operator*(const Expr& c, const DiffOp& a) {
  DiffOp out;
  for (const auto& [ord, coeff] : a.terms_) out.add_term(ord, c * coeff);
  return out;
}

namespace {

Expr partial(const Expr& f, int dq, int dp) {
  Expr out = f;
  for (int k = 0; k < dq; ++k) out = diff(out, Var::q);
  for (int k = 0; k < dp; ++k) out = diff(out, Var::p);
  return out;
}

constexpr double binomial(int n, int k) {
  double out = 1.0;
  for (int j = 1; j <= k; ++j) out = out * (n - k + j) / j;
  return out;
}

/// Leibniz expansion of A o B. With include_plain = false the terms where no
/// derivative of A lands on a coefficient of B are skipped.
DiffOp leibniz(const DiffOp& a, const DiffOp& b, bool include_plain) {
  DiffOp out;
  for (const auto& [alpha, a_coeff] : a.terms()) {
    for (const auto& [beta, b_coeff] : b.terms()) {
      for (int gq = 0; gq <= alpha.dq; ++gq) {
        for (int gp = 0; gp <= alpha.dp; ++gp) {
          if (!include_plain && gq == 0 && gp == 0) continue;
          const Expr db = partial(b_coeff, gq, gp);
          if (db.is_zero()) continue;
          const double weight = binomial(alpha.dq, gq) * binomial(alpha.dp, gp);
          const DerivativeOrder result{alpha.dq - gq + beta.dq, alpha.dp - gp + beta.dp};
          out.add_term(result, Expr(weight) * a_coeff * db);
        }
      }
    }
  }
  return out;
}

}  // namespace

Expr apply(const DiffOp& op, const Expr& f) {
  Expr out;
  for (const auto& [ord, coeff] : op.terms()) out += coeff * partial(f, ord.dq, ord.dp);
  return out;
}

DiffOp compose(const DiffOp& a, const DiffOp& b) {
  if (a.order() + b.order() > DiffOp::kMaxOrder) {
    throw OrderOverflow("composition of orders " + std::to_string(a.order()) + " and " +
                        std::to_string(b.order()) + " exceeds the cap of " +
                        std::to_string(DiffOp::kMaxOrder));
  }
  return leibniz(a, b, true);
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) {
  if (a.order() + b.order() > DiffOp::kMaxOrder) {
    throw OrderOverflow("commutator of orders " + std::to_string(a.order()) + " and " +
                        std::to_string(b.order()) + " exceeds the cap of " +
                        std::to_string(DiffOp::kMaxOrder));
  }
  return leibniz(a, b, false) - leibniz(b, a, false);
}

double max_coefficient_residual(const DiffOp& a, const DiffOp& b, std::span<const Env> points) {
  double worst = 0.0;
  auto visit = [&](const DiffOp& from, const DiffOp& other) {
    for (const auto& [ord, coeff] : from.terms()) {
      worst = std::max(worst, max_residual(coeff, other.coefficient(ord), points));
    }
  };
  visit(a, b);
  visit(b, a);
  return worst;
}

GeneratorPair gen_quantum(const RepParams& par) {
  const Expr two_pi_i(DualComplex(0.0, 2.0 * kPi, 0.0, 0.0));
  GeneratorPair gens;
  gens.x = DiffOp::term({0, 1}, 0.5 * par.hbar()) + DiffOp::multiplication(-(two_pi_i * Expr::q()));
  gens.y = DiffOp::term({1, 0}, -0.5 * par.hbar()) + DiffOp::multiplication(-(two_pi_i * Expr::p()));
  return gens;
}

GeneratorPair gen_classical(const RepParams& par) {
  const Expr two_pi_i(DualComplex(0.0, 2.0 * kPi, 0.0, 0.0));
  const DualComplex eps_h_over_four_pi_i = DualComplex(par.h()) * kEps * inv_four_pi_i();
  GeneratorPair gens;
  gens.x = DiffOp::multiplication(-(two_pi_i * Expr::q())) + DiffOp::term({0, 1}, -eps_h_over_four_pi_i);
  gens.y = DiffOp::multiplication(-(two_pi_i * Expr::p())) + DiffOp::term({1, 0}, eps_h_over_four_pi_i);
  return gens;
}

// ---------------------------------------------------------------------------

double representation_residual(Representation which, const RepParams& par, CentralSign sign,
                               const GroupElement& g, const GroupElement& g2, const Expr& f,
                               std::span<const Env> points) {
  const Expr nested = represent(which, par, g, represent(which, par, g2, f, sign), sign);
  const Expr direct = represent(which, par, multiply(g, g2), f, sign);
  return max_residual(nested, direct, points);
}

SignCalibration calibrate_central_sign(Representation which, const RepParams& par,
                                       std::span<const Expr> functions, std::span<const Env> points,
                                       int pairs, std::uint64_t seed, double tol) {
  SignCalibration cal;
  for (CentralSign sign : {CentralSign::negative, CentralSign::positive}) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int k = 0; k < pairs; ++k) {
      const GroupElement g = random_group_element(rng);
      const GroupElement g2 = random_group_element(rng);
      for (const Expr& f : functions) {
        const double r = representation_residual(which, par, sign, g, g2, f, points);
        worst = std::isnan(r) ? r : std::max(worst, r);
      }
    }
    (sign == CentralSign::negative ? cal.residual_negative : cal.residual_positive) = worst;
    if (worst <= tol) {
      ++cal.passing;
      cal.selected = sign;
    }
  }
  return cal;
}

}  // namespace hdual
