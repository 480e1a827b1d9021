#pragma once

// Weyl quantization on both sides, the Poisson bracket, and time evolution
// of quadratic observables.
//
// Observables are tracked by their coefficients over {1, q, p, q^2, qp, p^2}
// (in that order). For a quadratic Hamiltonian both the Poisson flow and the
// Heisenberg flow are linear maps on this six-dimensional space and are
// integrated with classical RK4.

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hdual/expr.hpp"
#include "hdual/representation.hpp"

namespace hdual {

class InvalidStep : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operator or polynomial left the quadratic span it is required to stay in.
class ClosureViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Monomial : std::size_t { one = 0, q, p, qq, qp, pp };

struct CoeffState {
  static constexpr std::size_t kSize = 6;
  static constexpr std::array<std::string_view, kSize> kNames{"c_1", "c_q", "c_p", "c_qq", "c_qp", "c_pp"};

  std::array<double, kSize> c{};

  static CoeffState basis(Monomial m);

  double& operator[](Monomial m) { return c[static_cast<std::size_t>(m)]; }
  double operator[](Monomial m) const { return c[static_cast<std::size_t>(m)]; }

  /// c_1 + c_q q + c_p p + c_qq q^2 + c_qp q p + c_pp p^2.
  Expr to_expr() const;
  /// Reads the six coefficients off a real polynomial of degree <= 2.
  /// Throws ClosureViolation if f is not one.
  static CoeffState from_expr(const Expr& f);

  friend bool operator==(const CoeffState&, const CoeffState&) = default;
};

struct QuadHamiltonian {
  CoeffState coeffs;

  Expr to_expr() const { return coeffs.to_expr(); }
  QuadHamiltonian scaled(double factor) const;
};

/// {H, k} = H_p k_q - H_q k_p.
Expr poisson(const Expr& hamiltonian, const Expr& k);

/// H + (eps h / 2)(H_p d_q - H_q d_p).
DiffOp weyl_classical(const RepParams& par, const Expr& hamiltonian);

/// Normalized position and momentum operators Q = (i/2pi) X, P = (i/2pi) Y
/// built from gen_quantum, so their multiplication parts are q and p.
struct QuantumCoordinates {
  DiffOp position;
  DiffOp momentum;
};
QuantumCoordinates quantum_coordinates(const RepParams& par);

using ComplexCoeffs = std::array<std::complex<double>, CoeffState::kSize>;

/// c_1 Id + c_q Q + c_p P + c_qq Q^2 + c_pp P^2 + c_qp (QP + PQ)/2.
DiffOp weyl_quantum_quadratic(const RepParams& par, const QuadHamiltonian& hamiltonian);
DiffOp weyl_quantum_quadratic(const RepParams& par, const ComplexCoeffs& coeffs);

/// The scalar [Q, P], read off the computed commutator of the DiffOps.
/// Throws ClosureViolation if the commutator is not a constant multiple of Id.
std::complex<double> quantum_commutator_scale(const RepParams& par);

/// Coefficients of [H~, k~] in the symmetric basis {Id, Q, P, Q^2, sym QP, P^2}.
/// Throws ClosureViolation if the commutator leaves the span.
ComplexCoeffs quantum_commutator(const RepParams& par, const ComplexCoeffs& hamiltonian, const ComplexCoeffs& k);

struct ClassicalCommutator {
  Expr symbol;                     // multiplication coefficient of [H, k]
  double derivative_residual = 0;  // max |coefficient| of the d_q, d_p, ... terms on the sample points
};

/// The commutator of weyl_classical(H) and weyl_classical(k), split into its
/// multiplication symbol and the size of its derivative part.
ClassicalCommutator classical_commutator(const RepParams& par, const Expr& hamiltonian, const Expr& k,
                                         std::span<const Env> points);

/// Multiplication symbol of [weyl_classical(H), weyl_classical(k)]; equals
/// eps*h*{H, k}. Throws ClosureViolation if the derivative part does not vanish
/// on the standard sample points.
Expr classical_commutator_check(const RepParams& par, const Expr& hamiltonian, const Expr& k);

struct TrajectoryPoint {
  double t = 0.0;
  CoeffState state;
};
using Trajectory = std::vector<TrajectoryPoint>;

using RateMatrix = std::array<std::array<double, CoeffState::kSize>, CoeffState::kSize>;

/// d/dt k = {H, k} as a matrix on coefficient vectors.
RateMatrix classical_rate_matrix(const QuadHamiltonian& hamiltonian);

/// Same flow derived through the eps-commutator: the multiplication symbol of
/// [H, k] divided by eps*h, read coefficient by coefficient.
RateMatrix classical_rate_matrix_from_commutator(const RepParams& par, const QuadHamiltonian& hamiltonian);

enum class TimeConvention { paper, egorov };

TimeConvention parse_time_convention(std::string_view name);
std::string_view to_string(TimeConvention c);

/// The constant c in c dk/dt = [H, k]: i*h for `paper`, [Q,P]/{q,p} for `egorov`.
std::complex<double> evolution_constant(const RepParams& par, TimeConvention convention);

/// Real factor r with paper-convention flow at t equal to egorov flow at r*t.
double paper_time_factor(const RepParams& par);

RateMatrix quantum_rate_matrix(const RepParams& par, const QuadHamiltonian& hamiltonian, TimeConvention convention);

/// RK4 on d/dt c = M c, sampled at 0, dt, 2dt, ..., t_end (last step shortened).
Trajectory integrate_linear(const RateMatrix& rate, const CoeffState& k0, double t_end, double dt);

Trajectory evolve_classical(const QuadHamiltonian& hamiltonian, const CoeffState& k0, double t_end, double dt);

Trajectory evolve_quantum(const RepParams& par, const QuadHamiltonian& hamiltonian, const CoeffState& k0,
                          double t_end, double dt, TimeConvention convention);

/// Largest coefficient difference between two trajectories on the same time grid.
/// Throws std::invalid_argument if the grids differ.
double max_trajectory_difference(const Trajectory& a, const Trajectory& b);

}  // namespace hdual
