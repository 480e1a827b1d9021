#include "hdual/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hdual {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t N = CoeffState::kSize;

// Closure tolerances are relative to the largest coefficient involved.
constexpr double kClosureRelTol = 1e-12;

/// Coefficients of a polynomial of degree <= 2 read off derivatives at the
/// origin. Exact for trees built by CoeffState::to_expr.
std::array<DualComplex, N> taylor_coefficients(const Expr& f) {
  const Env origin{0.0, 0.0};
  const Expr fq = diff(f, Var::q);
  const Expr fp = diff(f, Var::p);
  std::array<DualComplex, N> out;
  out[0] = eval(f, origin);
  out[1] = eval(fq, origin);
  out[2] = eval(fp, origin);
  out[3] = eval(diff(fq, Var::q), origin) * DualComplex(0.5);
  out[4] = eval(diff(fq, Var::p), origin);
  out[5] = eval(diff(fp, Var::p), origin) * DualComplex(0.5);
  return out;
}

Expr polynomial_expr(const std::array<DualComplex, N>& c) {
  const Expr q = Expr::q();
  const Expr p = Expr::p();
  return Expr(c[0]) + Expr(c[1]) * q + Expr(c[2]) * p + Expr(c[3]) * pow(q, 2) + Expr(c[4]) * (q * p) +
         Expr(c[5]) * pow(p, 2);
}

/// Throws ClosureViolation unless f equals its degree-2 Taylor polynomial.
void require_quadratic(const Expr& f, const std::array<DualComplex, N>& coeffs) {
  static const std::vector<Env> points = sample_points(16);
  const double scale = std::max(1.0, max_magnitude(f, points));
  const double r = max_residual(f, polynomial_expr(coeffs), points);
  if (!(r <= 1e-9 * scale)) {
    throw ClosureViolation("expression is not a polynomial of degree <= 2 in q, p (residual " +
                           std::to_string(r) + ")");
  }
}

}  // namespace

CoeffState CoeffState::basis(Monomial m) {
  CoeffState s;
  s[m] = 1.0;
  return s;
}

Expr CoeffState::to_expr() const {
  std::array<DualComplex, N> cc;
  for (std::size_t k = 0; k < N; ++k) cc[k] = c[k];
  return polynomial_expr(cc);
}

CoeffState CoeffState::from_expr(const Expr& f) {
  const auto coeffs = taylor_coefficients(f);
  require_quadratic(f, coeffs);
  CoeffState s;
  for (std::size_t k = 0; k < N; ++k) {
    if (!coeffs[k].is_real()) {
      throw ClosureViolation("observable coefficient " + std::string(kNames[k]) + " is not real: " +
                             to_string(coeffs[k]));
    }
    s.c[k] = coeffs[k].re;
  }
  return s;
}

QuadHamiltonian QuadHamiltonian::scaled(double factor) const {
  QuadHamiltonian out = *this;
  for (double& v : out.coeffs.c) v *= factor;
  return out;
}

Expr poisson(const Expr& hamiltonian, const Expr& k) {
  return diff(hamiltonian, Var::p) * diff(k, Var::q) - diff(hamiltonian, Var::q) * diff(k, Var::p);
}

DiffOp weyl_classical(const RepParams& par, const Expr& hamiltonian) {
  const Expr half_eps_h(DualComplex(0.5 * par.h()) * DualComplex::unit_eps());
  return DiffOp::multiplication(hamiltonian) + DiffOp::term({1, 0}, half_eps_h * diff(hamiltonian, Var::p)) +
         DiffOp::term({0, 1}, -(half_eps_h * diff(hamiltonian, Var::q)));
}

QuantumCoordinates quantum_coordinates(const RepParams& par) {
  const Expr i_over_two_pi(DualComplex(0.0, 1.0 / (2.0 * kPi), 0.0, 0.0));
  const GeneratorPair gens = gen_quantum(par);
  return {i_over_two_pi * gens.x, i_over_two_pi * gens.y};
}

DiffOp weyl_quantum_quadratic(const RepParams& par, const ComplexCoeffs& c) {
  const auto [position, momentum] = quantum_coordinates(par);
  auto scalar = [](std::complex<double> z) { return Expr(DualComplex::from_complex(z)); };
  const DiffOp symmetric_qp = Expr(0.5) * (compose(position, momentum) + compose(momentum, position));
  return scalar(c[0]) * DiffOp::identity() + scalar(c[1]) * position + scalar(c[2]) * momentum +
         scalar(c[3]) * compose(position, position) + scalar(c[4]) * symmetric_qp +
         scalar(c[5]) * compose(momentum, momentum);
}

DiffOp weyl_quantum_quadratic(const RepParams& par, const QuadHamiltonian& hamiltonian) {
  ComplexCoeffs c;
  for (std::size_t k = 0; k < N; ++k) c[k] = hamiltonian.coeffs.c[k];
  return weyl_quantum_quadratic(par, c);
}

std::complex<double> quantum_commutator_scale(const RepParams& par) {
  const auto [position, momentum] = quantum_coordinates(par);
  const DiffOp comm = commutator(position, momentum);
  const auto& terms = comm.terms();
  if (terms.size() != 1 || terms.begin()->first != DerivativeOrder{0, 0}) {
    throw ClosureViolation("[Q, P] is not a multiple of the identity: " + comm.str());
  }
  const auto value = terms.begin()->second.as_constant();
  if (!value || !value->is_complex()) {
    throw ClosureViolation("[Q, P] is not a complex constant: " + comm.str());
  }
  return value->complex_part();
}

namespace {

/// Polynomials in Q, P normal ordered as Q^a P^b, with [Q, P] = kappa.
class OrderedPolynomial {
 public:
  static constexpr int kMaxDegree = 4;

  explicit OrderedPolynomial(std::complex<double> kappa) : kappa_(kappa) {}

  static OrderedPolynomial from_symmetric(std::complex<double> kappa, const ComplexCoeffs& c) {
    OrderedPolynomial out(kappa);
    out.at(0, 0) = c[0];
    out.at(1, 0) = c[1];
    out.at(0, 1) = c[2];
    out.at(2, 0) = c[3];
    // (QP + PQ)/2 = QP - kappa/2
    out.at(1, 1) = c[4];
    out.at(0, 0) -= 0.5 * kappa * c[4];
    out.at(0, 2) = c[5];
    return out;
  }

  ComplexCoeffs to_symmetric(double scale) const {
    for (int a = 0; a <= kMaxDegree; ++a) {
      for (int b = 0; b <= kMaxDegree; ++b) {
        if (a + b > 2 && std::abs(coeff_[a][b]) > kClosureRelTol * scale) {
          throw ClosureViolation("commutator leaves the quadratic span: Q^" + std::to_string(a) + " P^" +
                                 std::to_string(b) + " coefficient " + std::to_string(std::abs(coeff_[a][b])));
        }
      }
    }
    ComplexCoeffs c;
    c[0] = coeff_[0][0] + 0.5 * kappa_ * coeff_[1][1];
    c[1] = coeff_[1][0];
    c[2] = coeff_[0][1];
    c[3] = coeff_[2][0];
    c[4] = coeff_[1][1];
    c[5] = coeff_[0][2];
    return c;
  }

  std::complex<double>& at(int a, int b) { return coeff_[a][b]; }

  friend OrderedPolynomial operator*(const OrderedPolynomial& x, const OrderedPolynomial& y) {
    // Q^a P^b Q^c P^d = sum_k k! C(b,k) C(c,k) (-kappa)^k Q^(a+c-k) P^(b+d-k)
    OrderedPolynomial out(x.kappa_);
    for (int a = 0; a <= kMaxDegree; ++a) {
      for (int b = 0; b <= kMaxDegree; ++b) {
        if (x.coeff_[a][b] == 0.0) continue;
        for (int c = 0; c <= kMaxDegree; ++c) {
          for (int d = 0; d <= kMaxDegree; ++d) {
            if (y.coeff_[c][d] == 0.0) continue;
            const std::complex<double> base = x.coeff_[a][b] * y.coeff_[c][d];
            std::complex<double> weight = 1.0;
            for (int k = 0; k <= std::min(b, c); ++k) {
              const int qa = a + c - k;
              const int pb = b + d - k;
              if (qa > kMaxDegree || pb > kMaxDegree) {
                throw ClosureViolation("operator product exceeds degree " + std::to_string(kMaxDegree));
              }
              out.coeff_[qa][pb] += weight * base;
              // next weight: k!C(b,k)C(c,k)(-kappa)^k -> (k+1)!C(b,k+1)C(c,k+1)(-kappa)^(k+1)
              weight *= -x.kappa_ * static_cast<double>((b - k) * (c - k)) / static_cast<double>(k + 1);
            }
          }
        }
      }
    }
    return out;
  }

  friend OrderedPolynomial operator-(const OrderedPolynomial& x, const OrderedPolynomial& y) {
    OrderedPolynomial out = x;
    for (int a = 0; a <= kMaxDegree; ++a)
      for (int b = 0; b <= kMaxDegree; ++b) out.coeff_[a][b] -= y.coeff_[a][b];
    return out;
  }

 private:
  std::complex<double> kappa_;
  std::array<std::array<std::complex<double>, kMaxDegree + 1>, kMaxDegree + 1> coeff_{};
};

double coeff_scale(const ComplexCoeffs& a, const ComplexCoeffs& b, std::complex<double> kappa) {
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    ma = std::max(ma, std::abs(a[k]));
    mb = std::max(mb, std::abs(b[k]));
  }
  return std::max(1.0, ma * mb * std::max(1.0, std::abs(kappa)));
}

}  // namespace

ComplexCoeffs quantum_commutator(const RepParams& par, const ComplexCoeffs& hamiltonian, const ComplexCoeffs& k) {
  const std::complex<double> kappa = quantum_commutator_scale(par);
  const auto h_op = OrderedPolynomial::from_symmetric(kappa, hamiltonian);
  const auto k_op = OrderedPolynomial::from_symmetric(kappa, k);
  return (h_op * k_op - k_op * h_op).to_symmetric(coeff_scale(hamiltonian, k, kappa));
}

ClassicalCommutator classical_commutator(const RepParams& par, const Expr& hamiltonian, const Expr& k,
                                         std::span<const Env> points) {
  const DiffOp comm = commutator(weyl_classical(par, hamiltonian), weyl_classical(par, k));
  ClassicalCommutator out;
  out.symbol = comm.coefficient({0, 0});
  for (const auto& [ord, coeff] : comm.terms()) {
    if (ord.total() == 0) continue;
    out.derivative_residual = std::max(out.derivative_residual, max_magnitude(coeff, points));
  }
  return out;
}

Expr classical_commutator_check(const RepParams& par, const Expr& hamiltonian, const Expr& k) {
  static const std::vector<Env> points = sample_points(20);
  const ClassicalCommutator comm = classical_commutator(par, hamiltonian, k, points);
  const double scale = std::max(1.0, par.h() * max_magnitude(poisson(hamiltonian, k), points));
  if (!(comm.derivative_residual <= 1e-10 * scale)) {
    throw ClosureViolation("classical commutator has a derivative part of size " +
                           std::to_string(comm.derivative_residual));
  }
  return comm.symbol;
}

RateMatrix classical_rate_matrix(const QuadHamiltonian& hamiltonian) {
  const Expr h = hamiltonian.to_expr();
  RateMatrix m{};
  for (std::size_t j = 0; j < N; ++j) {
    const CoeffState column = CoeffState::from_expr(poisson(h, CoeffState::basis(static_cast<Monomial>(j)).to_expr()));
    for (std::size_t i = 0; i < N; ++i) m[i][j] = column.c[i];
  }
  return m;
}

RateMatrix classical_rate_matrix_from_commutator(const RepParams& par, const QuadHamiltonian& hamiltonian) {
  const Expr h = hamiltonian.to_expr();
  RateMatrix m{};
  for (std::size_t j = 0; j < N; ++j) {
    const Expr symbol = classical_commutator_check(par, h, CoeffState::basis(static_cast<Monomial>(j)).to_expr());
    const auto coeffs = taylor_coefficients(symbol);
    require_quadratic(symbol, coeffs);
    for (std::size_t i = 0; i < N; ++i) {
      if (coeffs[i].re != 0.0 || coeffs[i].im != 0.0 || coeffs[i].im_eps != 0.0) {
        throw ClosureViolation("classical commutator symbol has a non-eps part");
      }
      m[i][j] = coeffs[i].eps / par.h();
    }
  }
  return m;
}

TimeConvention parse_time_convention(std::string_view name) {
  if (name == "paper") return TimeConvention::paper;
  if (name == "egorov") return TimeConvention::egorov;
  throw std::invalid_argument("unknown time convention '" + std::string(name) + "' (expected paper|egorov)");
}

std::string_view to_string(TimeConvention c) { return c == TimeConvention::paper ? "paper" : "egorov"; }

std::complex<double> evolution_constant(const RepParams& par, TimeConvention convention) {
  if (convention == TimeConvention::paper) return {0.0, par.h()};
  const auto bracket = poisson(Expr::q(), Expr::p()).as_constant();
  if (!bracket || !bracket->is_real() || bracket->re == 0.0) {
    throw ClosureViolation("{q, p} is not a nonzero real constant");
  }
  return quantum_commutator_scale(par) / bracket->re;
}

double paper_time_factor(const RepParams& par) {
  const std::complex<double> r =
      evolution_constant(par, TimeConvention::egorov) / evolution_constant(par, TimeConvention::paper);
  if (std::abs(r.imag()) > 1e-14 * std::abs(r)) {
    throw ClosureViolation("evolution constants are not real multiples of each other");
  }
  return r.real();
}

RateMatrix quantum_rate_matrix(const RepParams& par, const QuadHamiltonian& hamiltonian, TimeConvention convention) {
  const std::complex<double> constant = evolution_constant(par, convention);
  ComplexCoeffs h;
  for (std::size_t k = 0; k < N; ++k) h[k] = hamiltonian.coeffs.c[k];
  RateMatrix m{};
  for (std::size_t j = 0; j < N; ++j) {
    ComplexCoeffs e{};
    e[j] = 1.0;
    const ComplexCoeffs comm = quantum_commutator(par, h, e);
    double scale = 1.0;
    for (const auto& v : comm) scale = std::max(scale, std::abs(v / constant));
    for (std::size_t i = 0; i < N; ++i) {
      const std::complex<double> rate = comm[i] / constant;
      if (std::abs(rate.imag()) > kClosureRelTol * scale) {
        throw ClosureViolation("quantum rate for a real Hamiltonian has an imaginary part");
      }
      m[i][j] = rate.real();
    }
  }
  return m;
}

namespace {

using Vec = std::array<double, N>;

Vec times(const RateMatrix& m, const Vec& v) {
  Vec out{};
  for (std::size_t i = 0; i < N; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) acc += m[i][j] * v[j];
    out[i] = acc;
  }
  return out;
}

Vec axpy(const Vec& y, double a, const Vec& x) {
  Vec out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + a * x[i];
  return out;
}

Vec rk4_step(const RateMatrix& m, const Vec& y, double h) {
  const Vec k1 = times(m, y);
  const Vec k2 = times(m, axpy(y, 0.5 * h, k1));
  const Vec k3 = times(m, axpy(y, 0.5 * h, k2));
  const Vec k4 = times(m, axpy(y, h, k3));
  Vec out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace

Trajectory integrate_linear(const RateMatrix& rate, const CoeffState& k0, double t_end, double dt) {
  if (!std::isfinite(dt) || !std::isfinite(t_end) || !(dt > 0.0) || !(t_end > 0.0) || dt > t_end) {
    throw InvalidStep("need 0 < dt <= t_end (got dt=" + std::to_string(dt) + ", t_end=" + std::to_string(t_end) + ")");
  }
  // Steps of dt, then a shortened final step; a remainder within rounding of
  // zero is absorbed into the last full step.
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  Trajectory out;
  out.reserve(steps + 1);
  out.push_back({0.0, k0});
  Vec y = k0.c;
  for (std::size_t n = 1; n <= steps; ++n) {
    const bool last = n == steps;
    const double t = last ? t_end : static_cast<double>(n) * dt;
    y = rk4_step(rate, y, last ? t_end - static_cast<double>(n - 1) * dt : dt);
    out.push_back({t, CoeffState{y}});
  }
  return out;
}

Trajectory evolve_classical(const QuadHamiltonian& hamiltonian, const CoeffState& k0, double t_end, double dt) {
  return integrate_linear(classical_rate_matrix(hamiltonian), k0, t_end, dt);
}

Trajectory evolve_quantum(const RepParams& par, const QuadHamiltonian& hamiltonian, const CoeffState& k0,
                          double t_end, double dt, TimeConvention convention) {
  return integrate_linear(quantum_rate_matrix(par, hamiltonian, convention), k0, t_end, dt);
}

double max_trajectory_difference(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) throw std::invalid_argument("trajectories have different lengths");
  double worst = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (a[n].t != b[n].t) throw std::invalid_argument("trajectories have different time grids");
    for (std::size_t i = 0; i < N; ++i) worst = std::max(worst, std::abs(a[n].state.c[i] - b[n].state.c[i]));
  }
  return worst;
}

}  // namespace hdual
