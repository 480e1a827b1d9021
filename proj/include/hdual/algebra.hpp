#pragma once

// Commutative four-dimensional algebra spanned by {1, i, eps, i*eps} with
// i^2 = -1 and eps^2 = 0. Complex numbers and dual numbers are the two
// embedded sub-algebras.

#include <complex>
#include <iosfwd>
#include <string>

namespace hdual {

struct DualComplex {
  double re = 0.0;
  double im = 0.0;
  double eps = 0.0;
  double im_eps = 0.0;

  constexpr DualComplex() = default;
  constexpr DualComplex(double real) : re(real) {}  // NOLINT: implicit embedding of the reals
  constexpr DualComplex(double re_, double im_, double eps_, double im_eps_)
      : re(re_), im(im_), eps(eps_), im_eps(im_eps_) {}

  /// Builds w + u*eps from two complex numbers.
  static constexpr DualComplex from_parts(std::complex<double> w, std::complex<double> u) {
    return {w.real(), w.imag(), u.real(), u.imag()};
  }
  static constexpr DualComplex from_complex(std::complex<double> w) { return from_parts(w, 0.0); }

  static constexpr DualComplex unit_i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr DualComplex unit_eps() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr DualComplex unit_i_eps() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr std::complex<double> complex_part() const { return {re, im}; }
  constexpr std::complex<double> eps_part() const { return {eps, im_eps}; }

  // Structural (bit-level) predicates; never tolerance based.
  constexpr bool is_zero() const { return re == 0.0 && im == 0.0 && eps == 0.0 && im_eps == 0.0; }
  constexpr bool is_one() const { return re == 1.0 && im == 0.0 && eps == 0.0 && im_eps == 0.0; }
  constexpr bool is_complex() const { return eps == 0.0 && im_eps == 0.0; }
  constexpr bool is_dual() const { return im == 0.0 && im_eps == 0.0; }
  constexpr bool is_real() const { return im == 0.0 && eps == 0.0 && im_eps == 0.0; }

  friend constexpr bool operator==(const DualComplex&, const DualComplex&) = default;
};

constexpr DualComplex add(const DualComplex& a, const DualComplex& b) {
  return {a.re + b.re, a.im + b.im, a.eps + b.eps, a.im_eps + b.im_eps};
}

constexpr DualComplex negate(const DualComplex& a) { return {-a.re, -a.im, -a.eps, -a.im_eps}; }

/// Product under i^2 = -1, eps^2 = 0. Complex part is w1*w2, eps part is
/// w1*u2 + u1*w2; the u1*u2 term is never formed.
constexpr DualComplex mul(const DualComplex& a, const DualComplex& b) {
  // (a.re + a.im i)(b.re + b.im i)
  const double re = a.re * b.re - a.im * b.im;
  const double im = a.re * b.im + a.im * b.re;
  // (a.re + a.im i)(b.eps + b.im_eps i) + (a.eps + a.im_eps i)(b.re + b.im i)
  const double eps = (a.re * b.eps - a.im * b.im_eps) + (a.eps * b.re - a.im_eps * b.im);
  const double im_eps = (a.re * b.im_eps + a.im * b.eps) + (a.eps * b.im + a.im_eps * b.re);
  return {re, im, eps, im_eps};
}

constexpr DualComplex operator+(const DualComplex& a, const DualComplex& b) { return add(a, b); }
constexpr DualComplex operator-(const DualComplex& a) { return negate(a); }
constexpr DualComplex operator-(const DualComplex& a, const DualComplex& b) { return add(a, negate(b)); }
constexpr DualComplex operator*(const DualComplex& a, const DualComplex& b) { return mul(a, b); }

constexpr DualComplex& operator+=(DualComplex& a, const DualComplex& b) { return a = add(a, b); }
constexpr DualComplex& operator-=(DualComplex& a, const DualComplex& b) { return a = add(a, negate(b)); }
constexpr DualComplex& operator*=(DualComplex& a, const DualComplex& b) { return a = mul(a, b); }

/// Applies an analytic function g to w + u*eps as g(w) + u*g'(w)*eps.
template <typename F, typename DF>
DualComplex lift(const DualComplex& z, F&& g, DF&& dg) {
  const std::complex<double> w = z.complex_part();
  return DualComplex::from_parts(g(w), z.eps_part() * dg(w));
}

/// exp(w + u*eps) = exp(w) * (1 + u*eps).
DualComplex exp(const DualComplex& z);
DualComplex sin(const DualComplex& z);
DualComplex cos(const DualComplex& z);

/// Max componentwise absolute difference.
double max_abs_diff(const DualComplex& a, const DualComplex& b);
double max_abs(const DualComplex& a);

bool approx_eq(const DualComplex& a, const DualComplex& b, double tol);

std::string to_string(const DualComplex& z);
std::ostream& operator<<(std::ostream& os, const DualComplex& z);

}  // namespace hdual
