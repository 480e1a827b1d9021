#include "hdual/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace hdual {

DualComplex exp(const DualComplex& z) {
  return lift(
      z, [](std::complex<double> w) { return std::exp(w); },
      [](std::complex<double> w) { return std::exp(w); });
}

DualComplex sin(const DualComplex& z) {
  return lift(
      z, [](std::complex<double> w) { return std::sin(w); },
      [](std::complex<double> w) { return std::cos(w); });
}

DualComplex cos(const DualComplex& z) {
  return lift(
      z, [](std::complex<double> w) { return std::cos(w); },
      [](std::complex<double> w) { return -std::sin(w); });
}

double max_abs_diff(const DualComplex& a, const DualComplex& b) {
  return std::max({std::abs(a.re - b.re), std::abs(a.im - b.im), std::abs(a.eps - b.eps),
                   std::abs(a.im_eps - b.im_eps)});
}

double max_abs(const DualComplex& a) {
  return std::max({std::abs(a.re), std::abs(a.im), std::abs(a.eps), std::abs(a.im_eps)});
}

bool approx_eq(const DualComplex& a, const DualComplex& b, double tol) {
  // NaN compares false, so a NaN anywhere never counts as equal.
  return max_abs_diff(a, b) <= tol;
}

namespace {

void append_term(std::ostringstream& os, bool& first, double value, const char* unit) {
  if (value == 0.0) return;
  if (first) {
    if (value < 0) os << '-';
  } else {
    os << (value < 0 ? " - " : " + ");
  }
  const double mag = std::abs(value);
  if (*unit == '\0' || mag != 1.0) {
    os << mag;
    if (*unit != '\0') os << '*';
  }
  os << unit;
  first = false;
}

}  // namespace

std::string to_string(const DualComplex& z) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  append_term(os, first, z.re, "");
  append_term(os, first, z.im, "i");
  append_term(os, first, z.eps, "eps");
  append_term(os, first, z.im_eps, "i*eps");
  if (first) os << '0';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const DualComplex& z) { return os << to_string(z); }

}  // namespace hdual
