#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hdual/algebra.hpp"

using namespace hdual;

namespace {

constexpr DualComplex I = DualComplex::unit_i();
constexpr DualComplex E = DualComplex::unit_eps();
constexpr DualComplex IE = DualComplex::unit_i_eps();

DualComplex random_element(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
  return {a, b, c, d};
}

}  // namespace

TEST_CASE("add is componentwise") {
  CHECK(add(DualComplex(1.0) + E, DualComplex(2.0) + DualComplex(3.0) * I) == DualComplex(3.0, 3.0, 1.0, 0.0));
  const DualComplex z{1.5, -2.0, 0.25, 4.0};
  CHECK(add(z, DualComplex{}) == z);
  CHECK(add(E, IE) == DualComplex(0.0, 0.0, 1.0, 1.0));
}

TEST_CASE("unit relations hold exactly") {
  CHECK(mul(I, I) == DualComplex(-1.0));
  CHECK(mul(E, E).is_zero());
  CHECK(mul(IE, IE).is_zero());
  CHECK(mul(I, E) == IE);
  CHECK(mul(E, I) == IE);
  CHECK(mul(I, IE) == -E);
}

TEST_CASE("dual product drops the eps^2 term") {
  // (2 + 3 eps)(4 + 5 eps) = 8 + (10 + 12) eps
  CHECK(mul(DualComplex(2.0, 0, 3.0, 0), DualComplex(4.0, 0, 5.0, 0)) == DualComplex(8.0, 0.0, 22.0, 0.0));
}

TEST_CASE("exp on the eps axis is 1 + u eps") {
  const double h = 2.0 * std::numbers::pi * 0.1;
  const double s = 0.5;
  const DualComplex got = exp(DualComplex(h * s) * E);
  CHECK(approx_eq(got, DualComplex(1.0, 0.0, 0.1 * std::numbers::pi, 0.0), 1e-15));
  CHECK(exp(DualComplex{}) == DualComplex(1.0));
  CHECK(approx_eq(exp(DualComplex(std::numbers::pi) * I), DualComplex(-1.0), 1e-15));
}

TEST_CASE("exp of w + u eps factors as exp(w)(1 + u eps)") {
  const std::complex<double> w(0.3, -1.2);
  const std::complex<double> u(2.0, 0.5);
  const DualComplex got = exp(DualComplex::from_parts(w, u));
  const std::complex<double> ew = std::exp(w);
  CHECK(approx_eq(got, DualComplex::from_parts(ew, ew * u), 1e-14));
}

TEST_CASE("approx_eq") {
  CHECK(approx_eq(DualComplex(1.0), DualComplex(1.0 + 1e-16), 1e-12));
  CHECK_FALSE(approx_eq(E, IE, 1e-12));
  CHECK(approx_eq(exp(DualComplex(std::numbers::pi) * I), DualComplex(-1.0), 1e-12));
  CHECK_FALSE(approx_eq(DualComplex(std::nan("")), DualComplex(0.0), 1.0));
}

TEST_CASE("ring laws on random triples") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 1000; ++n) {
    const DualComplex a = random_element(rng);
    const DualComplex b = random_element(rng);
    const DualComplex c = random_element(rng);
    const DualComplex abc = (a * b) * c;
    const double scale = std::max(1.0, max_abs(abc));
    REQUIRE(max_abs_diff(abc, a * (b * c)) / scale <= 1e-12);
    const DualComplex lhs = a * (b + c);
    REQUIRE(max_abs_diff(lhs, a * b + a * c) / std::max(1.0, max_abs(lhs)) <= 1e-12);
    REQUIRE(a * b == b * a);
  }
}

TEST_CASE("eps plane squares to zero and the sub-algebras are closed") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 200; ++n) {
    const DualComplex r = random_element(rng);
    const DualComplex z{0.0, 0.0, r.eps, r.im_eps};
    REQUIRE((z * z).is_zero());
    const DualComplex c1{r.re, r.im, 0, 0};
    const DualComplex c2{r.eps, r.im_eps, 0, 0};
    REQUIRE((c1 * c2).is_complex());
    const DualComplex d1{r.re, 0, r.eps, 0};
    const DualComplex d2{r.im, 0, r.im_eps, 0};
    REQUIRE((d1 * d2).is_dual());
    REQUIRE((d1 + d2).is_dual());
  }
}

TEST_CASE("exp turns sums into products") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 500; ++n) {
    const DualComplex a{u(rng), u(rng), u(rng), u(rng)};
    const DualComplex b{u(rng), u(rng), u(rng), u(rng)};
    REQUIRE(max_abs_diff(exp(a + b), exp(a) * exp(b)) <= 1e-10);
  }
}

TEST_CASE("sin and cos lift with their derivatives") {
  const DualComplex z = DualComplex(0.4) + DualComplex(2.0) * E;
  CHECK(approx_eq(sin(z), DualComplex(std::sin(0.4), 0, 2.0 * std::cos(0.4), 0), 1e-15));
  CHECK(approx_eq(cos(z), DualComplex(std::cos(0.4), 0, -2.0 * std::sin(0.4), 0), 1e-15));
}

TEST_CASE("to_string") {
  CHECK(to_string(DualComplex{}) == "0");
  CHECK(to_string(DualComplex(3.0, 3.0, 1.0, 0.0)) == "3 + 3*i + eps");
  CHECK(to_string(-IE) == "-i*eps");
}
