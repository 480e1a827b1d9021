#pragma once

// Property suites for every module, shared by `hdual check`, the Python
// bindings and the tests. Each suite reports its largest residual against a
// fixed tolerance; a failing suite never stops the ones after it.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "hdual/algebra.hpp"
#include "hdual/expr.hpp"

namespace hdual {

struct SuiteResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct CheckOptions {
  /// Multiplication used by the algebra suites. Tests swap in a broken one
  /// to confirm the suites notice.
  std::function<DualComplex(const DualComplex&, const DualComplex&)> multiply =
      [](const DualComplex& a, const DualComplex& b) { return mul(a, b); };
  std::uint64_t seed = 20260117;
};

/// Polynomials to degree 4, exp/sin/cos of linear forms, and products of these.
std::vector<Expr> standard_corpus();

/// Random polynomial of total degree <= max_degree, coefficients uniform in [-1, 1].
Expr random_polynomial(std::mt19937_64& rng, unsigned max_degree);

std::vector<SuiteResult> run_all_suites(const CheckOptions& options = {});

/// Prints one line per suite and returns 0 iff every suite passed, else 1.
int report_suites(const std::vector<SuiteResult>& results, std::ostream& out);

}  // namespace hdual
