#include "hdual/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "hdual/dynamics.hpp"
#include "hdual/heisenberg.hpp"
#include "hdual/representation.hpp"
#include "hdual/simulate.hpp"

namespace hdual {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

using MulFn = std::function<DualComplex(const DualComplex&, const DualComplex&)>;

class Tracker {
 public:
  Tracker(std::string name, double tol) { result_.name = std::move(name), result_.tolerance = tol; }

  void observe(double residual) {
    if (std::isnan(residual)) residual = kInf;
    result_.max_residual = std::max(result_.max_residual, residual);
  }
  /// A structural requirement: any violation makes the residual infinite.
  void require(bool ok, const std::string& what) {
    if (!ok) {
      result_.max_residual = kInf;
      if (result_.detail.empty()) result_.detail = what;
    }
  }
  void note(std::string detail) { result_.detail = std::move(detail); }

  SuiteResult finish() {
    result_.passed = result_.max_residual <= result_.tolerance;
    return result_;
  }

 private:
  SuiteResult result_;
};

template <typename Body>
SuiteResult guarded(const std::string& name, double tol, Body&& body) {
  Tracker t(name, tol);
  try {
    body(t);
  } catch (const std::exception& e) {
    t.require(false, std::string("exception: ") + e.what());
  }
  return t.finish();
}

DualComplex random_dual_complex(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  const double a = u(rng);
  const double b = u(rng);
  const double c = u(rng);
  const double d = u(rng);
  return {a, b, c, d};
}

// ---------------------------------------------------------------------------
// algebra

SuiteResult algebra_laws(const MulFn& mul_fn, std::uint64_t seed) {
  return guarded("algebra.laws", 1e-12, [&](Tracker& t) {
    std::mt19937_64 rng(seed);
    for (int n = 0; n < 1000; ++n) {
      const DualComplex a = random_dual_complex(rng, 10.0);
      const DualComplex b = random_dual_complex(rng, 10.0);
      const DualComplex c = random_dual_complex(rng, 10.0);
      const DualComplex abc1 = mul_fn(mul_fn(a, b), c);
      const DualComplex abc2 = mul_fn(a, mul_fn(b, c));
      // Triple products of size-10 components reach ~1e4, where one ulp is
      // ~2e-12, so residuals are measured relative to the product size.
      t.observe(max_abs_diff(abc1, abc2) / std::max(1.0, max_abs(abc1)));
      const DualComplex lhs = mul_fn(a, b + c);
      t.observe(max_abs_diff(lhs, mul_fn(a, b) + mul_fn(a, c)) / std::max(1.0, max_abs(lhs)));
      t.observe(max_abs_diff(mul_fn(a, b), mul_fn(b, a)));
    }
  });
}

SuiteResult algebra_units(const MulFn& mul_fn) {
  return guarded("algebra.units", 0.0, [&](Tracker& t) {
    const DualComplex i = DualComplex::unit_i();
    const DualComplex e = DualComplex::unit_eps();
    const DualComplex ie = DualComplex::unit_i_eps();
    t.require(mul_fn(i, i) == DualComplex(-1.0), "i*i != -1");
    t.require(mul_fn(e, e).is_zero(), "eps*eps != 0");
    t.require(mul_fn(ie, ie).is_zero(), "(i eps)^2 != 0");
    t.require(mul_fn(i, e) == ie && mul_fn(e, i) == ie, "i*eps != i eps");
  });
}

SuiteResult algebra_nilpotent_plane(const MulFn& mul_fn, std::uint64_t seed) {
  return guarded("algebra.nilpotent_plane", 0.0, [&](Tracker& t) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int n = 0; n < 1000; ++n) {
      const DualComplex z{0.0, 0.0, u(rng), u(rng)};
      t.require(mul_fn(z, z).is_zero(), "z*z != 0 for z in the eps plane");
    }
  });
}

SuiteResult algebra_subalgebras(const MulFn& mul_fn, std::uint64_t seed) {
  return guarded("algebra.subalgebras", 0.0, [&](Tracker& t) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int n = 0; n < 200; ++n) {
      const DualComplex c1{u(rng), u(rng), 0.0, 0.0};
      const DualComplex c2{u(rng), u(rng), 0.0, 0.0};
      const DualComplex d1{u(rng), 0.0, u(rng), 0.0};
      const DualComplex d2{u(rng), 0.0, u(rng), 0.0};
      t.require(mul_fn(c1, c2).is_complex() && (c1 + c2).is_complex(), "complex numbers not closed");
      t.require(mul_fn(d1, d2).is_dual() && (d1 + d2).is_dual(), "dual numbers not closed");
    }
  });
}

SuiteResult algebra_exp(const MulFn& mul_fn, std::uint64_t seed) {
  return guarded("algebra.exp_homomorphism", 1e-10, [&](Tracker& t) {
    std::mt19937_64 rng(seed);
    for (int n = 0; n < 1000; ++n) {
      const DualComplex a = random_dual_complex(rng, 1.0);
      const DualComplex b = random_dual_complex(rng, 1.0);
      t.observe(max_abs_diff(exp(a + b), mul_fn(exp(a), exp(b))));
    }
  });
}

// ---------------------------------------------------------------------------
// expr

SuiteResult expr_dual_lift(const std::vector<Expr>& corpus) {
  return guarded("expr.dual_lift", 1e-11, [&](Tracker& t) {
    const auto points = sample_points(100);
    for (const Expr& f : corpus) {
      const Expr fq = diff(f, Var::q);
      const Expr fp = diff(f, Var::p);
      for (const Env& env : points) {
        const DualComplex shifted_q = eval(f, {env.q + DualComplex::unit_eps(), env.p});
        const DualComplex shifted_p = eval(f, {env.q, env.p + DualComplex::unit_eps()});
        t.observe(std::abs(shifted_q.eps_part() - eval(fq, env).complex_part()));
        t.observe(std::abs(shifted_p.eps_part() - eval(fp, env).complex_part()));
        t.observe(std::abs(shifted_q.complex_part() - eval(f, env).complex_part()));
      }
    }
  });
}

SuiteResult expr_diff_rules(const std::vector<Expr>& corpus, std::uint64_t seed) {
  return guarded("expr.diff_linear_and_mixed", 1e-11, [&](Tracker& t) {
    const auto points = sample_points(20);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (std::size_t k = 0; k < corpus.size(); ++k) {
      const Expr& f = corpus[k];
      const Expr& g = corpus[(k + 3) % corpus.size()];
      const double a = u(rng);
      const double b = u(rng);
      for (Var v : {Var::q, Var::p}) {
        const Expr lhs = diff(Expr(a) * f + Expr(b) * g, v);
        const Expr rhs = Expr(a) * diff(f, v) + Expr(b) * diff(g, v);
        t.observe(max_residual(lhs, rhs, points));
      }
      t.observe(max_residual(diff(diff(f, Var::q), Var::p), diff(diff(f, Var::p), Var::q), points));
    }
  });
}

// ---------------------------------------------------------------------------
// heisenberg

SuiteResult group_laws(std::uint64_t seed) {
  return guarded("group.laws", 1e-12, [&](Tracker& t) {
    std::mt19937_64 rng(seed);
    for (int n = 0; n < 1000; ++n) {
      const GroupElement a = random_group_element(rng, 2.0);
      const GroupElement b = random_group_element(rng, 2.0);
      const GroupElement c = random_group_element(rng, 2.0);
      const GroupElement l = multiply(multiply(a, b), c);
      const GroupElement r = multiply(a, multiply(b, c));
      t.observe(std::max({std::abs(l.s - r.s), std::abs(l.x - r.x), std::abs(l.y - r.y)}));
      t.require(multiply(a, inverse(a)) == kIdentity, "g * g^-1 != identity");
      t.require(multiply(a, kIdentity) == a && multiply(kIdentity, a) == a, "identity law");
      const GroupElement centre{a.s, 0.0, 0.0};
      t.require(multiply(centre, b) == multiply(b, centre), "centre does not commute");
    }
    const double witness = multiply({0, 1, 0}, {0, 0, 1}).s - multiply({0, 0, 1}, {0, 1, 0}).s;
    t.require(witness == 1.0, "noncommutativity witness != 1");
  });
}

// ---------------------------------------------------------------------------
// representation

SuiteResult rep_calibration(const std::vector<Expr>& corpus, std::uint64_t seed) {
  return guarded("rep.sign_calibration", 0.0, [&](Tracker& t) {
    const RepParams par(1.0);
    const auto points = sample_points(20);
    for (auto [which, expected] : {std::pair{Representation::quantum, kQuantumCentralSign},
                                   std::pair{Representation::classical, kClassicalCentralSign}}) {
      const SignCalibration cal = calibrate_central_sign(which, par, corpus, points, 5, seed, 1e-9);
      t.require(cal.passing == 1, "calibration did not select exactly one sign");
      t.require(cal.selected == expected, "calibrated sign differs from the library constant");
    }
  });
}

SuiteResult rep_homomorphism(Representation which, const std::vector<Expr>& corpus, std::uint64_t seed) {
  const char* name = which == Representation::quantum ? "rep.quantum.homomorphism" : "rep.classical.homomorphism";
  return guarded(name, 1e-9, [&](Tracker& t) {
    const auto points = sample_points(20);
    const CentralSign sign = which == Representation::quantum ? kQuantumCentralSign : kClassicalCentralSign;
    for (double hbar : {0.1, 1.0}) {
      const RepParams par(hbar);
      std::mt19937_64 rng(seed);
      for (int n = 0; n < 50; ++n) {
        const GroupElement g = random_group_element(rng);
        const GroupElement g2 = random_group_element(rng);
        for (const Expr& f : corpus) t.observe(representation_residual(which, par, sign, g, g2, f, points));
      }
    }
  });
}

SuiteResult rep_central_character(const std::vector<Expr>& corpus, std::uint64_t seed) {
  return guarded("rep.central_character", 1e-10, [&](Tracker& t) {
    const auto points = sample_points(20);
    const RepParams par(0.7);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n = 0; n < 10; ++n) {
      const double s = u(rng);
      const GroupElement centre{s, 0.0, 0.0};
      const Expr quantum_char(exp(DualComplex(0.0, -par.h() * s, 0.0, 0.0)));
      const Expr classical_char(DualComplex(1.0, 0.0, par.h() * s, 0.0));
      for (const Expr& f : corpus) {
        t.observe(max_residual(rep_quantum(par, centre, f), quantum_char * f, points));
        t.observe(max_residual(rep_classical(par, centre, f), classical_char * f, points));
      }
    }
  });
}

SuiteResult rep_generators(const std::vector<Expr>& corpus) {
  return guarded("rep.generators_finite_difference", 1e-4, [&](Tracker& t) {
    const auto points = sample_points(10);
    const double step = 1e-6;
    for (double hbar : {0.1, 1.0, 7.0}) {
      const RepParams par(hbar);
      const GeneratorPair quantum = gen_quantum(par);
      const GeneratorPair classical = gen_classical(par);
      for (const Expr& f : corpus) {
        auto central_difference = [&](Representation which, const GroupElement& dir) {
          const GroupElement fwd{dir.s * step, dir.x * step, dir.y * step};
          const GroupElement bwd{-dir.s * step, -dir.x * step, -dir.y * step};
          const CentralSign sign = which == Representation::quantum ? kQuantumCentralSign : kClassicalCentralSign;
          return (represent(which, par, fwd, f, sign) - represent(which, par, bwd, f, sign)) *
                 Expr(1.0 / (2.0 * step));
        };
        auto relative = [&](const Expr& fd, const Expr& exact) {
          return max_residual(fd, exact, points) / std::max(1.0, max_magnitude(exact, points));
        };
        t.observe(relative(central_difference(Representation::quantum, {0, 1, 0}), apply(quantum.x, f)));
        t.observe(relative(central_difference(Representation::quantum, {0, 0, 1}), apply(quantum.y, f)));
        t.observe(relative(central_difference(Representation::classical, {0, 1, 0}), apply(classical.x, f)));
        t.observe(relative(central_difference(Representation::classical, {0, 0, 1}), apply(classical.y, f)));
      }
    }
  });
}

SuiteResult rep_commutators() {
  return guarded("rep.generator_commutators", 1e-12, [&](Tracker& t) {
    for (double hbar : {0.1, 1.0, 7.0}) {
      const RepParams par(hbar);
      const GeneratorPair quantum = gen_quantum(par);
      const GeneratorPair classical = gen_classical(par);
      const DiffOp qc = commutator(quantum.y, quantum.x);
      const DiffOp cc = commutator(classical.x, classical.y);
      for (const auto& [op, expected] : {std::pair{qc, DualComplex(0.0, par.h(), 0.0, 0.0)},
                                         std::pair{cc, DualComplex(0.0, 0.0, par.h(), 0.0)}}) {
        for (const auto& [ord, coeff] : op.terms()) {
          const auto c = coeff.as_constant();
          t.require(c.has_value(), "commutator coefficient is not constant");
          if (!c) continue;
          if (ord.total() == 0) {
            t.observe(max_abs_diff(*c, expected) / std::max(1.0, par.h()));
          } else {
            t.observe(max_abs(*c));
          }
        }
        t.require(op.coefficient({0, 0}).as_constant().has_value(), "commutator has no identity term");
      }
    }
  });
}

SuiteResult rep_cross_form(const std::vector<Expr>& corpus, std::uint64_t seed) {
  return guarded("rep.classical_cross_form", 1e-10, [&](Tracker& t) {
    const auto points = sample_points(10);
    std::mt19937_64 rng(seed);
    for (double hbar : {0.1, 1.0}) {
      const RepParams par(hbar);
      for (int n = 0; n < 10; ++n) {
        const GroupElement g = random_group_element(rng);
        for (const Expr& f : corpus) {
          const Expr symbolic = rep_classical(par, g, f);
          for (const Env& env : points) {
            t.observe(max_abs_diff(eval(symbolic, env), rep_classical_pointwise(par, g, f, env)));
          }
        }
      }
    }
  });
}

SuiteResult diffop_linearity(const std::vector<Expr>& corpus) {
  return guarded("diffop.apply_linear", 1e-10, [&](Tracker& t) {
    const auto points = sample_points(20);
    const RepParams par(1.0);
    const QuadHamiltonian h{CoeffState{{0.3, -0.2, 0.5, 0.5, 0.25, 0.5}}};
    const std::vector<DiffOp> ops{gen_quantum(par).x, gen_classical(par).y, weyl_quantum_quadratic(par, h),
                                  weyl_classical(par, sin(Expr::q()) * Expr::p())};
    for (const DiffOp& op : ops) {
      for (std::size_t k = 0; k + 1 < corpus.size(); ++k) {
        const Expr& f = corpus[k];
        const Expr& g = corpus[k + 1];
        t.observe(max_residual(apply(op, f + g), apply(op, f) + apply(op, g), points));
      }
    }
  });
}

// ---------------------------------------------------------------------------
// dynamics

SuiteResult poisson_laws(const std::vector<Expr>& corpus) {
  return guarded("dynamics.poisson_laws", 1e-10, [&](Tracker& t) {
    const auto points = sample_points(20);
    for (std::size_t k = 0; k < corpus.size(); ++k) {
      const Expr& h = corpus[k];
      const Expr& f = corpus[(k + 1) % corpus.size()];
      const Expr& g = corpus[(k + 5) % corpus.size()];
      t.observe(max_residual(poisson(h, f), -poisson(f, h), points));
      t.observe(max_magnitude(poisson(h, h), points));
      const Expr leibniz = poisson(h, f) * g + f * poisson(h, g);
      t.observe(max_residual(poisson(h, f * g), leibniz, points) /
                std::max(1.0, max_magnitude(leibniz, points)));
    }
  });
}

SuiteResult poisson_emergence(std::uint64_t seed) {
  return guarded("dynamics.poisson_emergence", 1e-10, [&](Tracker& t) {
    const auto points = sample_points(100, seed);
    std::mt19937_64 rng(seed);
    for (double hbar : {1.0 / (2.0 * kPi), 1.0}) {
      const RepParams par(hbar);
      const Expr eps_h(DualComplex(0.0, 0.0, par.h(), 0.0));
      for (int n = 0; n < 25; ++n) {
        const Expr h = random_polynomial(rng, 3);
        const Expr k = random_polynomial(rng, 3);
        const ClassicalCommutator comm = classical_commutator(par, h, k, points);
        t.observe(comm.derivative_residual);
        t.observe(max_residual(comm.symbol, eps_h * poisson(h, k), points));
      }
    }
  });
}

SuiteResult hamilton_flows() {
  return guarded("dynamics.hamilton_flows", 1e-8, [&](Tracker& t) {
    QuadHamiltonian harmonic;
    harmonic.coeffs[Monomial::qq] = 0.5;
    harmonic.coeffs[Monomial::pp] = 0.5;
    const CoeffState q = CoeffState::basis(Monomial::q);
    const Trajectory orbit = evolve_classical(harmonic, q, 2.0 * kPi, 1e-3);
    for (std::size_t i = 0; i < CoeffState::kSize; ++i) t.observe(std::abs(orbit.back().state.c[i] - q.c[i]));
    for (const auto& point : orbit) {
      t.observe(std::abs(point.state[Monomial::q] - std::cos(point.t)));
      t.observe(std::abs(point.state[Monomial::p] - std::sin(point.t)));
    }

    const Trajectory energy = evolve_classical(harmonic, harmonic.coeffs, 2.0 * kPi, 1e-3);
    for (const auto& point : energy) {
      for (std::size_t i = 0; i < CoeffState::kSize; ++i) t.observe(std::abs(point.state.c[i] - harmonic.coeffs.c[i]));
    }

    QuadHamiltonian free;
    free.coeffs[Monomial::pp] = 0.5;
    const Trajectory drift = evolve_classical(free, q, 2.0 * kPi, 1e-3);
    for (const auto& point : drift) {
      t.observe(std::abs(point.state[Monomial::q] - 1.0));
      t.observe(std::abs(point.state[Monomial::p] - point.t));
    }
  });
}

SuiteResult planck_independence() {
  return guarded("dynamics.planck_independence", 0.0, [&](Tracker& t) {
    SimConfig cfg;
    cfg.hamiltonian.coeffs = CoeffState{{0.1, 0.2, -0.3, 0.7, 0.4, 1.3}};
    cfg.observable = CoeffState{{0.0, 1.0, -2.0, 0.5, 0.0, 0.0}};
    std::optional<Trajectory> reference;
    for (double hbar : {0.1, 1.0, 7.0}) {
      cfg.hbar = hbar;
      const Trajectory traj = run_simulation(cfg);
      if (!reference) {
        reference = traj;
        continue;
      }
      t.require(traj.size() == reference->size(), "trajectory length depends on hbar");
      for (std::size_t n = 0; n < traj.size() && n < reference->size(); ++n) {
        t.require(traj[n].t == (*reference)[n].t && traj[n].state == (*reference)[n].state,
                  "classical trajectory depends on hbar");
      }
    }
  });
}

QuadHamiltonian random_quadratic(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  QuadHamiltonian h;
  for (double& c : h.coeffs.c) c = u(rng);
  return h;
}

SuiteResult egorov(std::uint64_t seed) {
  return guarded("dynamics.egorov_correspondence", 1e-8, [&](Tracker& t) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const RepParams par(1.0 / (2.0 * kPi));
    const double factor = paper_time_factor(par);
    for (int n = 0; n < 5; ++n) {
      const QuadHamiltonian h = random_quadratic(rng);
      CoeffState k0;
      k0[Monomial::one] = u(rng);
      k0[Monomial::q] = u(rng);
      k0[Monomial::p] = u(rng);
      const Trajectory classical = evolve_classical(h, k0, 2.0 * kPi, 1e-2);
      const Trajectory quantum = evolve_quantum(par, h, k0, 2.0 * kPi, 1e-2, TimeConvention::egorov);
      t.observe(max_trajectory_difference(classical, quantum));
      const Trajectory rescaled = evolve_classical(h.scaled(factor), k0, 2.0 * kPi, 1e-2);
      const Trajectory paper = evolve_quantum(par, h, k0, 2.0 * kPi, 1e-2, TimeConvention::paper);
      t.observe(max_trajectory_difference(rescaled, paper));
    }
  });
}

}  // namespace

std::vector<Expr> standard_corpus() {
  const Expr q = Expr::q();
  const Expr p = Expr::p();
  const Expr i(DualComplex::unit_i());
  return {
      Expr(1.0),
      q,
      p,
      pow(q, 2) + Expr(0.5) * q * p - pow(p, 2),
      pow(q, 3) - Expr(2.0) * q * pow(p, 2) + Expr(0.5),
      pow(q + p, 4),
      pow(q, 2) * pow(p, 2) - Expr(3.0) * q + Expr(1.0),
      exp(Expr(0.7) * q - Expr(0.3) * p),
      sin(Expr(1.3) * q + Expr(0.4) * p),
      cos(Expr(0.5) * q - Expr(1.1) * p),
      q * exp(Expr(0.3) * p),
      sin(q) * cos(p),
      pow(p, 2) * exp(-(Expr(0.5) * q)),
      exp(i * (q + Expr(2.0) * p)),
  };
}

Expr random_polynomial(std::mt19937_64& rng, unsigned max_degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Expr out;
  for (unsigned total = 0; total <= max_degree; ++total) {
    for (unsigned a = 0; a <= total; ++a) {
      out += Expr(u(rng)) * pow(Expr::q(), a) * pow(Expr::p(), total - a);
    }
  }
  return out;
}

std::vector<SuiteResult> run_all_suites(const CheckOptions& options) {
  const auto corpus = standard_corpus();
  const std::uint64_t seed = options.seed;
  std::vector<SuiteResult> out;
  out.push_back(algebra_laws(options.multiply, seed));
  out.push_back(algebra_units(options.multiply));
  out.push_back(algebra_nilpotent_plane(options.multiply, seed + 1));
  out.push_back(algebra_subalgebras(options.multiply, seed + 2));
  out.push_back(algebra_exp(options.multiply, seed + 3));
  out.push_back(expr_dual_lift(corpus));
  out.push_back(expr_diff_rules(corpus, seed + 4));
  out.push_back(group_laws(seed + 5));
  out.push_back(rep_calibration(corpus, seed + 6));
  out.push_back(rep_homomorphism(Representation::quantum, corpus, seed + 7));
  out.push_back(rep_homomorphism(Representation::classical, corpus, seed + 8));
  out.push_back(rep_central_character(corpus, seed + 9));
  out.push_back(rep_generators(corpus));
  out.push_back(rep_commutators());
  out.push_back(rep_cross_form(corpus, seed + 10));
  out.push_back(diffop_linearity(corpus));
  out.push_back(poisson_laws(corpus));
  out.push_back(poisson_emergence(seed + 11));
  out.push_back(hamilton_flows());
  out.push_back(planck_independence());
  out.push_back(egorov(seed + 12));
  return out;
}

int report_suites(const std::vector<SuiteResult>& results, std::ostream& out) {
  bool all = true;
  for (const SuiteResult& r : results) {
    char line[256];
    std::snprintf(line, sizeof line, "%-36s max_residual=%-12.3e tol=%-9.1e %s", r.name.c_str(), r.max_residual,
                  r.tolerance, r.passed ? "PASS" : "FAIL");
    out << line;
    if (!r.detail.empty()) out << "  (" << r.detail << ')';
    out << '\n';
    all = all && r.passed;
  }
  out << (all ? "all suites passed" : "some suites FAILED") << '\n';
  return all ? 0 : 1;
}

}  // namespace hdual
