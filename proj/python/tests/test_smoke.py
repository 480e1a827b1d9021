import math

import pytest

import hdual


def test_dual_units():
    assert hdual.I * hdual.I == hdual.DualComplex(-1.0)
    assert hdual.EPS * hdual.EPS == hdual.DualComplex()
    z = hdual.DualComplex(2.0, 0.0, 3.0) * hdual.DualComplex(4.0, 0.0, 5.0)
    assert (z.re, z.eps) == (8.0, 22.0)


def test_dual_lift_derivative():
    f = hdual.parse_expr("sin(q)*p^2")
    v = f(hdual.DualComplex(0.3, 0.0, 1.0), hdual.DualComplex(1.5))
    assert v.eps_part == pytest.approx(math.cos(0.3) * 2.25, abs=1e-14)
    assert hdual.expr_approx_eq(hdual.diff(f, "q"), hdual.parse_expr("cos(q)*p^2"))


def test_group_law():
    g = hdual.GroupElement(1, 1, 0) * hdual.GroupElement(2, 0, 1)
    assert (g.s, g.x, g.y) == (3.5, 1.0, 1.0)
    assert hdual.symplectic(2, 3, 4, 5) == -2.0


def test_generator_commutators():
    par = hdual.RepParams(0.5)
    x, y = hdual.gen_quantum(par)
    c = hdual.commutator(y, x)
    assert c.order == 0
    assert c.terms_at(0.3, -0.7)["dq0dp0.complex"] == pytest.approx(1j * par.h, abs=1e-12)
    x, y = hdual.gen_classical(par)
    c = hdual.commutator(x, y)
    assert c.terms_at(0.3, -0.7)["dq0dp0.eps"] == pytest.approx(par.h, abs=1e-12)


def test_poisson_emergence():
    par = hdual.RepParams(1.0)
    h = hdual.parse_expr("q^3 - 2*q*p + p^2")
    k = hdual.parse_expr("q*p^2 + q")
    symbol = hdual.classical_commutator_check(par, h, k)
    expected = hdual.poisson(h, k)
    for q, p in [(0.2, -1.1), (1.3, 0.4)]:
        assert symbol(q, p).eps_part == pytest.approx(par.h * expected(q, p).re, abs=1e-10)


def test_harmonic_period():
    harmonic = [0, 0, 0, 0.5, 0, 0.5]
    tr = hdual.evolve_classical(harmonic, [0, 1, 0, 0, 0, 0], 2 * math.pi, 1e-3)
    assert tr["coeffs"][-1] == pytest.approx([0, 1, 0, 0, 0, 0], abs=1e-8)
    qt = hdual.evolve_quantum(0.3, harmonic, [0, 1, 0, 0, 0, 0], 2 * math.pi, 1e-3, "egorov")
    for a, b in zip(tr["coeffs"], qt["coeffs"]):
        assert a == pytest.approx(b, abs=1e-8)
    assert hdual.paper_time_factor(0.3) == pytest.approx(-1 / (4 * math.pi**2))


def test_simulate_and_errors():
    csv = hdual.simulate({"hamiltonian": "free", "observable": "q", "t-end": "1", "dt": "0.5"})
    lines = csv.strip().splitlines()
    assert lines[0] == "t,c_1,c_q,c_p,c_qq,c_qp,c_pp"
    assert len(lines) == 4
    with pytest.raises(hdual.ConfigError, match="'hbar'"):
        hdual.simulate({"hamiltonian": "free", "observable": "q", "hbar": "0"})
    with pytest.raises(hdual.InvalidStep):
        hdual.evolve_classical([0] * 6, [0] * 6, 1.0, 0.0)
    with pytest.raises(hdual.ParseError):
        hdual.parse_expr("q^")


def test_checks_pass():
    results = hdual.run_checks()
    assert len(results) == 21
    assert all(r["passed"] for r in results)
