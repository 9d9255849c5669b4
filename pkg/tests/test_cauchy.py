import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import rgamma

from bcprabhakar.bicomplex import ONE, Bicomplex
from bcprabhakar.cauchy import (
    CauchyProblem,
    residual_check,
    resolvent_kernel,
    solve,
    solve_corollary,
    solve_homogeneous,
    solve_nonhomogeneous,
)
from bcprabhakar.errors import ArityMismatch, DomainError, NonConvergent
from bcprabhakar.ops import Grid, SampledFn
from bcprabhakar.special import MLParams, ml1

from .conftest import sup_rel

GRID = Grid(0.0, 2.0, 257)
T = GRID.nodes
P1 = MLParams(Bicomplex(0.8 + 0.1j, 1.1), Bicomplex(0.7 + 0.1j, 0.8), Bicomplex(0.5 + 0.2j, 0.3), Bicomplex(-0.5 + 0.3j, 0.4))


def _forcing(grid=GRID):
    t = grid.nodes
    return SampledFn(grid, Bicomplex(np.cos(t) + 0.2j * t, 1 - t**2 + 0.5j))


_unit = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)


# -- homogeneous ---------------------------------------------------------------


@given(_unit, _unit)
def test_homogeneous_exponential(a1, a2):
    A = Bicomplex(a1, a2)
    prob = CauchyProblem(MLParams.of(m=1, n=1, l=0, r=0.3), (ONE,), GRID, A=A)
    f = solve_homogeneous(prob)
    for comp, a in zip(f.values.components, (a1, a2)):
        assert np.max(np.abs(comp - np.exp(a * T))) <= 1e-10


def test_homogeneous_zero_coefficient_gives_taylor_polynomial():
    p = P1.replace(n=Bicomplex(1.5 + 0.1j, 1.7))
    taus = (Bicomplex(1 - 1j, 0.5), Bicomplex(0.3, -2j))
    f = solve_homogeneous(CauchyProblem(p, taus, GRID, A=0))
    ref = taus[0] + taus[1] * Bicomplex(T, T)
    assert sup_rel(f.values, ref) <= 1e-14


def test_homogeneous_one_parameter_ml():
    A = Bicomplex(-0.7 + 0.2j, 0.4)
    prob = CauchyProblem(MLParams.of(m=1, n=0.5, l=0, r=0.3), (ONE,), GRID, A=A)
    f = solve_homogeneous(prob)
    ref = ml1(A * Bicomplex(np.sqrt(T), np.sqrt(T)), 0.5)
    assert sup_rel(f.values, ref) <= 1e-10


def test_homogeneous_budget_exhausted():
    prob = CauchyProblem(P1, (ONE,), GRID, A=Bicomplex(0.9, -0.8))
    with pytest.raises(NonConvergent):
        solve_homogeneous(prob, J_max=2)


def test_homogeneous_residual_small():
    prob = CauchyProblem(P1, (Bicomplex(1.0, 0.5j),), Grid(0.0, 2.0, 1025), A=Bicomplex(-0.6 + 0.3j, 0.5))
    f = solve_homogeneous(prob)
    assert residual_check(f, prob).max() <= 1e-4


@settings(max_examples=25)
@given(_unit, _unit, _unit, _unit, st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_homogeneous_linear_in_initial_data(t1, t2, s1, s2, c):
    A = Bicomplex(-0.6 + 0.3j, 0.5)
    g = Grid(0.0, 2.0, 65)
    a, b = Bicomplex(t1, t2), Bicomplex(s1, s2)
    fa = solve_homogeneous(CauchyProblem(P1, (a,), g, A=A)).values
    fb = solve_homogeneous(CauchyProblem(P1, (b,), g, A=A)).values
    fab = solve_homogeneous(CauchyProblem(P1, (a + c * b,), g, A=A)).values
    expected = fa + fb * c
    for x, y in zip(fab.components, expected.components):
        scale = max(np.max(np.abs(fa.xi1)), np.max(np.abs(fa.xi2)), abs(c) * max(np.max(np.abs(fb.xi1)), np.max(np.abs(fb.xi2))))
        assert np.max(np.abs(x - y)) <= 1e-12 * max(scale, 1e-300)


def test_problem_validation():
    with pytest.raises(ArityMismatch):
        CauchyProblem(P1, (ONE, ONE), GRID, A=ONE)
    with pytest.raises(DomainError):
        CauchyProblem(P1, (ONE,), Grid(0.5, 2.0, 65), A=ONE)


# -- nonhomogeneous ------------------------------------------------------------


def test_nonhomogeneous_trivial_cases():
    tau = Bicomplex(1.2 - 0.3j, -0.4)
    f = solve_nonhomogeneous(CauchyProblem(P1, (tau,), GRID, k_const=0))
    assert sup_rel(f.values, tau * ONE) <= 1e-9
    c = Bicomplex(0.8 - 0.2j, 1.5)
    f = solve_nonhomogeneous(CauchyProblem(MLParams.of(m=1, n=1, l=0, r=0.3), (tau,), GRID, k_const=c))
    ref = Bicomplex(*(tc * np.exp(-cc * T) for tc, cc in zip(tau.components, c.components)))
    assert sup_rel(f.values, ref) <= 1e-9


def test_nonhomogeneous_at_zero_constant_is_corollary():
    tau = Bicomplex(1.0, 0.5j)
    a = solve_nonhomogeneous(CauchyProblem(P1, (tau,), GRID, k_const=0, g=_forcing()))
    b = solve_corollary(CauchyProblem(P1, (tau,), GRID, k_const=0, g=_forcing(), mode="corollary"))
    assert sup_rel(a.values, b.values) <= 1e-8


def test_nonhomogeneous_matches_homogeneous_overlap():
    A = Bicomplex(-0.6 + 0.3j, 0.5)
    tau = Bicomplex(1.0, 0.5j)
    hom = solve_homogeneous(CauchyProblem(P1, (tau,), GRID, A=A), tol=1e-13)
    tr = solve_nonhomogeneous(CauchyProblem(P1, (tau,), GRID, k_const=-A), tol=1e-10)
    assert sup_rel(hom.values, tr.values) <= 1e-9


def test_nonhomogeneous_needs_single_initial_value():
    p = P1.replace(n=Bicomplex(1.5, 1.6))
    with pytest.raises(ArityMismatch):
        solve_nonhomogeneous(CauchyProblem(p, (ONE, ONE), GRID, k_const=1))


def test_resolvent_kernel_exponential():
    t = np.array([0.3, 1.0, 2.5])
    h = resolvent_kernel(MLParams.of(m=1, n=1, l=0, r=0.3), 2.0, t)
    np.testing.assert_allclose(h.xi1, np.exp(-2 * t), rtol=1e-9)


# -- corollary -------------------------------------------------------------------


def test_corollary_examples():
    tau = Bicomplex(0.7, -1j)
    f = solve_corollary(CauchyProblem(P1, (tau,), GRID, k_const=0))
    assert sup_rel(f.values, tau * ONE) == 0
    p0 = P1.replace(l=0)
    f = solve_corollary(CauchyProblem(p0, (tau,), GRID, k_const=0, g=SampledFn(GRID, ONE)))
    ref = Bicomplex(*(tc + T**nc * rgamma(nc + 1) for tc, nc in zip(tau.components, p0.n.components)))
    assert sup_rel(f.values, ref) <= 1e-12


def test_corollary_residual_converges():
    errs = []
    for npts in (257, 513, 1025):
        g = Grid(0.0, 2.0, npts)
        prob = CauchyProblem(P1, (Bicomplex(1.0, 0.5j),), g, k_const=0, g=_forcing(g), mode="corollary")
        errs.append(residual_check(solve(prob), prob).max())
    assert errs[-1] <= 1e-5
    assert np.log2(errs[-2] / errs[-1]) >= 1.5


# -- residual check ----------------------------------------------------------------


def test_residual_exact_exponential():
    A = Bicomplex(-0.5 + 0.2j, 0.3)
    g = Grid(0.0, 2.0, 1025)
    prob = CauchyProblem(MLParams.of(m=1, n=1, l=0, r=0.3), (ONE,), g, A=A)
    f = SampledFn(g, Bicomplex(*(np.exp(a * g.nodes) for a in A.components)))
    base = residual_check(f, prob).max()
    assert base <= 1e-6
    bumped = residual_check(f + SampledFn(g, Bicomplex(1e-3 * g.nodes**2, 1e-3 * g.nodes**2)), prob).max()
    assert bumped - base > 1e-4


def test_residual_of_constant_caputo():
    tau = Bicomplex(0.4 + 1j, -2)
    prob = CauchyProblem(P1.replace(l=0), (tau,), GRID, k_const=0)
    assert residual_check(SampledFn(GRID, tau), prob).max() <= 1e-12
