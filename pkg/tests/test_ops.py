import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import gamma, rgamma

from bcprabhakar.bicomplex import ONE, Bicomplex
from bcprabhakar.errors import GridTooCoarse, InvalidOrder, MismatchedCeil
from bcprabhakar.ops import (
    Grid,
    OperatorKind,
    OperatorSpec,
    SampledFn,
    apply_operator,
    boundedness_constant,
    initial_derivatives,
    prabhakar_derivative,
    prabhakar_integral,
    regularized_derivative,
    regularized_derivative_dual,
    rl_derivative,
    rl_integral,
    sampled_kernel,
)
from bcprabhakar.special import MLParams, kernel_values

from .conftest import sup_rel

GRID = Grid(0.0, 2.0, 257)
T = GRID.nodes
POS = T > 0

P = MLParams(Bicomplex(0.8 + 0.1j, 1.2 - 0.1j), Bicomplex(1.3 + 0.2j, 1.6), Bicomplex(0.7 + 0.3j, 1.4), Bicomplex(-0.8 + 0.5j, 0.6))
P_FRAC = P.replace(n=Bicomplex(0.6 + 0.1j, 0.8))


def _fn(values, grid=GRID):
    return SampledFn(grid, values)


def _psi(t):
    return Bicomplex(1 + 0.5j * t - 0.3 * t**2 + 0.1j * t**3, 0.5 - t + 0.2j * t**2 + 0.05 * t**4)


def _kernel_bc(t, p):
    return Bicomplex(*(kernel_values(t, *p.component(i)) for i in range(2)))


# -- Riemann-Liouville -------------------------------------------------------


def test_rl_integral_of_one_and_t():
    one = rl_integral(_fn(ONE), 1)
    np.testing.assert_allclose(one.values.xi1, T, rtol=1e-14, atol=1e-15)
    lin = rl_integral(_fn(Bicomplex(T, T)), 1)
    np.testing.assert_allclose(lin.values.xi2, T**2 / 2, rtol=1e-13, atol=1e-15)


def test_rl_half_integral_of_t():
    out = rl_integral(_fn(Bicomplex(T, T)), 0.5)
    exact = T**1.5 * 4 / (3 * math.sqrt(math.pi))
    np.testing.assert_allclose(out.values.xi1, exact, rtol=1e-12, atol=1e-15)


def test_rl_derivative_integer_order():
    out = rl_derivative(_fn(Bicomplex(T**2, T**2)), 1)
    assert np.max(np.abs(out.values.xi1[1:-1] - 2 * T[1:-1])) <= 1e-10 * 4


def test_rl_half_derivative_of_t():
    out = rl_derivative(_fn(Bicomplex(T, T)), 0.5)
    exact = 2 * np.sqrt(T / math.pi)
    assert np.max(np.abs(out.values.xi1[POS] - exact[POS])) <= 1e-10


def test_rl_orders_validated():
    f = _fn(ONE)
    with pytest.raises(InvalidOrder):
        rl_integral(f, Bicomplex(0.5, -0.1))
    with pytest.raises(MismatchedCeil):
        rl_derivative(f, Bicomplex(0.5, 1.5))
    with pytest.raises(GridTooCoarse):
        rl_derivative(_fn(ONE, Grid(0, 1, 7)), 1.5)


def test_split_order_decouples_components():
    f = _fn(_psi(T))
    both = rl_derivative(f, Bicomplex(0.5, 1.5), split_order=True)
    first = rl_derivative(f, Bicomplex(0.5, 0.5))
    second = rl_derivative(f, Bicomplex(1.5, 1.5))
    np.testing.assert_array_equal(both.values.xi1, first.values.xi1)
    np.testing.assert_array_equal(both.values.xi2, second.values.xi2)


def test_integer_power_flags():
    f = _fn(_psi(T))
    assert f.integer_powers == (True, True)
    half = rl_integral(f, Bicomplex(0.5, 0.7 + 0.1j))
    assert half.integer_powers == (False, False)
    assert rl_integral(f, Bicomplex(1, 0.5)).integer_powers == (True, False)
    assert (half + 1.0).integer_powers == (True, True)
    assert (half * 2.0).integer_powers == (False, False)
    # t^1.5 * t^1.5 = t^3
    assert (half * half).integer_powers[0]
    k = sampled_kernel(GRID, MLParams.of(m=1, n=2, l=1, r=0.5))
    assert k.integer_powers == (True, True)


def test_rl_derivative_of_polynomial_converges_up_to_a():
    c = [1, 0.5j, -0.3, 0.1j]
    n = Bicomplex(0.6 + 0.1j, 1.4)
    errs = []
    for npts in (129, 257, 513):
        grid = Grid(0.0, 2.0, npts)
        t = grid.nodes[1:]
        f = SampledFn(grid, Bicomplex(np.polyval(c[::-1], grid.nodes), np.polyval(c[::-1], grid.nodes)))
        out = rl_derivative(f, Bicomplex(n.xi1, n.xi1))
        exact = sum(ck * gamma(k + 1) * rgamma(k + 1 - n.xi1) * t ** (k - n.xi1) for k, ck in enumerate(c))
        errs.append(np.max(np.abs(out.values.xi1[1:] - exact) / np.abs(exact)))
    assert errs[-1] <= 1e-4
    assert math.log2(errs[-2] / errs[-1]) >= 1.8


# -- Prabhakar integral --------------------------------------------------------


def test_prabhakar_integral_l0_is_rl():
    f = _fn(_psi(T))
    a = prabhakar_integral(f, P.replace(l=0))
    b = rl_integral(f, P.n)
    assert sup_rel(a.values, b.values) <= 1e-12


def test_prabhakar_integral_of_one():
    out = prabhakar_integral(_fn(ONE), P)
    exact = _kernel_bc(T, P.replace(n=P.n + 1))
    assert sup_rel(out.values, exact) <= 1e-12


def test_prabhakar_integral_of_kernel():
    q = MLParams(P.m, Bicomplex(1.2 + 0.1j, 1.5), Bicomplex(0.5 - 0.2j, 0.3), P.r)
    out = prabhakar_integral(sampled_kernel(GRID, q), P)
    exact = _kernel_bc(T, MLParams(P.m, P.n + q.n, P.l + q.l, P.r))
    assert sup_rel(out.values, exact) <= 1e-5


# -- derivatives ---------------------------------------------------------------


def test_prabhakar_derivative_l0_is_rl():
    f = _fn(_psi(T))
    for n in (Bicomplex(0.6 + 0.1j, 0.8), Bicomplex(1.4, 1.7 - 0.2j)):
        a = prabhakar_derivative(f, P.replace(n=n, l=0))
        b = rl_derivative(f, n)
        assert sup_rel(a.values, b.values, POS) <= 1e-10


def test_prabhakar_derivative_of_constant():
    n = Bicomplex(0.3 + 0.1j, 0.7)
    c = Bicomplex(2 - 1j, 0.5)
    out = prabhakar_derivative(_fn(c), P.replace(n=n, l=0))
    x = T[POS]
    exact = [ci * x ** (-ni) * rgamma(1 - ni) for ci, ni in zip(c.components, n.components)]
    for got, ref in zip(out.values.components, exact):
        assert np.max(np.abs(got[POS] - ref) / np.abs(ref)) <= 1e-10


def test_prabhakar_derivative_of_kernel():
    q = MLParams(P.m, Bicomplex(2.1 + 0.1j, 2.3), P.l, P.r)
    out = prabhakar_derivative(sampled_kernel(GRID, q), P.replace(n=Bicomplex(0.6 + 0.1j, 0.8), l=0))
    # l = 0 removes the kernel parameter l from the shifted result
    exact = _kernel_bc(T, q.replace(n=q.n - Bicomplex(0.6 + 0.1j, 0.8)))
    assert sup_rel(out.values, exact, POS) <= 1e-5


def test_prabhakar_derivative_mismatched_ceiling():
    with pytest.raises(MismatchedCeil):
        prabhakar_derivative(_fn(ONE), P.replace(n=Bicomplex(0.5, 1.5)))


def test_regularized_derivative_of_constant_is_zero():
    out = regularized_derivative(_fn(Bicomplex(3 + 1j, -2)), P)
    assert np.max(np.abs(out.values.xi1)) <= 1e-12
    assert np.max(np.abs(out.values.xi2)) <= 1e-12


def test_regularized_derivative_caputo_power():
    n = Bicomplex(0.4 + 0.1j, 0.7)
    out = regularized_derivative(_fn(Bicomplex(T, T)), P.replace(n=n, l=0))
    for got, ni in zip(out.values.components, n.components):
        ref = T[POS] ** (1 - ni) * rgamma(2 - ni)
        assert np.max(np.abs(got[POS] - ref) / np.abs(ref)) <= 1e-10


@pytest.mark.parametrize("n", [Bicomplex(0.6 + 0.1j, 0.8), Bicomplex(1.4 + 0.1j, 1.7)])
def test_regularized_two_forms_agree(n):
    f = _fn(_psi(T))
    p = P.replace(n=n)
    a = regularized_derivative(f, p)
    b = regularized_derivative_dual(f, p)
    assert sup_rel(a.values, b.values, T >= 0.1) <= 1e-4


def test_initial_derivatives_of_polynomial():
    d = initial_derivatives(_fn(_psi(T)), 2)
    assert abs(d[0].xi1 - 1) < 1e-12 and abs(d[1].xi1 - 0.5j) < 1e-5


def test_apply_operator_dispatch():
    f = _fn(_psi(T))
    spec = OperatorSpec(OperatorKind.PRABHAKAR_INTEGRAL, p=P)
    assert apply_operator(spec, f).values == prabhakar_integral(f, P).values
    with pytest.raises(InvalidOrder):
        apply_operator(OperatorSpec(OperatorKind.RL_INTEGRAL), f)


# -- boundedness -----------------------------------------------------------------


def test_boundedness_l0_single_term():
    p = P.replace(l=0)
    k = boundedness_constant(p, 0.0, 1.5)
    for got, n in zip((k.d1, k.d2), p.n.components):
        ref = 1.5**n.real / (abs(gamma(n)) * n.real)
        assert math.isclose(got, ref, rel_tol=1e-13)


def test_boundedness_vanishes_on_short_intervals():
    prev = boundedness_constant(P, 0.0, 1.0)
    for k in range(1, 12):
        cur = boundedness_constant(P, 0.0, 2.0**-k)
        assert cur.d1 < prev.d1 and cur.d2 < prev.d2
        prev = cur
    assert prev.max() < 1e-3


def test_boundedness_inequality(rng):
    grid = Grid(0.0, 1.0, 513)
    t = grid.nodes
    k = boundedness_constant(P, 0.0, 1.0)
    for _ in range(20):
        c = rng.normal(size=(2, 4)) + 1j * rng.normal(size=(2, 4))
        f = SampledFn(grid, Bicomplex(*(np.polyval(ci, t) * np.cos(3 * t * ci[0].real) for ci in c)))
        out = prabhakar_integral(f, P)
        assert out.l1_norm().d1 <= k.d1 * f.l1_norm().d1
        assert out.l1_norm().d2 <= k.d2 * f.l1_norm().d2


# -- linearity ---------------------------------------------------------------------

_coef = st.complex_numbers(min_magnitude=0.01, max_magnitude=3, allow_nan=False, allow_infinity=False)

LIN_GRID = Grid(0.0, 1.0, 129)
LIN_T = LIN_GRID.nodes
F = SampledFn(LIN_GRID, _psi(LIN_T))
G = SampledFn(LIN_GRID, Bicomplex(np.exp(-LIN_T) + 0.3j, np.sin(2 * LIN_T)))
OPS = {
    "pint": lambda f: prabhakar_integral(f, P),
    "rl-int": lambda f: rl_integral(f, Bicomplex(0.6 + 0.2j, 0.9)),
    "pder": lambda f: prabhakar_derivative(f, P_FRAC),
    "cder": lambda f: regularized_derivative(f, P_FRAC),
}
OUT_F = {k: op(F) for k, op in OPS.items()}
OUT_G = {k: op(G) for k, op in OPS.items()}


def _combine(c, d):
    return Bicomplex(*c), Bicomplex(*d)


@pytest.mark.parametrize("name", sorted(OPS))
@given(c=st.tuples(_coef, _coef), d=st.tuples(_coef, _coef))
def test_linearity(name, c, d):
    c, d = _combine(c, d)
    lhs = OPS[name](F * c + G * d).values
    rhs = OUT_F[name].values * c + OUT_G[name].values * d
    for x, y in zip(lhs.components, rhs.components):
        x, y = x[1:], y[1:]
        assert np.max(np.abs(x - y)) <= 1e-12 * np.max(np.abs(y))


@given(c=st.tuples(_coef, _coef), d=st.tuples(_coef, _coef))
def test_linearity_second_order_derivative(c, d):
    # kappa = 2: the second difference scales rounding in the inner integral
    # by 4/h^2, so the bound is that rounding level rather than a fixed 1e-12
    c, d = _combine(c, d)
    mixed = F * c + G * d
    lhs = prabhakar_derivative(mixed, P).values
    rhs = prabhakar_derivative(F, P).values * c + prabhakar_derivative(G, P).values * d
    inner_p = MLParams(P.m, Bicomplex(2, 2) - P.n, -P.l, P.r)
    inner = prabhakar_integral(mixed, inner_p).values
    eps = np.finfo(float).eps
    for x, y, w in zip(lhs.components, rhs.components, inner.components):
        bound = 64 * eps * np.max(np.abs(w)) / LIN_GRID.h**2
        assert np.max(np.abs(x[1:] - y[1:])) <= max(bound, 1e-12 * np.max(np.abs(y[1:])))


def test_l1_norm_matches_quadrature():
    f = _fn(_psi(T))
    ref = integrate.quad(lambda s: abs(_psi(s).xi1), 0, 2)[0]
    assert math.isclose(f.l1_norm().d1, ref, rel_tol=1e-4)
