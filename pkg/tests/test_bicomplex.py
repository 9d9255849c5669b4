import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from bcprabhakar.bicomplex import (
    E1,
    E2,
    I1,
    I2,
    J,
    ONE,
    Bicomplex,
    HyperbolicNumber,
    bc_pow,
    ceil_re,
    div,
    from_complex_pair,
    from_real_components,
    is_zero_divisor,
    j_modulus,
    param_valid,
    precedes,
)
from bcprabhakar.errors import ZeroDivisorBase, ZeroDivisorDivision

reals = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
moderate = st.floats(min_value=-100, max_value=100, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, moderate, moderate)
bicomplexes = st.builds(Bicomplex, complexes, complexes)
invertible = bicomplexes.filter(lambda b: abs(b.xi1) > 1e-3 and abs(b.xi2) > 1e-3)


# -- examples ----------------------------------------------------------------


def test_from_real_components_examples():
    b = from_real_components(1, 0, 0, 1)
    assert (b.xi1, b.xi2) == (2, 0)
    z = from_real_components(0, 0, 0, 0)
    assert (z.xi1, z.xi2) == (0, 0)
    c = from_real_components(3, 4, -4, 5)
    assert c.xi1 == 8 + 8j
    assert c.xi2 == -2 + 0j


def test_unit_table():
    assert (E1 * E2).is_zero
    assert E1 * E1 == E1
    assert J * J == ONE
    assert I1 * I1 == -ONE
    assert I2 * I2 == -ONE
    assert I1 * I2 == J


def test_division_examples():
    q = div(ONE, Bicomplex(2, 1))
    assert (q.xi1, q.xi2) == (0.5, 1)
    with pytest.raises(ZeroDivisorDivision) as exc:
        ONE / E1
    assert exc.value.component == 2
    with pytest.raises(ZeroDivisorDivision) as exc:
        ONE / Bicomplex(0, 0)
    assert exc.value.component is None
    b = Bicomplex(1.5 - 2j, 0.25 + 3j)
    assert b / b == ONE


def test_pow_examples():
    x = Bicomplex(1.3 - 0.4j, -2 + 1j)
    assert bc_pow(x, 1) == x
    assert bc_pow(4, 0.5) == Bicomplex(2, 2)
    p = bc_pow(2 * E1 + 3 * E2, J)
    assert p.xi1 == 2
    assert math.isclose(p.xi2.real, 1 / 3, rel_tol=1e-15) and p.xi2.imag == 0


def test_pow_of_zero_divisor():
    assert bc_pow(E1, 2) == E1
    with pytest.raises(ZeroDivisorBase):
        bc_pow(E1, 0.5)


def test_modulus_and_order_examples():
    assert j_modulus(E1) == HyperbolicNumber(1.0, 0.0)
    assert precedes(0.5 * ONE, ONE)
    assert not precedes(2 * E1 + 0.1 * E2, ONE)


def test_zero_divisor_flags():
    assert is_zero_divisor(E1) and is_zero_divisor(E2)
    assert not is_zero_divisor(Bicomplex(0, 0))
    assert not is_zero_divisor(ONE)


def test_param_valid_examples():
    assert param_valid(from_real_components(1, 0, 0, 0.5), 0)
    assert not param_valid(from_real_components(0.5, 0, 0, 1), 0)
    assert param_valid(from_real_components(2, 0, 0, 0.5), 1)
    assert ceil_re(Bicomplex(1.2, 0.7)) == (2, 1)


def test_json_wire_form():
    b = from_real_components(0.1, -2.5, 3.0, 7e-3)
    assert Bicomplex.from_json(b.to_json()).to_real_components() == (0.1, -2.5, 3.0, 7e-3)
    assert Bicomplex.from_json(2.0) == 2 * ONE
    with pytest.raises(ValueError):
        Bicomplex.from_json({"x4": 1})


# -- properties --------------------------------------------------------------


@given(reals, reals, reals, reals)
def test_real_roundtrip_exact(x0, x1, x2, x3):
    assert from_real_components(x0, x1, x2, x3).to_real_components() == (x0, x1, x2, x3)


@given(complexes, complexes)
def test_complex_pair_roundtrip(z1, z2):
    b = from_complex_pair(z1, z2)
    assert b.xi1 == z1 - 1j * z2
    assert b.xi2 == z1 + 1j * z2
    w1, w2 = b.to_complex_pair()
    scale = max(abs(z1), abs(z2), 1.0)
    assert abs(w1 - z1) <= 4e-16 * scale and abs(w2 - z2) <= 4e-16 * scale


@given(bicomplexes, bicomplexes)
def test_multiplication_is_componentwise(a, b):
    p = a * b
    assert p.xi1 == a.xi1 * b.xi1
    assert p.xi2 == a.xi2 * b.xi2


@given(bicomplexes, bicomplexes, bicomplexes)
def test_commutative_and_associative(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == Bicomplex((a.xi1 * b.xi1) * c.xi1, (a.xi2 * b.xi2) * c.xi2)


@given(bicomplexes, bicomplexes, bicomplexes)
def test_distributive(a, b, c):
    lhs = a * (b + c)
    rhs = a * b + a * c
    # ulps of the partial-product magnitude; the sum itself may cancel
    for i in range(2):
        ai, bi, ci = a.components[i], b.components[i], c.components[i]
        scale = abs(ai) * (abs(bi) + abs(ci))
        assert abs(lhs.components[i] - rhs.components[i]) <= 4 * np.spacing(max(scale, 1e-300))


@given(bicomplexes, invertible)
def test_division_inverts_multiplication(a, b):
    q = div(a * b, b)
    for x, y in zip(q.components, a.components):
        assert abs(x - y) <= 1e-14 * max(abs(y), 1e-300) or abs(x - y) < 1e-300


@given(bicomplexes)
def test_j_modulus_nonnegative(a):
    m = j_modulus(a)
    assert m.d1 >= 0 and m.d2 >= 0


@given(bicomplexes, bicomplexes)
def test_precedes_definition(a, b):
    assert precedes(a, b) == (abs(a.xi1) < abs(b.xi1) and abs(a.xi2) < abs(b.xi2))


@st.composite
def _chains(draw):
    """Three bicomplex numbers whose moduli are sorted in each component."""
    comps = []
    for _ in range(2):
        mods = sorted(draw(st.lists(st.floats(0, 100), min_size=3, max_size=3)))
        phases = draw(st.lists(st.floats(-math.pi, math.pi), min_size=3, max_size=3))
        comps.append([r * complex(math.cos(p), math.sin(p)) for r, p in zip(mods, phases)])
    return [Bicomplex(comps[0][i], comps[1][i]) for i in range(3)]


@given(bicomplexes)
def test_precedes_irreflexive(a):
    assert not precedes(a, a)


@given(_chains())
def test_precedes_transitive(chain):
    a, b, c = chain
    assume(precedes(a, b) and precedes(b, c))
    assert precedes(a, c)


def test_param_valid_matches_real_inequality():
    grid = np.linspace(-2, 2, 81)
    for p0 in grid:
        for p3 in grid:
            m = from_real_components(p0, 0.3, -0.2, p3)
            assert param_valid(m, 0) == (abs(p3) < p0), (p0, p3)
