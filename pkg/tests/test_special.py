import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special as sc

from bcprabhakar.bicomplex import E1, E2, ONE, Bicomplex
from bcprabhakar.errors import DomainError, GammaPole, InvalidOrder, NonConvergent
from bcprabhakar.oracle import ml3_mp
from bcprabhakar.special import (
    MLParams,
    bicomplex_gamma,
    bicomplex_k_gamma,
    complex_gamma,
    kernel_values,
    ml1,
    ml2,
    ml3,
    ml_k3,
    ml_series,
    pochhammer,
    pochhammer2,
    prabhakar_kernel,
)


def _c(lo, hi, im=0.3):
    return st.builds(complex, st.floats(lo, hi), st.floats(-im, im))


# -- Gamma family ----------------------------------------------------------


def test_gamma_examples():
    assert complex_gamma(1) == 1
    assert abs(complex_gamma(0.5) - math.sqrt(math.pi)) < 1e-14
    with pytest.raises(GammaPole):
        complex_gamma(-1)


def test_bicomplex_gamma_examples():
    assert bicomplex_gamma(2) == ONE
    assert bicomplex_gamma(3 * E1 + 2 * E2).isclose(Bicomplex(2, 1), rtol=1e-14)
    with pytest.raises(GammaPole) as exc:
        bicomplex_gamma(-2 * E1 + E2)
    assert exc.value.component == 1


def test_k_gamma_examples():
    assert bicomplex_k_gamma(2, 1) == ONE
    assert bicomplex_k_gamma(2, 2).isclose(ONE, rtol=1e-15)
    g = bicomplex_k_gamma(6, 3)
    assert abs(g.xi1 - 3) < 1e-14 and abs(g.xi2 - 3) < 1e-14


def test_k_gamma_against_mpmath():
    for z, k in [(2.5 + 0.4j, 1.7), (0.3 - 1.1j, 0.6), (4.2, 2.5)]:
        ref = complex(mpmath.power(k, z / k - 1) * mpmath.gamma(z / k))
        got = bicomplex_k_gamma(Bicomplex(z, z), k).xi1
        assert abs(got - ref) <= 1e-13 * abs(ref)


def test_pochhammer_examples():
    assert pochhammer2(Bicomplex(0.3 + 2j, -4.1), 0) == ONE
    for u in range(8):
        assert pochhammer2(1, u) == math.factorial(u) * ONE
    for u in range(1, 6):
        assert pochhammer2(0, u).is_zero


@given(_c(0.2, 6.0, 2.0), st.integers(0, 40))
def test_pochhammer_matches_gamma_ratio(l, u):
    ratio = complex(np.exp(sc.loggamma(l + u) - sc.loggamma(l)))
    assert abs(pochhammer(l, u) - ratio) <= 1e-11 * abs(ratio)


# -- Mittag-Leffler family -------------------------------------------------


def test_ml3_examples():
    v, diag = ml3(1, MLParams.of(m=1, n=1, l=1))
    assert abs(v.xi1 - math.e) < 1e-14 and diag.converged
    for m in (0.5, 1.7, Bicomplex(0.9 + 0.2j, 2.0)):
        v, _ = ml3(Bicomplex(3 - 1j, -7), MLParams.of(m=m, n=2, l=0))
        assert v == ONE
    v, _ = ml3(-(math.pi / 2) ** 2, MLParams.of(m=2, n=1, l=1))
    assert abs(v.xi1) < 1e-14 and abs(v.xi2) < 1e-14


def test_ml2_ml1_examples():
    assert ml1(0, Bicomplex(0.6, 1.3)) == ONE
    v = ml2(1, 1, 2)
    assert abs(v.xi1 - (math.e - 1)) < 1e-14


def test_invalid_parameters_rejected():
    with pytest.raises(InvalidOrder):
        ml3(1, MLParams.of(m=-0.5, n=1, l=1))
    with pytest.raises(InvalidOrder):
        ml3(1, MLParams.of(m=1, n=Bicomplex(1, -0.2), l=1))


def test_kernel_examples():
    p = MLParams.of(m=1, n=2, l=0, r=0.7)
    assert prabhakar_kernel(3.0, p) == 3 * ONE
    v = prabhakar_kernel(2.0, MLParams.of(m=1, n=1, l=1, r=1))
    assert abs(v.xi1 - math.exp(2)) < 1e-13
    n = 1.5 * E1 + 2 * E2
    v = prabhakar_kernel(4.0, MLParams.of(m=1, n=n, l=1, r=0))
    assert abs(v.xi1 - 4**0.5 / math.gamma(1.5)) < 1e-15
    assert abs(v.xi2 - 4.0) < 1e-15


def test_kernel_domain_and_guard():
    p = MLParams.of(m=1, n=1, l=1, r=1)
    with pytest.raises(DomainError):
        prabhakar_kernel(0.0, p)
    with pytest.raises(NonConvergent):
        prabhakar_kernel(60.0, p)


_m = _c(0.5, 2.0, 0.2)
_n = _c(0.5, 2.5, 0.3)
_l = _c(-1.0, 2.0, 0.5)
_z = st.builds(complex, st.floats(-2.0, 2.0), st.floats(-2.0, 2.0))


@given(_m, _n, _l, _m, _n, _l, _z, _z)
def test_componentwise_consistency(m1, n1, l1, m2, n2, l2, z1, z2):
    p = MLParams(Bicomplex(m1, m2), Bicomplex(n1, n2), Bicomplex(l1, l2), Bicomplex(0, 0))
    v, _ = ml3(Bicomplex(z1, z2), p)
    assert v.xi1 == complex(ml_series(z1, m1, n1, l1)[0])
    assert v.xi2 == complex(ml_series(z2, m2, n2, l2)[0])


@given(_m, _n, _l, _z, st.integers(0, 50))
def test_term_recurrence(m, n, l, z, u):
    def term(v):
        return mpmath.rf(l, v) * mpmath.mpc(z) ** v / (mpmath.factorial(v) * mpmath.gamma(m * v + n))

    with mpmath.workdps(30):
        t_u, t_next = complex(term(u)), complex(term(u + 1))
    recur = z * (l + u) * complex_gamma(m * u + n) / ((u + 1) * complex_gamma(m * (u + 1) + n))
    assert abs(t_u * recur - t_next) <= 1e-10 * abs(t_next) or abs(t_next) < 1e-300


def _peak_term(z, m, n, l, terms=400):
    u = np.arange(terms)
    logs = (
        sc.loggamma(l + u) - sc.loggamma(l) - sc.loggamma(u + 1) - sc.loggamma(m * u + n) + u * np.log(abs(z) + 1e-300)
    )
    return float(np.max(np.exp(logs.real)))


@given(_c(0.8, 2.0, 0.2), _n, _c(0.2, 2.0, 0.5), st.floats(0, 10), st.floats(-math.pi, math.pi))
def test_halving_tol_is_stable(m, n, l, radius, phase):
    z = radius * complex(math.cos(phase), math.sin(phase))
    tol = 1e-10
    a = complex(ml_series(z, m, n, l, tol=tol)[0])
    b = complex(ml_series(z, m, n, l, tol=tol / 2)[0])
    # tolerance is relative to the partial sum, floored at 1e-3 of the largest term
    ref = max(abs(b), 1e-3 * _peak_term(z, m, n, l))
    assert abs(a - b) <= tol * ref


@given(_m, _n, _l, _z, _z)
def test_special_case_lattice(m, n, l, z1, z2):
    zeta = Bicomplex(z1, z2)
    p = MLParams(Bicomplex(m, m), Bicomplex(n, n), Bicomplex(l, l), Bicomplex(0, 0))
    v3, _ = ml3(zeta, p.replace(l=1))
    assert v3.isclose(ml2(zeta, p.m, p.n), rtol=1e-12)
    assert ml2(zeta, p.m, 1).isclose(ml1(zeta, p.m), rtol=1e-12)
    vk, _ = ml_k3(zeta, p.replace(k=1.0))
    assert vk.isclose(ml3(zeta, p)[0], rtol=1e-12)


@given(_m, _n, _l, _z)
def test_series_matches_extended_precision(m, n, l, z):
    ref = ml3_mp(z, m, n, l)
    got = complex(ml_series(z, m, n, l)[0])
    assert abs(got - ref) <= 1e-10 * max(abs(ref), 1e-3 * _peak_term(z, m, n, l))


@given(_m, _n, _l, _z)
def test_diagnostics_consistent(m, n, l, z):
    tol = 1e-12
    p = MLParams(Bicomplex(m, m), Bicomplex(n, n), Bicomplex(l, l), Bicomplex(0, 0))
    _, d = ml3(Bicomplex(z, z), p, tol=tol)
    assert d.terms_used >= 1
    assert d.tail_estimate >= 0
    assert d.converged == (d.tail_estimate <= tol)


def test_nonconvergent_when_term_budget_exhausted():
    with pytest.raises(NonConvergent):
        ml3(30.0, MLParams.of(m=1, n=1, l=1), max_terms=5)


def test_kernel_values_zero_point():
    t = np.array([0.0, 0.5, 1.0])
    vals = kernel_values(t, 1.0, 1.0, 1.0, 0.5)
    assert vals[0] == 1.0
    np.testing.assert_allclose(vals, np.exp(0.5 * t), rtol=1e-14)
