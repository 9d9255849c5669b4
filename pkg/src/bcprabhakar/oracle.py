"""Extended-precision reference evaluations (mpmath).

These are deliberately naive: plain term-by-term summation at 40 digits with
four times the double-precision term budget.  They serve as the independent
oracle for the verification harness and the test-suite.
"""

from __future__ import annotations

import mpmath
import numpy as np

from .bicomplex import Bicomplex, as_bicomplex
from .special import MAX_TERMS, MLParams

DPS = 40


def ml3_mp(z, m, n, l, k=1.0, dps: int = DPS, max_terms: int = 4 * MAX_TERMS) -> complex:
    """Scalar ``sum (l)_u z^u / (u! Gamma_k(m u + n))`` summed at ``dps`` digits.

    The working precision is raised and the sum repeated when the largest
    term exceeds the result by more than ``dps - 20`` digits.
    """
    while True:
        total, peak = _ml3_mp_once(z, m, n, l, k, dps, max_terms)
        lost = float(mpmath.log10(peak / abs(total))) if total != 0 and peak > 0 else 0.0
        if lost <= dps - 20:
            return complex(total)
        dps = int(lost) + 30


def _ml3_mp_once(z, m, n, l, k, dps, max_terms):
    with mpmath.workdps(dps):
        z, m, n, l = (mpmath.mpc(x) for x in (z, m, n, l))
        k = mpmath.mpf(k)
        eps = mpmath.mpf(10) ** (-dps + 5)
        total = mpmath.mpc(0)
        poch = mpmath.mpc(1)
        zu = mpmath.mpc(1)
        fact = mpmath.mpf(1)
        small = 0
        peak = mpmath.mpf(0)
        for u in range(max_terms):
            if u:
                poch *= l + u - 1
                zu *= z
                fact *= u
            a = (m * u + n) / k
            rg = mpmath.rgamma(a)
            if k != 1:
                rg = rg / mpmath.power(k, a - 1)
            term = poch * zu * rg / fact
            total += term
            peak = max(peak, abs(term))
            if poch == 0 or zu == 0:
                break
            if abs(term) <= eps * max(abs(total), eps) and u > abs(z) ** (1 / max(float(mpmath.re(m)), 0.05)) + 2:
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
        else:
            raise ArithmeticError("oracle series did not converge")
        return +total, +peak


def ml3_mp_bicomplex(zeta, p: MLParams, *, use_k: bool = False) -> Bicomplex:
    zeta = as_bicomplex(zeta)
    k = p.k if use_k else 1.0
    comps = []
    for i in range(2):
        m, n, l, _ = p.component(i)
        comps.append(ml3_mp(zeta.components[i], m, n, l, k))
    return Bicomplex(*comps)


def kernel_mp(t, m, n, l, r, dps: int = DPS) -> np.ndarray:
    """Scalar kernel ``t^(n-1) E^l_{m,n}(r t^m)`` for each ``t > 0``."""
    out = []
    with mpmath.workdps(dps):
        for tt in np.atleast_1d(t):
            tt = mpmath.mpf(float(tt))
            zeta = mpmath.mpc(r) * mpmath.power(tt, mpmath.mpc(m))
            val = ml3_mp(complex(zeta), m, n, l, dps=dps)
            out.append(complex(mpmath.power(tt, mpmath.mpc(n) - 1) * val))
    return np.array(out)


def kernel_mp_bicomplex(t, p: MLParams) -> Bicomplex:
    return Bicomplex(*(kernel_mp(t, *p.component(i)) for i in range(2)))
