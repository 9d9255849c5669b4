"""Cauchy problems for the regularized Prabhakar derivative.

Homogeneous problem::

    ^C D^l_{m,n,r,0+} f = A f,    f^(q)(0+) = tau_q,  q < kappa = ceil(Re n)

solved by the double series

    f(t) = sum_q sum_j A^j t^(n j + q) E^(j l)_{m, n j + q + 1}(r t^m) tau_q.

Nonhomogeneous problem (``kappa = 1``)::

    ^C D^l_{m,n,r,0+} f + k f = g,    f(0+) = tau_0

solved as ``f = h * g + tau_0 L^-1{xi^(n-1) (1 - r xi^-m)^l H}`` with
``H = 1 / (xi^n (1 - r xi^-m)^l + k)`` and ``h = L^-1{H}``, the inverse
transforms taken on a Talbot contour.  With ``k = 0`` ``h`` is the Prabhakar
kernel and the solution reduces to ``tau_0 + E^l_{m,n,r,0+} g``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma

from .bicomplex import Bicomplex, HyperbolicNumber, as_bicomplex, cpow
from .errors import ArityMismatch, DomainError, NonConvergent
from .laplace import contour_for, inverse_lt, singular_points
from .ops import (
    Grid,
    OperatorResult,
    SampledFn,
    _normalize_exps,
    _series_exps,
    apply_product_weights,
    derivative_order,
    prabhakar_integral,
    product_weights,
    regularized_derivative,
)
from .special import DEFAULT_TOL, MLParams, kernel_values

__all__ = [
    "CauchyProblem",
    "solve_homogeneous",
    "solve_nonhomogeneous",
    "solve_corollary",
    "solve",
    "residual_check",
    "resolvent_kernel",
]

MODES = ("homogeneous", "nonhomogeneous", "corollary")


@dataclass(frozen=True)
class CauchyProblem:
    """Data of a homogeneous (``A``) or nonhomogeneous (``k_const``, ``g``) problem.

    Parameters
    ----------
    p : MLParams
    taus : tuple of Bicomplex
        Initial values ``f^(q)(0+)``, ``q = 0..kappa-1``.
    grid : Grid
        Output grid; must start at 0.
    A : Bicomplex, optional
        Coefficient of the homogeneous equation.
    k_const : Bicomplex, optional
        Constant of the nonhomogeneous equation.
    g : SampledFn, optional
        Forcing on ``grid``; ``None`` means zero.
    """

    p: MLParams
    taus: tuple
    grid: Grid
    A: Bicomplex | None = None
    k_const: Bicomplex | None = None
    g: SampledFn | None = None
    mode: str = field(default="")

    def __post_init__(self):
        self.p.validate()
        object.__setattr__(self, "taus", tuple(as_bicomplex(v) for v in self.taus))
        if self.A is not None:
            object.__setattr__(self, "A", as_bicomplex(self.A))
        if self.k_const is not None:
            object.__setattr__(self, "k_const", as_bicomplex(self.k_const))
        if not self.mode:
            object.__setattr__(self, "mode", "homogeneous" if self.A is not None else "nonhomogeneous")
        if self.mode not in MODES:
            raise DomainError(f"unknown problem mode {self.mode!r}; expected one of {', '.join(MODES)}")
        if self.grid.a != 0:
            raise DomainError(f"Cauchy problems are posed on a grid starting at 0, got a={self.grid.a:g}")
        if self.g is not None and self.g.grid != self.grid:
            raise DomainError("forcing g must be sampled on the problem grid")
        kappa = self.kappa
        if len(self.taus) != kappa:
            raise ArityMismatch(f"need kappa=ceil(Re n)={kappa} initial values tau_0..tau_{kappa - 1}, got {len(self.taus)}")

    @property
    def kappa(self) -> int:
        return derivative_order(self.p.n)[0]

    @property
    def k(self) -> Bicomplex:
        return self.k_const if self.k_const is not None else Bicomplex(0, 0)

    def forcing(self) -> SampledFn:
        if self.g is not None:
            return self.g
        return SampledFn(self.grid, Bicomplex(0, 0))


# -- homogeneous --------------------------------------------------------------


def _homogeneous_basis(t, m, n, l, r, A, q, J_max, tol):
    """``sum_j A^j t^(n j + q) E^(j l)_{m, n j + q + 1}(r t^m)``; returns values, exponents, terms used."""
    total = np.zeros_like(t, dtype=complex)
    e = []
    quiet = 0
    for j in range(J_max + 1):
        coef = A**j
        if coef == 0:
            term = np.zeros_like(total)
        else:
            term = coef * kernel_values(t, m, n * j + q + 1, j * l, r, DEFAULT_TOL)
            e.extend(_series_exps(n * j + q, m, j * l, r))
        total += term
        if float(np.max(np.abs(term))) <= tol * max(1.0, float(np.max(np.abs(total)))):
            quiet += 1
            if quiet >= 2:
                return total, e, j + 1
        else:
            quiet = 0
    return None, e, J_max + 1


def solve_homogeneous(prob: CauchyProblem, J_max: int = 400, tol: float = 1e-13) -> OperatorResult:
    """Double-series solution of the homogeneous problem.

    Each basis function ``sum_j A^j t^(n j + q) E^(j l)_{m,n j+q+1}(r t^m)``
    is summed until two consecutive ``j``-terms have sup-norm over the grid
    at most ``tol max(1, |partial sum|)``; the solution is their combination
    with the ``tau_q``, so it is linear in the initial data.

    Raises
    ------
    NonConvergent
        If ``J_max`` outer terms do not reach the tolerance.
    """
    if prob.A is None:
        raise DomainError("homogeneous problem needs the coefficient A")
    t = prob.grid.nodes
    comps, exps, used = [], [], []
    for i in range(2):
        m, n, l, r = prob.p.component(i)
        A = complex(prob.A.components[i])
        total = np.zeros_like(t, dtype=complex)
        e, terms = [], 0
        for q, v in enumerate(prob.taus):
            tau = complex(v.components[i])
            if tau == 0:
                continue
            basis, eq, jq = _homogeneous_basis(t, m, n, l, r, A, q, J_max, tol)
            if basis is None:
                raise NonConvergent(
                    f"homogeneous series: outer sum not below tol={tol:g} after J_max={J_max} terms in component {i + 1} "
                    f"(needs |A xi^-(n-ml) (xi^m - r)^-l|_j to precede 1)"
                )
            total += tau * basis
            e.extend(eq)
            terms = max(terms, jq)
        comps.append(total)
        exps.append(_normalize_exps(e))
        used.append(terms)
    return OperatorResult(
        prob.grid, Bicomplex(*comps), tuple(exps), scheme="double series", info={"outer_terms": tuple(used)}
    )


# -- nonhomogeneous -------------------------------------------------------------


def _symbol(s, m, n, l, r):
    return cpow(s, n) * cpow(1 - r * cpow(s, -m), l)


def _resolvent_component(m, n, l, r, k, grid: Grid, g: np.ndarray, g_exps: tuple, tau: complex, tol: float):
    """``h * g + tau L^-1{symbol H / xi}`` on the grid for one component."""
    contour = contour_for(singular_points(m, n, l, r, k))

    def H(s):
        return 1.0 / (_symbol(s, m, n, l, r) + k)

    h = grid.h
    x = h * np.arange(1, grid.n_points + 1, dtype=float)

    def inv(F, pts):
        return inverse_lt(F, pts, contour, tol=tol, scalar=True)

    k1 = np.concatenate([[0j], inv(lambda s: H(s) / s, x)])
    k2 = np.concatenate([[0j], inv(lambda s: H(s) / s**2, x)])

    def image(xs, sigma):
        out = np.zeros(xs.size, dtype=complex)
        pos = xs > 0
        c = complex(_gamma(sigma + 1))
        out[pos] = c * inv(lambda s: H(s) * cpow(s, -sigma - 1), xs[pos])
        return out

    hg = apply_product_weights(g, product_weights(k1, k2, h, grid.n_points, g_exps, image))

    t = grid.nodes
    free = np.full(t.size, tau, dtype=complex)
    check = 0.0
    if tau != 0 and k != 0:
        free[1:] = tau * inv(lambda s: _symbol(s, m, n, l, r) * H(s) / s, t[1:])
        # the same term is tau (1 - k int_0^t h)
        check = float(np.max(np.abs(free - tau * (1 - k * k1[: t.size]))))
    return hg + free, check


def resolvent_kernel(p: MLParams, k, t, tol: float = 1e-10) -> Bicomplex:
    """``h(t) = L^-1{1 / (xi^n (1 - r xi^-m)^l + k)}`` at ``t > 0``, componentwise.

    Raises
    ------
    DomainError
        If some ``t <= 0``.
    InversionUnstable
        If the Talbot node-doubling check fails at ``tol``.
    """
    p.validate()
    k = as_bicomplex(k)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    comps = []
    for i in range(2):
        m, n, l, r = p.component(i)
        ki = complex(k.components[i])
        contour = contour_for(singular_points(m, n, l, r, ki))
        comps.append(inverse_lt(lambda s: 1.0 / (_symbol(s, m, n, l, r) + ki), t, contour, tol=tol, scalar=True))
    return Bicomplex(*comps)


def _solution_exps(m, n, l, r, k, g_exps):
    out = []
    jmax = 0 if k == 0 else 64
    for j in range(jmax + 1):
        base = n * (j + 1)
        if base.real >= 2:
            break
        for s in (0j,) + tuple(g_exps):
            out.extend(_series_exps(base + s, m, (j + 1) * l, r))
    return _normalize_exps(out)


def solve_nonhomogeneous(prob: CauchyProblem, tol: float = 1e-10) -> OperatorResult:
    """Transform-based solution of ``^C D^l f + k f = g``, ``f(0+) = tau_0``.

    ``h = L^-1{H}`` enters only through its first two antiderivatives
    ``L^-1{H / xi}`` and ``L^-1{H / xi^2}``, which give product-integration
    weights for ``h * g`` exactly as for the Prabhakar kernel.

    Raises
    ------
    ArityMismatch
        If ``kappa != 1``.
    InversionUnstable
        If a Talbot inversion fails its node-doubling check at ``tol``.
    """
    if prob.kappa != 1:
        raise ArityMismatch(
            f"nonhomogeneous solver handles a single initial value (kappa=ceil(Re n)=1), got kappa={prob.kappa}"
        )
    g = prob.forcing()
    comps, exps, checks = [], [], []
    for i in range(2):
        m, n, l, r = prob.p.component(i)
        k = complex(prob.k.components[i])
        vals, check = _resolvent_component(
            m, n, l, r, k, prob.grid, g.components[i], g.exponents[i], complex(prob.taus[0].components[i]), tol
        )
        comps.append(vals)
        exps.append(_solution_exps(m, n, l, r, k, g.exponents[i]))
        checks.append(check)
    hyp = all(0 < prob.p.l.components[i].real < 1 for i in range(2))
    return OperatorResult(
        prob.grid,
        Bicomplex(*comps),
        tuple(exps),
        scheme="Talbot inversion + product-integration",
        info={"free_term_crosscheck": tuple(checks), "l_in_unit_interval": hyp},
    )


def solve_corollary(prob: CauchyProblem, tol: float = 1e-12) -> OperatorResult:
    """``k = 0`` solution ``tau_0 + E^l_{m,n,r,0+} g``.

    Raises
    ------
    ArityMismatch
        If ``kappa != 1``.
    """
    if prob.kappa != 1:
        raise ArityMismatch(f"corollary solution needs kappa=ceil(Re n)=1, got kappa={prob.kappa}")
    g = prob.forcing()
    conv = prabhakar_integral(g, prob.p, tol)
    tau = prob.taus[0]
    vals = Bicomplex(*(c + tau.components[i] for i, c in enumerate(conv.components)))
    return OperatorResult(prob.grid, vals, conv.exponents, scheme="Prabhakar integral of the forcing")


def solve(prob: CauchyProblem, **kwargs) -> OperatorResult:
    """Dispatch on ``prob.mode``."""
    if prob.mode == "homogeneous":
        return solve_homogeneous(prob, **kwargs)
    if prob.mode == "nonhomogeneous":
        return solve_nonhomogeneous(prob, **kwargs)
    return solve_corollary(prob, **kwargs)


def residual_check(f: SampledFn, prob: CauchyProblem) -> HyperbolicNumber:
    """Sup-norm over ``t > 0`` of ``^C D^l f - A f`` (homogeneous) or ``^C D^l f + k f - g``.

    The discrete derivative vanishes at ``t = 0`` by construction, so the
    first node is left out.
    """
    if f.grid != prob.grid:
        raise DomainError("solution is not sampled on the problem grid")
    d = regularized_derivative(f, prob.p)
    if prob.mode == "homogeneous":
        res = d.values - prob.A * f.values
    else:
        res = d.values + prob.k * f.values - prob.forcing().values
    return HyperbolicNumber(*(float(np.max(np.abs(c[1:]))) for c in res.components))
