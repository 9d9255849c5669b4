"""Fractional operators on sampled bicomplex-valued functions.

All operators are left-sided with lower terminal ``a`` and act on a
:class:`SampledFn` defined on a uniform :class:`Grid`.  Every integral
operator is a convolution ``(K * f)(t) = int_a^t K(t - s) f(s) ds`` and is
discretised by product integration: ``f`` is replaced by its piecewise
linear interpolant and the kernel is integrated exactly.  The only kernel
information the scheme needs are its first two antiderivatives

    K1(x) = int_0^x K,    K2(x) = int_0^x K1,

which for the Prabhakar kernel are again Prabhakar kernels,
``K1(x) = x^n E^l_{m,n+1}(r x^m)`` and ``K2(x) = x^(n+1) E^l_{m,n+2}(r x^m)``.
Weak singularities ``x^(n-1)`` of the kernel are therefore handled exactly,
and so is the delta part of the order-zero kernel (``K1(0+) = 1``) that
appears inside derivatives of integer order.

Piecewise-linear interpolation is poor near ``a`` for inputs that behave
like ``(t - a)^sigma`` with non-integer ``sigma``, which is exactly what
fractional operators produce from smooth data.  Each :class:`SampledFn`
therefore carries the non-integer leading exponents of its expansion at
``a`` (empty for smooth data), every operator propagates them, and the
integral rule adds starting weights on the first few nodes so that it is
exact for each tracked power.

Derivatives are built from the integrals with second-order finite
differences (one-sided at the boundaries).
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma, rgamma as _rgamma

from .bicomplex import Bicomplex, HyperbolicNumber, as_bicomplex, cpow, param_valid
from .errors import GridTooCoarse, InvalidOrder, MismatchedCeil, NonConvergent
from .special import KERNEL_ARG_GUARD, MLParams, kernel_values

__all__ = [
    "Grid",
    "SampledFn",
    "OperatorResult",
    "OperatorKind",
    "OperatorSpec",
    "rl_integral",
    "rl_derivative",
    "prabhakar_integral",
    "prabhakar_derivative",
    "regularized_derivative",
    "regularized_derivative_dual",
    "initial_derivatives",
    "sampled_kernel",
    "boundedness_constant",
    "apply_operator",
    "derivative_order",
]

#: kernel-series tolerance used by the operators
KERNEL_TOL = 1e-12
#: at most this many starting weights per component
MAX_CORRECTIONS = 6
# powers with Re(sigma) >= 2 are already integrated to O(h^2)
_SMOOTH_ABOVE = 2.0
_TRACK_ABOVE = 3.0
_MAX_TRACKED = 24
_EXP_TOL = 1e-9

SMOOTH = ((), ())
#: per component: may the expansion at ``a`` contain integer powers?
WITH_INTEGERS = (True, True)


@dataclass(frozen=True)
class Grid:
    """Uniform nodes ``t_i = a + i h`` on ``[a, b]``."""

    a: float
    b: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or not self.b > self.a:
            raise ValueError(f"grid needs finite a < b, got [{self.a}, {self.b}]")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ValueError(f"grid needs at least 2 points, got {self.n_points}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "n_points", int(self.n_points))

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n_points - 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.a + self.h * np.arange(self.n_points)

    def refined(self) -> "Grid":
        """Grid with halved spacing; its even nodes are this grid's nodes."""
        return Grid(self.a, self.b, 2 * self.n_points - 1)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "n_points": self.n_points}


# -- exponent bookkeeping ---------------------------------------------------


def _is_int(z: complex) -> bool:
    return abs(z.imag) < _EXP_TOL and abs(z.real - round(z.real)) < _EXP_TOL


def _normalize_exps(exps) -> tuple:
    """Distinct non-integer exponents with ``0 < Re < 2``, lowest first."""
    out = []
    for s in exps:
        s = complex(s)
        if not (_EXP_TOL < s.real < _TRACK_ABOVE - _EXP_TOL) or _is_int(s):
            continue
        if any(abs(s - o) < 1e-6 for o in out):
            continue
        out.append(s)
    out.sort(key=lambda z: (z.real, z.imag))
    return tuple(out[:_MAX_TRACKED])


def _as_exponents(exponents) -> tuple:
    if exponents is None:
        return SMOOTH
    exponents = tuple(exponents)
    if len(exponents) == 2 and all(isinstance(e, (tuple, list)) for e in exponents):
        return tuple(_normalize_exps(e) for e in exponents)
    e = _normalize_exps(exponents)
    return (e, e)


def _series_exps(start: complex, m: complex, l: complex, r: complex):
    """Exponents ``start + j m + k`` of ``x^start E^l_{m,.}(r x^m)`` times a smooth factor."""
    jmax = 0
    if r != 0 and l != 0 and m.real > 0:
        jmax = 64
        if _is_int(l) and l.real < 0:
            jmax = int(round(-l.real))
    out = []
    for j in range(jmax + 1):
        base = start + j * m
        if base.real >= _TRACK_ABOVE:
            break
        k = 0
        while (base + k).real < _TRACK_ABOVE:
            out.append(base + k)
            k += 1
    return out


def _conv_exps(exps: tuple, m: complex, n: complex, l: complex, r: complex) -> tuple:
    """Leading exponents of ``K * f`` for the kernel ``x^(n-1) E^l_{m,n}(r x^m)``."""
    out = []
    for s in (0j,) + tuple(exps):
        out.extend(_series_exps(s + n, m, l, r))
    return _normalize_exps(out)


def _conv_ints(ints: bool, exps: tuple, m: complex, n: complex, l: complex, r: complex) -> bool:
    """Whether ``K * f`` has integer powers below the tracking cap (see :func:`_conv_exps`)."""
    starts = ((0j,) if ints else ()) + tuple(exps)
    return any(_is_int(x) for s in starts for x in _series_exps(s + n, m, l, r))


def _diff_exps(exps: tuple, order: int) -> tuple:
    return _normalize_exps(s - order for s in exps)


# -- sampled functions --------------------------------------------------------


@dataclass(frozen=True)
class SampledFn:
    """Bicomplex-valued function sampled on a grid.

    Parameters
    ----------
    grid : Grid
    values : Bicomplex
        Idempotent components are complex arrays of length ``grid.n_points``.
    exponents : tuple, optional
        Non-integer powers ``sigma`` of ``(t - a)`` present in the expansion
        of the function at ``a``, per idempotent component (or one sequence
        for both).  Only ``0 < Re(sigma) < 2`` matter; the integral operators
        use them to keep second-order accuracy near ``a``.
    integer_powers : tuple of bool, optional
        Per component, whether the expansion at ``a`` may also contain
        integer powers.  True for ordinary data; the outputs of
        non-integer-order integrals usually have none, and the derivatives
        then skip the matching starting weights.
    """

    grid: Grid
    values: Bicomplex
    exponents: tuple = field(default=SMOOTH, compare=False)
    integer_powers: tuple = field(default=WITH_INTEGERS, compare=False)

    def __post_init__(self):
        v = as_bicomplex(self.values)
        x1, x2 = (np.broadcast_to(np.asarray(c, dtype=complex), (self.grid.n_points,)).copy() for c in v.components)
        object.__setattr__(self, "values", Bicomplex(x1, x2))
        object.__setattr__(self, "exponents", _as_exponents(self.exponents))
        object.__setattr__(self, "integer_powers", tuple(bool(b) for b in self.integer_powers))
        self._check_finite()

    def _check_finite(self):
        if not (np.all(np.isfinite(self.values.xi1)) and np.all(np.isfinite(self.values.xi2))):
            raise ValueError("sampled function has non-finite values")

    @classmethod
    def from_callable(cls, grid: Grid, f, exponents=None) -> "SampledFn":
        """Sample ``f(t)``; ``f`` maps a node array to a Bicomplex or complex array."""
        return cls(grid, as_bicomplex(f(grid.nodes)), _as_exponents(exponents))

    @classmethod
    def from_components(cls, grid: Grid, f1, f2, exponents=None) -> "SampledFn":
        return cls(grid, Bicomplex(np.asarray(f1, dtype=complex), np.asarray(f2, dtype=complex)), _as_exponents(exponents))

    @property
    def t(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def components(self) -> tuple:
        return self.values.components

    def with_values(self, values) -> "SampledFn":
        return SampledFn(self.grid, values, self.exponents, self.integer_powers)

    def _binary(self, other, op, product=False):
        exps, ints = self.exponents, self.integer_powers
        if isinstance(other, SampledFn):
            if other.grid != self.grid:
                raise ValueError("sampled functions live on different grids")
            e2 = other.exponents
            if product:
                cross = tuple(tuple(x + y for x in a for y in b) for a, b in zip(exps, e2))
                exps = tuple(a + b + c for a, b, c in zip(exps, e2, cross))
                ints = tuple(
                    i1 or i2 or any(_is_int(x) for x in c) for i1, i2, c in zip(ints, other.integer_powers, cross)
                )
            else:
                exps = tuple(a + b for a, b in zip(exps, e2))
                ints = tuple(i1 or i2 for i1, i2 in zip(ints, other.integer_powers))
            other = other.values
        elif not product:
            # adding a constant adds the power 0
            ints = WITH_INTEGERS
        return SampledFn(self.grid, op(self.values, as_bicomplex(other)), exps, ints)

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return self._binary(other, lambda x, y: y - x)

    def __mul__(self, other):
        return self._binary(other, lambda x, y: x * y, product=True)

    __rmul__ = __mul__

    def __neg__(self):
        return SampledFn(self.grid, -self.values, self.exponents, self.integer_powers)

    def restrict(self, every: int) -> "SampledFn":
        """Subsample to every ``every``-th node (inverse of :meth:`Grid.refined`)."""
        n = (self.grid.n_points - 1) // every + 1
        grid = Grid(self.grid.a, self.grid.a + (n - 1) * every * self.grid.h, n)
        return SampledFn(grid, self.values[: (n - 1) * every + 1 : every], self.exponents, self.integer_powers)

    def sup_norm(self, mask=None) -> HyperbolicNumber:
        x1, x2 = self.components
        if mask is not None:
            x1, x2 = x1[mask], x2[mask]
        return HyperbolicNumber(float(np.max(np.abs(x1))), float(np.max(np.abs(x2))))

    def l1_norm(self) -> HyperbolicNumber:
        """Trapezoidal ``int_a^b |f|_j dt``."""
        h = self.grid.h
        return HyperbolicNumber(*(float(np.trapezoid(np.abs(c), dx=h)) for c in self.components))


def sampled_kernel(grid: Grid, p: MLParams, tol: float = KERNEL_TOL) -> SampledFn:
    """The Prabhakar kernel ``e^l_{m,n,r}(t - a)`` on ``grid``, with its exponents.

    Needs ``Re(n_i) >= 1`` so that the samples at ``t = a`` are finite.
    """
    p.validate()
    x = grid.nodes - grid.a
    vals, exps = [], []
    for i in range(2):
        m, n, l, r = p.component(i)
        if n.real < 1 or (n.real == 1 and n.imag != 0):
            raise InvalidOrder(f"sampled kernel needs Re(n{i + 1}) >= 1 to be finite at t = a, got n{i + 1}={n}")
        vals.append(kernel_values(x, m, n, l, r, tol))
        exps.append(_series_exps(n - 1, m, l, r))
    return SampledFn(grid, Bicomplex(*vals), tuple(exps), tuple(any(_is_int(s) for s in e) for e in exps))


@dataclass(frozen=True)
class OperatorResult(SampledFn):
    """Operator output: samples plus the scheme name and diagnostics.

    Unlike a plain :class:`SampledFn` it may hold NaN where the exact
    operator output is singular.
    """

    scheme: str = ""
    info: dict = field(default_factory=dict, compare=False)

    def _check_finite(self):
        pass

    def as_sampled(self) -> SampledFn:
        return SampledFn(self.grid, self.values, self.exponents, self.integer_powers)


# -- product integration ----------------------------------------------------


def _antiderivatives(kind: str, params: tuple, x: np.ndarray, tol: float, shift: complex = 0j):
    """``K1``, ``K2`` of the kernel with ``n`` (or ``alpha``) raised by ``shift``."""
    if kind == "rl":
        (alpha,) = params
        alpha = alpha + shift
        return cpow(x, alpha) * complex(_rgamma(alpha + 1)), cpow(x, alpha + 1) * complex(_rgamma(alpha + 2))
    m, n, l, r = params
    return kernel_values(x, m, n + shift + 1, l, r, tol), kernel_values(x, m, n + shift + 2, l, r, tol)


def _power_image(kind: str, params: tuple, x: np.ndarray, sigma: complex, tol: float) -> np.ndarray:
    """Exact ``K * s^sigma`` on ``x``."""
    if kind == "rl":
        (alpha,) = params
        return complex(_gamma(sigma + 1) * _rgamma(sigma + alpha + 1)) * cpow(x, sigma + alpha)
    m, n, l, r = params
    return complex(_gamma(sigma + 1)) * kernel_values(x, m, sigma + n + 1, l, r, tol)


def _apply_weights(w: np.ndarray, beta: np.ndarray, f: np.ndarray) -> np.ndarray:
    n = f.size
    out = np.convolve(w, f)[:n]
    out -= beta[:n] * f[0]
    out[0] = 0.0
    return out


@functools.lru_cache(maxsize=256)
def _conv_weights(kind: str, params: tuple, h: float, n_points: int, tol: float, exps: tuple):
    """Product-integration weights for one component.

    ``kind`` is ``"rl"`` (params ``(alpha,)``) or ``"pr"`` (params
    ``(m, n, l, r)``).  The discrete operator is

        (K f)_i = sum_{k<=i} w_k f_{i-k} - beta_{i+1} f_0 + sum_j C_{ij} f_j,

    where the starting weights ``C`` act on nodes ``1..s`` and make the rule
    exact for ``(t-a)^sigma``, ``sigma`` in ``exps``.
    """
    x = h * np.arange(n_points + 1, dtype=float)
    if kind == "pr":
        m, _, _, r = params
        guard = abs(r) * x[-1] ** m.real
        if guard > KERNEL_ARG_GUARD:
            raise NonConvergent(
                f"kernel argument |r (t-a)^Re(m)| = {guard:.3g} exceeds the evaluation guard {KERNEL_ARG_GUARD:g}"
            )
    k1, k2 = _antiderivatives(kind, params, x, tol)
    return product_weights(k1, k2, h, n_points, exps, lambda xs, s: _power_image(kind, params, xs, s, tol))


def product_weights(k1: np.ndarray, k2: np.ndarray, h: float, n_points: int, exps: tuple, image) -> tuple:
    """Weights ``(w, beta, corr)`` from the first two antiderivatives of a kernel.

    ``k1``, ``k2`` hold ``K1``, ``K2`` at ``x_d = d h``, ``d = 0..n_points``;
    ``image(x, sigma)`` returns the exact convolution of the kernel with
    ``x^sigma`` and drives the starting weights.
    """
    k1 = np.array(k1, dtype=complex)
    k2 = np.array(k2, dtype=complex)
    k1[0] = 0.0
    k2[0] = 0.0
    db = np.diff(k2) / h  # (B_d - B_{d-1}) / h, d = 1..N
    alpha_w = k1[1:] - db  # weight of the left cell end
    beta_w = db - k1[:-1]  # weight of the right cell end
    w = np.empty(n_points, dtype=complex)
    w[0] = beta_w[0]
    w[1:] = alpha_w[: n_points - 1] + beta_w[1:n_points]

    exps = tuple(s for s in exps if s.real < _SMOOTH_ABOVE)
    corr = starting_weights(lambda f: _apply_weights(w, beta_w, f), h, n_points, exps, image)
    w.setflags(write=False)
    beta_w.setflags(write=False)
    return w, beta_w, corr


def starting_weights(apply, h: float, n_points: int, exps: tuple, image, exact: tuple = ()):
    """Corrections ``C`` on nodes ``1..s`` making ``apply(f) + C f[1:s+1]`` exact for ``x^sigma``.

    ``apply`` is any linear map of the samples on ``x_i = i h``; ``image(x,
    sigma)`` is the exact result for ``x^sigma``.  Integer powers listed in
    ``exact`` join the system so the corrections vanish on them; ``apply``
    must already reproduce those.  Returns ``None`` when ``exps`` is empty.
    """
    exps = tuple(exps)[: max(0, min(MAX_CORRECTIONS, n_points - 2 - len(exact)))]
    if not exps:
        return None
    exps = tuple(complex(e) for e in exact) + exps
    xs = h * np.arange(n_points, dtype=float)
    j = np.arange(1, len(exps) + 1, dtype=float)
    # scaled by h^-sigma so the small system is O(1)
    vand = np.array([cpow(j, s) for s in exps])  # (s, s): row sigma, column node
    resid = np.empty((len(exps), n_points), dtype=complex)
    for q, s in enumerate(exps):
        resid[q] = (image(xs, s) - apply(cpow(xs, s))) / h**s
    resid[:, 0] = 0.0
    corr = np.linalg.solve(vand, resid).T  # (n_points, s)
    corr.setflags(write=False)
    return corr


def apply_product_weights(f: np.ndarray, weights: tuple) -> np.ndarray:
    """Discrete convolution ``(K f)_i`` with weights from :func:`product_weights`."""
    w, beta, corr = weights
    f = np.asarray(f, dtype=complex)
    out = _apply_weights(w, beta, f)
    if corr is not None:
        out += corr @ f[1 : corr.shape[1] + 1]
    return out


def _convolve_component(f: np.ndarray, grid: Grid, kind: str, params: tuple, exps: tuple, tol: float) -> np.ndarray:
    params = tuple(complex(p) for p in params)
    return apply_product_weights(f, _conv_weights(kind, params, grid.h, grid.n_points, tol, exps))


# -- finite differences ---------------------------------------------------------


def _fd_weights(x: np.ndarray, z: float, order: int) -> np.ndarray:
    """Fornberg finite-difference weights for the ``order``-th derivative at ``z``."""
    n = len(x)
    c = np.zeros((n, order + 1))
    c1, c4 = 1.0, x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2, c5, c4 = 1.0, c4, x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


@functools.lru_cache(maxsize=32)
def _diff_stencils(order: int) -> tuple:
    """Second-order stencils for the ``order``-th derivative.

    Returns the centred weights (half-width ``p``) and, for each of the
    ``p`` nodes nearest the left edge, one-sided weights on ``order + 2``
    points.  Right-edge weights follow by reflection.
    """
    p = (order + 1) // 2
    centred = _fd_weights(np.arange(-p, p + 1, dtype=float), 0.0, order)
    width = max(order + 2, 2 * p + 1)
    edge = tuple(_fd_weights(np.arange(width, dtype=float), float(i), order) for i in range(p))
    return p, centred, edge


def _diff(f: np.ndarray, h: float, order: int) -> np.ndarray:
    """``order``-th derivative of uniform samples, second order in ``h`` for smooth data.

    Near ``a`` the accuracy drops for data behaving like ``(t-a)^sigma`` with
    non-integer ``Re(sigma) < order + 2``.
    """
    f = np.asarray(f, dtype=complex)
    if order == 0:
        return f.copy()
    p, centred, edge = _diff_stencils(order)
    n = f.size
    out = np.empty_like(f)
    out[p : n - p] = np.convolve(f, centred[::-1], mode="valid")
    width = edge[0].size
    sign = (-1) ** order
    for i, w in enumerate(edge):
        out[i] = w @ f[:width]
        out[n - 1 - i] = sign * (w @ f[::-1][:width])
    return out / h**order


def initial_derivatives(f: SampledFn, count: int) -> list:
    """One-sided third-order estimates of ``f^(q)(a+)`` for ``q < count``."""
    h = f.grid.h
    out = []
    for q in range(count):
        npts = q + 3
        w = _fd_weights(np.arange(npts, dtype=float), 0.0, q) / h**q
        out.append(Bicomplex(*(complex(np.dot(w, c[:npts])) for c in f.components)))
    return out


# -- orders -------------------------------------------------------------------


def _check_valid(name: str, v: Bicomplex):
    if not param_valid(v, 0):
        raise InvalidOrder(
            f"param_valid({name}): requires Re({name}1)>0 and Re({name}2)>0 "
            f"(|Im_j({name})|<Re({name}), validity condition); got "
            f"Re({name}1)={v.xi1.real:g}, Re({name}2)={v.xi2.real:g}"
        )


def derivative_order(order, *, split: bool = False, name: str = "n") -> tuple:
    """Integer differentiation order ``kappa = ceil(Re order)`` per component.

    By default both idempotent components must share the same ceiling; with
    ``split=True`` each component keeps its own (the components decouple).
    """
    order = as_bicomplex(order)
    k1, k2 = math.ceil(order.xi1.real), math.ceil(order.xi2.real)
    if k1 != k2 and not split:
        raise MismatchedCeil(
            f"derivative order: ceil(Re({name}1))={k1} differs from ceil(Re({name}2))={k2}; "
            f"the integer order k=ceil({name}) must be the same in both idempotent components"
        )
    for kc, c in ((k1, order.xi1), (k2, order.xi2)):
        if kc == c.real and c.imag != 0:
            raise InvalidOrder(f"derivative order {name} with integer real part must be real, got {c}")
    return k1, k2


def _check_grid(grid: Grid, kappa: tuple):
    need = 4 * max(kappa) + 4
    if grid.n_points < need:
        raise GridTooCoarse(f"differentiation of order {max(kappa)} needs n_points >= {need}, got {grid.n_points}")


# -- operators -------------------------------------------------------------


def _rl_component(fc, exps, grid, alpha):
    out = _convolve_component(fc, grid, "rl", (alpha,), exps, KERNEL_TOL)
    return out, _conv_exps(exps, 0j, alpha, 0j, 0j)


def _pr_component(fc, exps, grid, m, n, l, r, tol):
    if n == 0 and (l == 0 or r == 0):
        # kernel is the delta distribution
        return np.array(fc, dtype=complex), exps
    out = _convolve_component(fc, grid, "pr", (m, n, l, r), exps, tol)
    return out, _conv_exps(exps, m, n, l, r)


def _corrected(composite, fc, grid: Grid, exps: tuple, image, exact: tuple = ()) -> np.ndarray:
    """``composite(fc)`` plus starting weights making it exact for ``x^sigma``, ``sigma`` in ``exps``."""
    fc = np.asarray(fc, dtype=complex)
    corr = starting_weights(composite, grid.h, grid.n_points, exps, image, exact)
    out = composite(fc)
    if corr is not None:
        out = out + corr @ fc[1 : corr.shape[1] + 1]
    return out


def _derivative_exps(exps: tuple, kappa: int, integers: bool = True) -> tuple:
    # integer powers: differentiating the inner integral of 1, x, ... is where
    # finite differences lose accuracy near a
    cand = [complex(q) for q in range(kappa + 1)] if integers else []
    cand += [s for s in exps if s.real < kappa + 2 - _EXP_TOL]
    return tuple(sorted(cand, key=lambda z: (z.real, z.imag)))


def _power_derivative(x: np.ndarray, sigma: complex, params: tuple, tol: float) -> np.ndarray:
    """Exact ``D^l_{m,n,r} x^sigma = Gamma(sigma+1) x^(sigma-n) E^{-l}_{m,sigma-n+1}(r x^m)`` for ``x > 0``."""
    m, n, l, r = params
    out = np.zeros(x.size, dtype=complex)
    pos = x > 0
    out[pos] = complex(_gamma(sigma + 1)) * kernel_values(x[pos], m, sigma - n + 1, -l, r, tol)
    return out


def rl_integral(f: SampledFn, alpha) -> OperatorResult:
    """Riemann-Liouville integral ``I^alpha_{a+} f``.

    Exact for piecewise-linear ``f``; second order in ``h`` for smooth ``f``.

    Raises
    ------
    InvalidOrder
        If ``Re(alpha_i) <= 0`` in either component.
    """
    alpha = as_bicomplex(alpha)
    _check_valid("alpha", alpha)
    parts = [_rl_component(fc, e, f.grid, ac) for fc, e, ac in zip(f.components, f.exponents, alpha.components)]
    ints = tuple(
        _conv_ints(fi, e, 0j, ac, 0j, 0j) for fi, e, ac in zip(f.integer_powers, f.exponents, alpha.components)
    )
    return OperatorResult(
        f.grid, Bicomplex(*(p[0] for p in parts)), tuple(p[1] for p in parts), ints,
        scheme="product-integration/piecewise-linear",
    )


def rl_derivative(f: SampledFn, alpha, *, split_order: bool = False) -> OperatorResult:
    """Riemann-Liouville derivative ``D^alpha f = d^kappa/dt^kappa I^(kappa-alpha) f``.

    Raises
    ------
    InvalidOrder, MismatchedCeil, GridTooCoarse
    """
    alpha = as_bicomplex(alpha)
    _check_valid("alpha", alpha)
    kappa = derivative_order(alpha, split=split_order, name="alpha")
    _check_grid(f.grid, kappa)
    vals, exps, ints = [], [], []
    grid = f.grid
    for fc, e, fi, ac, kc in zip(f.components, f.exponents, f.integer_powers, alpha.components, kappa):
        if kc == ac:
            vals.append(_diff(fc, grid.h, kc))
            exps.append(_diff_exps(e, kc))
            ints.append(fi)
            continue

        def composite(samples, e=e, ac=ac, kc=kc):
            return _diff(_rl_component(samples, e, grid, kc - ac)[0], grid.h, kc)

        def image(x, s, ac=ac):
            return complex(_gamma(s + 1) * _rgamma(s + 1 - ac)) * cpow(x, s - ac)

        vals.append(_corrected(composite, fc, grid, _derivative_exps(e, kc, integers=fi), image))
        exps.append(_diff_exps(_conv_exps(e, 0j, kc - ac, 0j, 0j), kc))
        ints.append(_conv_ints(fi, e, 0j, kc - ac, 0j, 0j))
    return OperatorResult(
        f.grid, Bicomplex(*vals), tuple(exps), tuple(ints),
        scheme="product-integration + finite differences", info={"kappa": kappa},
    )


def _prabhakar_components(f: SampledFn, m, n, l, r, tol) -> tuple:
    parts = [
        _pr_component(fc, e, f.grid, mc, nc, lc, rc, tol)
        for fc, e, mc, nc, lc, rc in zip(
            f.components, f.exponents, m.components, n.components, l.components, r.components
        )
    ]
    ints = tuple(
        _conv_ints(fi, e, mc, nc, lc, rc)
        for fi, e, mc, nc, lc, rc in zip(
            f.integer_powers, f.exponents, m.components, n.components, l.components, r.components
        )
    )
    return [p[0] for p in parts], [p[1] for p in parts], ints


def prabhakar_integral(f: SampledFn, p: MLParams, tol: float = KERNEL_TOL) -> OperatorResult:
    """Prabhakar integral ``(E^l_{m,n,r,a+} f)(t) = (f * e^l_{m,n,r})(t)``.

    Parameters
    ----------
    f : SampledFn
    p : MLParams
        Must satisfy ``Re(m_i) > 0`` and ``Re(n_i) > 0``.
    tol : float
        Tolerance of the kernel series.

    Raises
    ------
    InvalidOrder
        If ``p`` fails the validity conditions.
    NonConvergent
        If ``|r_i (b-a)^Re(m_i)|`` exceeds the kernel evaluation guard.
    """
    p.validate()
    vals, exps, ints = _prabhakar_components(f, p.m, p.n, p.l, p.r, tol)
    return OperatorResult(f.grid, Bicomplex(*vals), tuple(exps), ints, scheme="product-integration/piecewise-linear")


def _inner_params(p: MLParams, kappa: tuple) -> tuple:
    return p.m, Bicomplex(kappa[0], kappa[1]) - p.n, -p.l, p.r


def prabhakar_derivative(
    f: SampledFn, p: MLParams, tol: float = KERNEL_TOL, *, split_order: bool = False
) -> OperatorResult:
    """Prabhakar derivative ``d^kappa/dt^kappa (E^{-l}_{m,kappa-n,r,a+} f)``, ``kappa = ceil(Re n)``."""
    p.validate()
    kappa = derivative_order(p.n, split=split_order)
    _check_grid(f.grid, kappa)
    grid = f.grid
    m, n_in, l_in, r = _inner_params(p, kappa)
    vals, exps, ints = [], [], []
    for i, (fc, e, fi, kc) in enumerate(zip(f.components, f.exponents, f.integer_powers, kappa)):
        params = (m.components[i], n_in.components[i], l_in.components[i], r.components[i])

        def composite(samples, e=e, params=params, kc=kc):
            return _diff(_pr_component(samples, e, grid, *params, tol)[0], grid.h, kc)

        def image(x, s, i=i):
            return _power_derivative(x, s, p.component(i), tol)

        vals.append(_corrected(composite, fc, grid, _derivative_exps(e, kc, integers=fi), image))
        exps.append(_diff_exps(_conv_exps(e, *params), kc))
        ints.append(_conv_ints(fi, e, *params))
    return OperatorResult(
        f.grid, Bicomplex(*vals), tuple(exps), tuple(ints),
        scheme="product-integration + finite differences", info={"kappa": kappa},
    )


def regularized_derivative(
    f: SampledFn, p: MLParams, tol: float = KERNEL_TOL, *, split_order: bool = False
) -> OperatorResult:
    """Regularized (Caputo-type) Prabhakar derivative ``E^{-l}_{m,kappa-n,r,a+} f^(kappa)``.

    ``f^(kappa)`` is taken by second-order finite differences.  See
    :func:`regularized_derivative_dual` for the equivalent form built from
    the unregularized derivative and the initial data.
    """
    p.validate()
    kappa = derivative_order(p.n, split=split_order)
    _check_grid(f.grid, kappa)
    grid = f.grid
    m, n_in, l_in, r = _inner_params(p, kappa)
    vals, exps, ints = [], [], []
    for i, (fc, e, fi, kc) in enumerate(zip(f.components, f.exponents, f.integer_powers, kappa)):
        params = (m.components[i], n_in.components[i], l_in.components[i], r.components[i])
        dexps = _diff_exps(e, kc)

        def composite(samples, params=params, dexps=dexps, kc=kc):
            return _pr_component(_diff(samples, grid.h, kc), dexps, grid, *params, tol)[0]

        # f^(kappa) ~ x^(sigma - kappa) is unbounded for Re sigma < kappa: make the
        # composite rule exact for those terms instead of trusting the differences
        sing = tuple(s for s in e if kc - 1 < s.real < kc + 2 - _EXP_TOL)
        # powers below kappa are annihilated, so the corrections must vanish on them
        corr = starting_weights(
            composite,
            grid.h,
            grid.n_points,
            sing,
            lambda x, s, kc=kc: _regularized_image(x, s, p.component(i), kc, tol),
            exact=tuple(range(kc)),
        )
        out = composite(np.asarray(fc, dtype=complex))
        if corr is not None:
            out = out + corr @ np.asarray(fc, dtype=complex)[1 : corr.shape[1] + 1]
        vals.append(out)
        exps.append(_conv_exps(dexps, *params))
        ints.append(_conv_ints(fi, dexps, *params))
    return OperatorResult(
        grid, Bicomplex(*vals), tuple(exps), tuple(ints), scheme="finite differences + product-integration", info={"kappa": kappa}
    )


def _regularized_image(x: np.ndarray, sigma: complex, params: tuple, kappa: int, tol: float) -> np.ndarray:
    """Exact ``E^{-l}_{m,kappa-n,r} (d/dx)^kappa x^sigma = Gamma(sigma+1) x^(sigma-n) E^{-l}_{m,sigma-n+1}(r x^m)``.

    Zero for integer ``sigma < kappa``.
    """
    m, n, l, r = params
    out = np.zeros(x.size, dtype=complex)
    if _is_int(sigma) and sigma.real < kappa - 0.5:
        return out
    pos = x > 0
    out[pos] = complex(_gamma(sigma + 1)) * kernel_values(x[pos], m, sigma - n + 1, -l, r, tol)
    return out


def regularized_derivative_dual(
    f: SampledFn, p: MLParams, tol: float = KERNEL_TOL, *, split_order: bool = False
) -> OperatorResult:
    """Regularized derivative through the unregularized one and the initial data.

    ``D^l f - sum_{q<kappa} (t-a)^(q-n) E^{-l}_{m,q-n+1}(r (t-a)^m) f^(q)(a+)``,
    with ``f^(q)(a+)`` from :func:`initial_derivatives`.  Where a correction
    term is singular at ``t = a`` the result is NaN there.
    """
    d = prabhakar_derivative(f, p, tol, split_order=split_order)
    kappa = d.info["kappa"]
    x = f.grid.nodes - f.grid.a
    init = initial_derivatives(f, max(kappa))
    vals, exps, ints = [], [], []
    for i, kc in enumerate(kappa):
        m, n, l, r = p.component(i)
        acc = np.array(d.values.components[i], dtype=complex)
        e = list(d.exponents[i])
        has_int = d.integer_powers[i]
        for q in range(kc):
            with np.errstate(divide="ignore", invalid="ignore"):
                corr = kernel_values(x, m, q - n + 1, -l, r, tol)
            corr[~np.isfinite(corr)] = np.nan
            acc = acc - corr * init[q].components[i]
            terms = _series_exps(q - n, m, -l, r)
            e.extend(terms)
            has_int = has_int or any(_is_int(s) for s in terms)
        vals.append(acc)
        exps.append(_normalize_exps(e))
        ints.append(has_int)
    return OperatorResult(
        f.grid, Bicomplex(*vals), tuple(exps), tuple(ints),
        scheme="unregularized derivative - initial-data correction",
        info={"kappa": kappa, "initial_derivatives": init},
    )


def boundedness_constant(p: MLParams, a: float, b: float, tol: float = 1e-15) -> HyperbolicNumber:
    """Constant ``K = K1 e1 + K2 e2`` with ``int |E f|_j <= K int |f|_j`` on ``[a, b]``.

    ``K_i = (b-a)^Re(n_i) sum_k |(l_i)_k| |r_i (b-a)^Re(m_i)|^k
    / (|Gamma(m_i k + n_i)| (Re(m_i) k + Re(n_i)) k!)``.

    Raises
    ------
    NonConvergent
        If ``|r_i (b-a)^Re(m_i)|`` exceeds the evaluation guard or the series
        does not settle.
    """
    from scipy.special import gammaln, loggamma

    p.validate()
    L = float(b - a)
    if not L > 0:
        raise ValueError("boundedness constant needs b > a")
    ks = []
    for i in range(2):
        m, n, l, r = p.component(i)
        x = abs(r) * L**m.real
        if x > KERNEL_ARG_GUARD:
            raise NonConvergent(f"|r_{i + 1} (b-a)^Re(m_{i + 1})| = {x:.3g} exceeds the evaluation guard")
        nterms = 64
        while True:
            k = np.arange(nterms, dtype=float)
            with np.errstate(divide="ignore"):
                logpoch = np.concatenate(([0.0], np.cumsum(np.log(np.abs(l + k[:-1])))))
                logx = k * np.log(x) if x > 0 else np.where(k == 0, 0.0, -np.inf)
            logterm = logpoch - loggamma(m * k + n).real - np.log(m.real * k + n.real) + logx - gammaln(k + 1)
            terms = np.where(np.isfinite(logterm), np.exp(logterm), 0.0)
            s = np.cumsum(terms)
            with np.errstate(divide="ignore", invalid="ignore"):
                rho = np.where(terms[:-1] > 0, terms[1:] / terms[:-1], 0.0)
                tail = np.where(rho < 1, terms[1:] * rho / (1 - rho), np.inf)
            ok = np.nonzero(tail <= tol * s[1:])[0]
            # the ratio must have settled below one for the geometric bound to hold
            ok = ok[ok >= np.argmax(terms)]
            if ok.size:
                ks.append(L**n.real * float(s[ok[0] + 1]))
                break
            if nterms >= 10_000:
                raise NonConvergent("boundedness constant series did not converge")
            nterms *= 2
    return HyperbolicNumber(*ks)


# -- dispatch ---------------------------------------------------------------


class OperatorKind(enum.Enum):
    RL_INTEGRAL = "rl-int"
    RL_DERIVATIVE = "rl-der"
    PRABHAKAR_INTEGRAL = "pint"
    PRABHAKAR_DERIVATIVE = "pder"
    REGULARIZED_PRABHAKAR = "cder"


@dataclass(frozen=True)
class OperatorSpec:
    kind: OperatorKind
    alpha: Bicomplex | None = None
    p: MLParams | None = None


def apply_operator(spec: OperatorSpec, f: SampledFn, *, split_order: bool = False) -> OperatorResult:
    kind = OperatorKind(spec.kind)
    if kind in (OperatorKind.RL_INTEGRAL, OperatorKind.RL_DERIVATIVE):
        if spec.alpha is None:
            raise InvalidOrder("Riemann-Liouville operators need an order alpha")
        if kind is OperatorKind.RL_INTEGRAL:
            return rl_integral(f, spec.alpha)
        return rl_derivative(f, spec.alpha, split_order=split_order)
    if spec.p is None:
        raise InvalidOrder("Prabhakar operators need parameters m, n, l, r")
    if kind is OperatorKind.PRABHAKAR_INTEGRAL:
        return prabhakar_integral(f, spec.p)
    if kind is OperatorKind.PRABHAKAR_DERIVATIVE:
        return prabhakar_derivative(f, spec.p, split_order=split_order)
    return regularized_derivative(f, spec.p, split_order=split_order)
