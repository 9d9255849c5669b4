"""Gamma family, Pochhammer symbol and the Mittag-Leffler/Prabhakar series.

Everything is evaluated componentwise on the idempotent pair.  The scalar
engine :func:`ml_series` sums

.. math::

    E^{l}_{k; m,n}(z) = \\sum_{u \\ge 0} \\frac{(l)_u}{u!\\,\\Gamma_k(m u + n)} z^u

for complex ``m, n, l`` and an array of complex ``z``; the bicomplex wrappers
(:func:`ml3`, :func:`ml2`, :func:`ml1`, :func:`ml_k3`) call it once per
component.  ``k = 1`` is the ordinary Gamma function.
"""

from __future__ import annotations

import functools
import threading
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special as sc

from .bicomplex import Bicomplex, as_bicomplex, cpow, param_valid
from .errors import DomainError, GammaPole, InvalidOrder, NonConvergent

__all__ = [
    "MLParams",
    "SeriesDiagnostics",
    "complex_gamma",
    "bicomplex_gamma",
    "k_gamma",
    "bicomplex_k_gamma",
    "pochhammer",
    "pochhammer2",
    "ml_series",
    "ml3",
    "ml2",
    "ml1",
    "ml_k3",
    "kernel_values",
    "prabhakar_kernel",
    "DEFAULT_TOL",
    "MAX_TERMS",
    "KERNEL_ARG_GUARD",
]

DEFAULT_TOL = 1e-14
MAX_TERMS = 10_000
# |r_i t^Re(m_i)| above this is refused instead of summed with cancellation
KERNEL_ARG_GUARD = 50.0
_BLOCK = 64
_WINDOW = 3
_EPS_LD = float(np.finfo(np.longdouble).eps)


def _nonpos_int(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    return (a.imag == 0) & (a.real <= 0) & (a.real == np.round(a.real))


def complex_gamma(z):
    """Gamma function of a complex scalar or array.

    Raises
    ------
    GammaPole
        At nonpositive integers.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(_nonpos_int(z)):
        raise GammaPole(f"Gamma has a pole at {z[_nonpos_int(z)].ravel()[0].real:g}")
    out = sc.gamma(z)
    return complex(out) if out.ndim == 0 else out


def bicomplex_gamma(xi) -> Bicomplex:
    """``Gamma_2(xi) = Gamma(xi1) e1 + Gamma(xi2) e2``."""
    xi = as_bicomplex(xi)
    out = []
    for comp, z in enumerate(xi.components, start=1):
        try:
            out.append(complex_gamma(z))
        except GammaPole as exc:
            raise GammaPole(f"{exc} (idempotent component {comp})", comp) from None
    return Bicomplex(*out)


def k_gamma(z, k: float):
    """Scalar k-Gamma ``Gamma_k(z) = k**(z/k - 1) * Gamma(z/k)``."""
    if not k > 0:
        raise DomainError(f"k-Gamma needs k > 0, got {k}")
    z = np.asarray(z, dtype=complex)
    return complex_gamma(z / k) * np.power(complex(k), z / k - 1)


def bicomplex_k_gamma(xi, k: float) -> Bicomplex:
    """Componentwise k-Gamma; equals :func:`bicomplex_gamma` for ``k = 1``."""
    xi = as_bicomplex(xi)
    if k == 1:
        return bicomplex_gamma(xi)
    out = []
    for comp, z in enumerate(xi.components, start=1):
        try:
            out.append(complex(k_gamma(z, k)))
        except GammaPole as exc:
            raise GammaPole(f"{exc} (idempotent component {comp})", comp) from None
    return Bicomplex(*out)


def pochhammer(l, u: int):
    """Rising factorial ``l (l+1) ... (l+u-1)`` in product form (pole free)."""
    if u < 0 or int(u) != u:
        raise ValueError("Pochhammer index must be a nonnegative integer")
    out = np.ones_like(np.asarray(l, dtype=complex))
    for v in range(int(u)):
        out = out * (np.asarray(l, dtype=complex) + v)
    return complex(out) if out.ndim == 0 else out


def pochhammer2(l, u: int) -> Bicomplex:
    l = as_bicomplex(l)
    return Bicomplex(pochhammer(l.xi1, u), pochhammer(l.xi2, u))


# -- parameter bundle ------------------------------------------------------


@dataclass(frozen=True)
class MLParams:
    """Parameters ``(m, n, l, r)`` of the Prabhakar family, plus deformation ``k``."""

    m: Bicomplex
    n: Bicomplex
    l: Bicomplex
    r: Bicomplex
    k: float = 1.0

    def __post_init__(self):
        for name in ("m", "n", "l", "r"):
            object.__setattr__(self, name, as_bicomplex(getattr(self, name)))
        object.__setattr__(self, "k", float(self.k))

    @classmethod
    def of(cls, m=1, n=1, l=1, r=0, k=1.0) -> "MLParams":
        return cls(as_bicomplex(m), as_bicomplex(n), as_bicomplex(l), as_bicomplex(r), k)

    def validate(self) -> "MLParams":
        """Check the standing hypotheses and return ``self``.

        Raises
        ------
        InvalidOrder
            If ``Re(m_i) <= 0`` or ``Re(n_i) <= 0`` or ``k <= 0``.
        """
        for name in ("m", "n"):
            if not param_valid(getattr(self, name), 0):
                v = getattr(self, name)
                raise InvalidOrder(
                    f"param_valid({name}): requires Re({name}1)>0 and Re({name}2)>0 "
                    f"(|Im_j({name})|<Re({name}), validity condition); got "
                    f"Re({name}1)={v.xi1.real:g}, Re({name}2)={v.xi2.real:g}"
                )
        if not self.k > 0:
            raise InvalidOrder(f"deformation k must be > 0, got {self.k}")
        return self

    def replace(self, **changes) -> "MLParams":
        d = {"m": self.m, "n": self.n, "l": self.l, "r": self.r, "k": self.k}
        d.update({key: (as_bicomplex(v) if key != "k" else v) for key, v in changes.items()})
        return MLParams(**d)

    def component(self, i: int) -> tuple:
        """Complex ``(m, n, l, r)`` of idempotent component ``i`` (0 or 1)."""
        return tuple(getattr(self, name).components[i] for name in ("m", "n", "l", "r"))

    def to_json(self) -> dict:
        d = {name: getattr(self, name).to_json() for name in ("m", "n", "l", "r")}
        if self.k != 1.0:
            d["k"] = self.k
        return d

    @classmethod
    def from_json(cls, obj: dict) -> "MLParams":
        unknown = set(obj) - {"m", "n", "l", "r", "k"}
        if unknown:
            raise ValueError(f"unknown parameter keys {sorted(unknown)}")
        defaults = {"m": 1, "n": 1, "l": 1, "r": 0}
        vals = {key: Bicomplex.from_json(obj.get(key, dv)) for key, dv in defaults.items()}
        return cls(**vals, k=float(obj.get("k", 1.0)))


@dataclass(frozen=True)
class SeriesDiagnostics:
    terms_used: int
    tail_estimate: float
    converged: bool

    @staticmethod
    def merge(*diags: "SeriesDiagnostics") -> "SeriesDiagnostics":
        return SeriesDiagnostics(
            max(d.terms_used for d in diags),
            max(d.tail_estimate for d in diags),
            all(d.converged for d in diags),
        )

    def to_json(self) -> dict:
        return {
            "terms_used": self.terms_used,
            "tail_estimate": self.tail_estimate,
            "converged": self.converged,
        }


# -- scalar series engine --------------------------------------------------


class _Coefficients:
    """Log-coefficients ``log((l)_u / (u! Gamma_k(m u + n)))`` for one parameter set.

    Computed with mpmath and stored as extended-precision complex numbers, so
    that the series keeps ~1e-15 relative accuracy when its terms cancel.
    Vanishing coefficients (Gamma poles, finite Pochhammer products) are
    ``-inf``.
    """

    _DPS = 30

    def __init__(self, m: complex, n: complex, l: complex, k: float):
        self.m, self.n, self.l, self.k = m, n, l, k
        self._logc = np.zeros(0, dtype=np.clongdouble)
        self._logp = mpmath.mpf(0)
        self._lock = threading.Lock()

    def get(self, nterms: int) -> np.ndarray:
        with self._lock:
            if self._logc.size < nterms:
                self._extend(nterms)
            return self._logc[:nterms]

    def _extend(self, nterms: int):
        with mpmath.workdps(self._DPS):
            m, n, l = mpmath.mpc(self.m), mpmath.mpc(self.n), mpmath.mpc(self.l)
            k = mpmath.mpf(self.k)
            logk = mpmath.log(k)
            start = self._logc.size
            out = np.empty(nterms - start, dtype=np.clongdouble)
            logp = self._logp
            for u in range(start, nterms):
                if u > 0 and logp is not None:
                    f = (l + u - 1) / u
                    logp = None if f == 0 else logp + mpmath.log(f)
                a = (m * u + n) / k
                pole = a.imag == 0 and a.real <= 0 and a.real == mpmath.floor(a.real)
                if logp is None or pole:
                    out[u - start] = np.clongdouble(-np.inf)
                    continue
                lg = mpmath.loggamma(a)
                if self.k != 1.0:
                    lg = lg + (a - 1) * logk
                out[u - start] = _to_clongdouble(logp - lg)
            self._logp = logp
        self._logc = np.concatenate([self._logc, out])


def _to_clongdouble(z) -> np.clongdouble:
    re, im = mpmath.re(z), mpmath.im(z)
    hr, hi = float(re), float(im)
    lr, li = float(re - hr), float(im - hi)
    return np.clongdouble(np.longdouble(hr) + np.longdouble(lr)) + 1j * (
        np.longdouble(hi) + np.longdouble(li)
    )


@functools.lru_cache(maxsize=512)
def _coefficients(m: complex, n: complex, l: complex, k: float) -> _Coefficients:
    return _Coefficients(m, n, l, k)


def ml_series(z, m, n, l, *, k: float = 1.0, tol: float = DEFAULT_TOL, max_terms: int = MAX_TERMS):
    """Sum the (k-deformed) Prabhakar series for complex parameters.

    Parameters
    ----------
    z : array_like of complex
        Evaluation points.
    m, n, l : complex
        Series parameters.  No validity check is made here: the operators
        need shifted orders such as ``n = 0`` internally.
    k : float
        Gamma deformation; ``k = 1`` is the ordinary Prabhakar function.
    tol : float
        Truncate once the geometric tail bound ``|t_u| rho / (1 - rho)`` is
        below ``tol * |partial sum|``, where ``rho`` is the last term ratio
        and the last three ratios are below one and nonincreasing.  The
        reference magnitude is floored at ``1e-3`` times the largest term.

    Returns
    -------
    values : ndarray
    terms_used : ndarray of int
    tail : ndarray of float
        Truncation bound plus a rounding-error estimate, both relative to
        the reference magnitude.  Large values flag cancellation between
        terms that are much bigger than the sum.
    """
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.ravel()
    m, n, l = complex(m), complex(n), complex(l)
    npts = z.size
    values = np.zeros(npts, dtype=complex)
    terms_used = np.zeros(npts, dtype=int)
    tail = np.full(npts, np.inf)
    if npts == 0:
        return values.reshape(shape), terms_used.reshape(shape), tail.reshape(shape)

    coeffs = _coefficients(m, n, l, float(k))
    zl = z.astype(np.clongdouble)
    nz = z != 0
    with np.errstate(divide="ignore"):
        logz = np.log(np.where(nz, zl, np.clongdouble(1)))

    todo = np.arange(npts)
    nterms = _BLOCK
    while todo.size:
        nterms = min(nterms, max_terms)
        logc = coeffs.get(nterms)
        u = np.arange(nterms, dtype=np.longdouble)
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            expo = logc[None, :] + u[None, :] * logz[todo, None]
            terms = np.exp(expo)
        terms[np.isneginf(expo.real)] = 0
        zero_pt = ~nz[todo]
        if np.any(zero_pt):
            terms[zero_pt, 1:] = 0
        if not np.all(np.isfinite(terms)):
            raise NonConvergent("Prabhakar series overflowed; argument too large for direct summation")

        mag = np.abs(terms).astype(float)
        partial = np.cumsum(terms, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = mag[:, 1:] / mag[:, :-1]
        ratio = np.where(mag[:, 1:] == 0, 0.0, ratio)
        ratio = np.where(np.isnan(ratio), np.inf, ratio)
        # ratio[:, u-1] = |t_u / t_{u-1}|; stabilization over the last _WINDOW ratios
        r0, r1, r2 = ratio[:, :-2], ratio[:, 1:-1], ratio[:, 2:]
        stable = (r0 < 1) & (r1 < 1) & (r2 < 1) & (r1 <= r0) & (r2 <= r1)
        with np.errstate(divide="ignore", invalid="ignore"):
            tail_u = np.where(r2 == 0, 0.0, mag[:, _WINDOW:] * r2 / (1 - r2))
        # relative to the partial sum, floored near the rounding level of the
        # largest term so that zeros of the function still terminate
        peak = np.maximum.accumulate(mag, axis=1)[:, _WINDOW:]
        scale = np.maximum(np.abs(partial[:, _WINDOW:]).astype(float), 1e-3 * peak)
        scale = np.where(scale == 0, 1.0, scale)
        rel_tail = np.where(stable, tail_u / scale, np.inf)
        ok = rel_tail <= tol
        hit = ok.any(axis=1)
        col = np.argmax(ok, axis=1)[hit]
        done = todo[hit]
        values[done] = partial[hit, col + _WINDOW].astype(complex)
        terms_used[done] = col + _WINDOW + 1
        # rounding: term u carries about eps * (1 + |log c_u| + u |log z|)
        # relative error; measured against the unfloored sum this flags
        # cancellation among terms far larger than the result
        rows = np.nonzero(hit)[0]
        cols = col + _WINDOW + 1
        with np.errstate(invalid="ignore"):
            cond = 1.0 + np.abs(logc).astype(float)[None, :] + u.astype(float)[None, :] * np.abs(logz[todo, None]).astype(float)
            term_err = mag * _EPS_LD * cond
        term_err = np.where(np.isfinite(term_err), term_err, 0.0)
        err_sum = np.cumsum(term_err, axis=1)[rows, cols - 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            rounding = err_sum / np.abs(partial[rows, cols - 1]).astype(float)
        rounding = np.where(np.isnan(rounding), 0.0, rounding)
        tail[done] = rel_tail[hit, col] + rounding
        todo = todo[~hit]
        if todo.size and nterms >= max_terms:
            raise NonConvergent(
                f"Prabhakar series did not converge within max_terms={max_terms} "
                f"at z={z[todo[0]]:.6g}"
            )
        nterms *= 2
    return values.reshape(shape), terms_used.reshape(shape), tail.reshape(shape)


def _bc_series(zeta, m, n, l, k, tol, max_terms):
    zeta = as_bicomplex(zeta)
    m, n, l = as_bicomplex(m), as_bicomplex(n), as_bicomplex(l)
    comps, diags = [], []
    for i in range(2):
        v, used, tail = ml_series(
            zeta.components[i], m.components[i], n.components[i], l.components[i],
            k=k, tol=tol, max_terms=max_terms,
        )
        comps.append(v if np.ndim(v) else complex(v))
        diags.append(SeriesDiagnostics(int(np.max(used)), float(np.max(tail)), bool(np.max(tail) <= tol)))
    return Bicomplex(*comps), SeriesDiagnostics.merge(*diags)


def ml3(zeta, p: MLParams, tol: float = DEFAULT_TOL, max_terms: int = MAX_TERMS):
    """Three-parameter (Prabhakar) Mittag-Leffler function ``E^l_{m,n}(zeta)``.

    Uses the ordinary Gamma function regardless of ``p.k``; see :func:`ml_k3`.

    Returns
    -------
    value : Bicomplex
    diagnostics : SeriesDiagnostics
    """
    p.validate()
    return _bc_series(zeta, p.m, p.n, p.l, 1.0, tol, max_terms)


def ml_k3(zeta, p: MLParams, tol: float = DEFAULT_TOL, max_terms: int = MAX_TERMS):
    """k-deformed Prabhakar function: :func:`ml3` with ``Gamma_{2,k}`` denominators."""
    p.validate()
    return _bc_series(zeta, p.m, p.n, p.l, p.k, tol, max_terms)


def ml2(zeta, m, n, tol: float = DEFAULT_TOL) -> Bicomplex:
    """Two-parameter function ``sum zeta^u / Gamma_2(m u + n)``."""
    return ml3(zeta, MLParams.of(m=m, n=n, l=1), tol)[0]


def ml1(zeta, m, tol: float = DEFAULT_TOL) -> Bicomplex:
    """One-parameter function ``sum zeta^u / Gamma_2(m u + 1)``."""
    return ml2(zeta, m, 1, tol)


# -- kernel ----------------------------------------------------------------


def kernel_values(t, m, n, l, r, tol: float = DEFAULT_TOL, *, max_terms: int = MAX_TERMS):
    """Scalar kernel ``t**(n-1) E^l_{m,n}(r t**m)`` on an array of ``t >= 0``.

    At ``t = 0`` the power follows :func:`cpow` (``0**0 = 1``).
    """
    t = np.asarray(t, dtype=float)
    m, n, l, r = complex(m), complex(n), complex(l), complex(r)
    if np.any(t < 0):
        raise DomainError("kernel needs t >= 0")
    guard = abs(r) * np.max(t, initial=0.0) ** m.real
    if guard > KERNEL_ARG_GUARD:
        raise NonConvergent(
            f"kernel argument |r t^Re(m)| = {guard:.3g} exceeds the evaluation guard {KERNEL_ARG_GUARD:g}"
        )
    zeta = r * cpow(t, m)
    vals, used, tail = ml_series(zeta, m, n, l, tol=tol, max_terms=max_terms)
    return cpow(t, n - 1) * vals


def prabhakar_kernel(t, p: MLParams, tol: float = DEFAULT_TOL) -> Bicomplex:
    """Bicomplex Prabhakar kernel ``e^l_{m,n,r}(t) = t^(n-1) E^l_{m,n}(r t^m)``.

    ``t`` is a positive real scalar or array.

    Raises
    ------
    DomainError
        If any ``t <= 0``.
    """
    p.validate()
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise DomainError("prabhakar_kernel needs t > 0")
    comps = [kernel_values(t_arr, *p.component(i), tol=tol) for i in range(2)]
    if t_arr.ndim == 0:
        comps = [complex(c) for c in comps]
    return Bicomplex(*comps)
