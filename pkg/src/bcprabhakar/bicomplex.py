"""Bicomplex numbers in idempotent form.

A bicomplex number ``x0 + i1 x1 + i2 x2 + j x3`` is stored as its idempotent
pair ``(xi1, xi2)`` with respect to ``e1 = (1+j)/2`` and ``e2 = (1-j)/2``::

    xi1 = (x0 + x3) + i (x1 - x2)
    xi2 = (x0 - x3) + i (x1 + x2)

In this basis multiplication, division and every analytic function act
componentwise, so each bicomplex computation is two independent complex ones.
Components may be numpy arrays; all arithmetic then broadcasts, which is how
sampled functions are represented elsewhere in the package.

>>> J * J == ONE
True
>>> (E1 * E2).is_zero
True
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field

import numpy as np

from .errors import ZeroDivisorBase, ZeroDivisorDivision

__all__ = [
    "Bicomplex",
    "HyperbolicNumber",
    "ONE",
    "ZERO",
    "I1",
    "I2",
    "J",
    "E1",
    "E2",
    "as_bicomplex",
    "from_real_components",
    "from_complex_pair",
    "bc_pow",
    "j_modulus",
    "precedes",
    "is_zero_divisor",
    "param_valid",
    "ceil_re",
]


def _is_scalar(z) -> bool:
    return np.ndim(z) == 0


def _scalarize(z):
    return complex(z) if _is_scalar(z) else np.asarray(z, dtype=complex)


@dataclass(frozen=True, eq=False)
class Bicomplex:
    """Bicomplex number ``xi1*e1 + xi2*e2``.

    Parameters
    ----------
    xi1, xi2 : complex or array_like
        Idempotent components; the projections ``P1`` and ``P2``.
    """

    xi1: complex
    xi2: complex
    # Real components as given to from_real_components, kept so that the
    # wire form round-trips bit for bit.
    _real: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "xi1", _scalarize(self.xi1))
        object.__setattr__(self, "xi2", _scalarize(self.xi2))

    # -- conversions ------------------------------------------------------

    @classmethod
    def from_real_components(cls, x0, x1=0.0, x2=0.0, x3=0.0) -> "Bicomplex":
        xi1 = (np.add(x0, x3)) + 1j * np.subtract(x1, x2)
        xi2 = (np.subtract(x0, x3)) + 1j * np.add(x1, x2)
        return cls(xi1, xi2, (x0, x1, x2, x3))

    @classmethod
    def from_complex_pair(cls, z1, z2) -> "Bicomplex":
        """Build ``z1 + i2 z2`` from two complex numbers in the ``i1`` plane."""
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        return cls(z1 - 1j * z2, z1 + 1j * z2)

    def to_real_components(self) -> tuple:
        if self._real is not None:
            return self._real
        s = self.xi1 + self.xi2
        d = self.xi1 - self.xi2
        x0, x1, x2, x3 = s.real / 2, s.imag / 2, -d.imag / 2, d.real / 2
        if _is_scalar(x0):
            return float(x0), float(x1), float(x2), float(x3)
        return x0, x1, x2, x3

    def to_complex_pair(self) -> tuple:
        z1 = (self.xi1 + self.xi2) / 2
        z2 = (self.xi2 - self.xi1) / 2j
        return z1, z2

    def to_json(self) -> dict:
        x0, x1, x2, x3 = self.to_real_components()
        return {"x0": x0, "x1": x1, "x2": x2, "x3": x3}

    @classmethod
    def from_json(cls, obj) -> "Bicomplex":
        """Parse the wire form ``{"x0":..,"x1":..,"x2":..,"x3":..}``.

        Plain numbers are accepted as real scalars and missing keys default
        to zero.
        """
        if isinstance(obj, numbers.Real):
            return cls.from_real_components(float(obj), 0.0, 0.0, 0.0)
        if not isinstance(obj, dict):
            raise ValueError(f"cannot parse bicomplex value from {obj!r}")
        unknown = set(obj) - {"x0", "x1", "x2", "x3"}
        if unknown:
            raise ValueError(f"unknown bicomplex keys {sorted(unknown)}")
        return cls.from_real_components(*(float(obj.get(k, 0.0)) for k in ("x0", "x1", "x2", "x3")))

    @property
    def components(self) -> tuple:
        return self.xi1, self.xi2

    @property
    def is_scalar(self) -> bool:
        return _is_scalar(self.xi1) and _is_scalar(self.xi2)

    @property
    def is_zero(self) -> bool:
        return bool(np.all(self.xi1 == 0) and np.all(self.xi2 == 0))

    @property
    def is_zero_divisor(self) -> bool:
        return is_zero_divisor(self)

    @property
    def j_modulus(self) -> "HyperbolicNumber":
        return j_modulus(self)

    def __len__(self):
        shape = np.broadcast(self.xi1, self.xi2).shape
        if not shape:
            raise TypeError("scalar Bicomplex has no len()")
        return shape[0]

    def __getitem__(self, idx) -> "Bicomplex":
        x1, x2 = np.broadcast_arrays(self.xi1, self.xi2)
        return Bicomplex(x1[idx], x2[idx])

    # -- arithmetic -------------------------------------------------------

    def __neg__(self):
        return Bicomplex(-self.xi1, -self.xi2)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return Bicomplex(self.xi1 + o.xi1, self.xi2 + o.xi2)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return Bicomplex(self.xi1 - o.xi1, self.xi2 - o.xi2)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return Bicomplex(self.xi1 * o.xi1, self.xi2 * o.xi2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return div(self, o)

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return div(o, self)

    def __pow__(self, alpha):
        return bc_pow(self, alpha)

    def __rpow__(self, base):
        return bc_pow(base, self)

    def __eq__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return bool(np.all(self.xi1 == o.xi1) and np.all(self.xi2 == o.xi2))

    def __hash__(self):
        if not self.is_scalar:
            raise TypeError("array-valued Bicomplex is unhashable")
        return hash((self.xi1, self.xi2))

    # numpy operands on the left defer to the reflected operators
    __array_ufunc__ = None

    def conj_i1(self) -> "Bicomplex":
        """Conjugate with respect to ``i1`` in both idempotent components."""
        return Bicomplex(np.conj(self.xi1), np.conj(self.xi2))

    def isclose(self, other, rtol=1e-12, atol=0.0) -> bool:
        o = _coerce(other)
        return bool(
            np.all(np.isclose(self.xi1, o.xi1, rtol=rtol, atol=atol))
            and np.all(np.isclose(self.xi2, o.xi2, rtol=rtol, atol=atol))
        )

    def __str__(self):
        if not self.is_scalar:
            return f"Bicomplex(<{len(self)} values>)"
        x0, x1, x2, x3 = self.to_real_components()
        return f"{x0:g} + {x1:g} i1 + {x2:g} i2 + {x3:g} j"


def _coerce(x):
    if isinstance(x, Bicomplex):
        return x
    if isinstance(x, (numbers.Number, np.ndarray, np.generic)):
        return Bicomplex(x, x)
    return NotImplemented


def as_bicomplex(x) -> Bicomplex:
    """Coerce a real/complex scalar or array (embedded via ``i -> i1``)."""
    o = _coerce(x)
    if o is NotImplemented:
        raise TypeError(f"cannot interpret {type(x).__name__} as bicomplex")
    return o


from_real_components = Bicomplex.from_real_components
from_complex_pair = Bicomplex.from_complex_pair

ONE = Bicomplex(1, 1)
ZERO = Bicomplex(0, 0)
E1 = Bicomplex(1, 0)
E2 = Bicomplex(0, 1)
J = Bicomplex(1, -1)
I1 = Bicomplex(1j, 1j)
I2 = Bicomplex(-1j, 1j)


def div(a: Bicomplex, b: Bicomplex) -> Bicomplex:
    """Componentwise quotient; raises on the zero element and the null cone."""
    a, b = as_bicomplex(a), as_bicomplex(b)
    z1 = np.any(b.xi1 == 0)
    z2 = np.any(b.xi2 == 0)
    if z1 and z2:
        raise ZeroDivisorDivision("division by zero", None)
    if z1 or z2:
        comp = 1 if z1 else 2
        raise ZeroDivisorDivision(
            f"division by a zero divisor: idempotent component {comp} of the denominator is 0",
            comp,
        )
    return Bicomplex(a.xi1 / b.xi1, a.xi2 / b.xi2)


def _is_nonneg_int(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    return (a.imag == 0) & (a.real >= 0) & (a.real == np.round(a.real))


def cpow(z, a):
    """Principal-branch complex power ``exp(a Log z)`` with ``0**a`` limits.

    ``0**a`` is 1 for ``a == 0`` and 0 for ``Re a > 0``; other powers of zero
    are ``inf``/``nan`` as numpy returns them.
    """
    z = np.asarray(z, dtype=complex)
    a = np.asarray(a, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.power(z, a)
        out = np.where((z == 0) & (a == 0), 1.0 + 0j, out)
        out = np.where((z == 0) & (a.real > 0), 0j, out)
    return out[()] if out.ndim == 0 else out


def bc_pow(xi, alpha) -> Bicomplex:
    """Componentwise principal-branch power ``xi**alpha``.

    Raises
    ------
    ZeroDivisorBase
        If ``xi`` is a zero divisor and ``alpha`` is not a nonnegative integer
        in the component where ``xi`` vanishes.
    """
    xi, alpha = as_bicomplex(xi), as_bicomplex(alpha)
    if xi.is_zero_divisor:
        for zc, ac, k in ((xi.xi1, alpha.xi1, 1), (xi.xi2, alpha.xi2, 2)):
            bad = (np.asarray(zc) == 0) & ~_is_nonneg_int(ac)
            if np.any(bad):
                raise ZeroDivisorBase(
                    f"non-integer power of a zero divisor (component {k} vanishes)"
                )
    return Bicomplex(cpow(xi.xi1, alpha.xi1), cpow(xi.xi2, alpha.xi2))


@dataclass(frozen=True)
class HyperbolicNumber:
    """Element ``d1*e1 + d2*e2`` of the hyperbolic (real idempotent) span."""

    d1: float
    d2: float

    def precedes(self, other: "HyperbolicNumber") -> bool:
        """Strict componentwise order ``self < other``."""
        return bool(self.d1 < other.d1 and self.d2 < other.d2)

    __lt__ = precedes

    def __add__(self, other):
        o = _as_hyp(other)
        return HyperbolicNumber(self.d1 + o.d1, self.d2 + o.d2)

    __radd__ = __add__

    def __mul__(self, other):
        o = _as_hyp(other)
        return HyperbolicNumber(self.d1 * o.d1, self.d2 * o.d2)

    __rmul__ = __mul__

    def max(self) -> float:
        return max(self.d1, self.d2)

    def to_bicomplex(self) -> Bicomplex:
        return Bicomplex(self.d1, self.d2)

    def to_json(self) -> dict:
        return {"d1": self.d1, "d2": self.d2}


def _as_hyp(x) -> HyperbolicNumber:
    if isinstance(x, HyperbolicNumber):
        return x
    return HyperbolicNumber(float(x), float(x))


def j_modulus(xi) -> HyperbolicNumber:
    xi = as_bicomplex(xi)
    if not xi.is_scalar:
        raise TypeError("j_modulus expects a scalar bicomplex")
    return HyperbolicNumber(abs(xi.xi1), abs(xi.xi2))


def precedes(a, b) -> bool:
    """``a < b`` in the bicomplex partial order (strict on both moduli)."""
    return j_modulus(a).precedes(j_modulus(b))


def is_zero_divisor(xi) -> bool:
    """True iff exactly one idempotent component vanishes (zero is excluded)."""
    xi = as_bicomplex(xi)
    z1 = bool(np.any(xi.xi1 == 0))
    z2 = bool(np.any(xi.xi2 == 0))
    return z1 != z2


def param_valid(m, k: int = 0) -> bool:
    """Validity of an order/parameter: ``Re(m1) > k`` and ``Re(m2) > k``.

    For ``k = 0`` this is equivalent to ``|Im_j(m)| < Re(m)`` in real
    components; for integer ``k`` to ``|Im_j(m)| < Re(m) - k``.
    """
    m = as_bicomplex(m)
    return bool(np.all(np.real(m.xi1) > k) and np.all(np.real(m.xi2) > k))


def ceil_re(xi) -> tuple:
    """Componentwise ceiling of the real parts: the hyperbolic order ``k``."""
    xi = as_bicomplex(xi)
    return math.ceil(xi.xi1.real), math.ceil(xi.xi2.real)
