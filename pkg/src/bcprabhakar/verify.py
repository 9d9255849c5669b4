"""Numerical verification of the operator identities.

Each check returns a :class:`Record`: the error measured on one or more
grids, the empirical convergence order between consecutive grids, and a
pass flag against the check's threshold and order floor.  The command-line
``verify`` subcommand groups them into suites; the acceptance tests call the
same functions.

All random draws come from ``numpy.random.default_rng((seed, tag))`` so
each check is reproducible on its own and independent of suite order.
"""

from __future__ import annotations

import math
import platform
import sys
from dataclasses import asdict, dataclass, field

import mpmath
import numpy as np
import scipy
from scipy import integrate

from .bicomplex import Bicomplex, as_bicomplex
from .cauchy import CauchyProblem, residual_check, solve_corollary, solve_homogeneous, solve_nonhomogeneous
from .laplace import (
    convolution_lt_check,
    forward_lt_numeric,
    inverse_lt,
    kernel_contour,
    kernel_lt,
    kernel_lt_closed,
    region_ok,
    singular_points,
)
from .ops import (
    Grid,
    SampledFn,
    boundedness_constant,
    prabhakar_derivative,
    prabhakar_integral,
    regularized_derivative,
    regularized_derivative_dual,
    rl_derivative,
    rl_integral,
    sampled_kernel,
)
from .oracle import ml3_mp
from .special import MLParams, bicomplex_k_gamma, kernel_values, ml1, ml2, ml3, ml_k3

__all__ = [
    "DEFAULT_GRIDS",
    "DEFAULT_SEED",
    "Record",
    "VerifyConfig",
    "SUITES",
    "run_suite",
    "environment",
]

DEFAULT_SEED = 0xB1C0
DEFAULT_GRIDS = (257, 513, 1025, 2049)


@dataclass
class Record:
    """Outcome of one identity check.

    ``threshold`` applies to the error on grid ``at`` (the finest grid when
    ``at`` is not among ``grids``); ``floor``, when set, to the order
    between the two finest grids.  With ``decreasing`` the errors must also
    fall strictly from grid to grid.
    """

    name: str
    criterion: int | None
    errors: list
    threshold: float
    grids: list = field(default_factory=list)
    floor: float | None = None
    at: int | None = None
    decreasing: bool = False
    orders: list = field(default_factory=list)
    passed: bool = False
    note: str = ""

    def __post_init__(self):
        self.errors = [float(e) for e in self.errors]
        if len(self.grids) > 1 and not self.orders:
            self.orders = [_order(a, b) for a, b in zip(self.errors, self.errors[1:])]
        self.passed = self._judge()

    def _judge(self) -> bool:
        if not self.errors or not all(math.isfinite(e) for e in self.errors):
            return False
        idx = self.grids.index(self.at) if self.at in self.grids else len(self.errors) - 1
        ok = self.errors[idx] <= self.threshold
        if self.floor is not None:
            ok = ok and bool(self.orders) and self.orders[-1] >= self.floor
        if self.decreasing:
            ok = ok and all(b < a for a, b in zip(self.errors, self.errors[1:]))
        return bool(ok)

    def line(self) -> str:
        tag = f"[{self.criterion}] " if self.criterion else ""
        err = self.errors[-1] if self.errors else float("nan")
        s = f"{'PASS' if self.passed else 'FAIL'} {tag}{self.name}: error {err:.3e} (threshold {self.threshold:.1e})"
        if self.orders:
            s += f", order {self.orders[-1]:.2f}"
            if self.floor is not None:
                s += f" (floor {self.floor:.1f})"
        if self.note:
            s += f"; {self.note}"
        return s

    def to_json(self) -> dict:
        return asdict(self)


def _order(e_coarse: float, e_fine: float) -> float:
    if e_fine <= 0 or e_coarse <= 0:
        return float("inf")
    return math.log2(e_coarse / e_fine)


@dataclass(frozen=True)
class VerifyConfig:
    seed: int = DEFAULT_SEED
    grids: tuple = DEFAULT_GRIDS

    def rng(self, tag: int) -> np.random.Generator:
        return np.random.default_rng((self.seed, tag))

    def grids_upto(self, n: int) -> tuple:
        out = tuple(g for g in self.grids if g <= n)
        return out if len(out) >= 2 else tuple(self.grids)


def environment() -> dict:
    return {
        "python": sys.version.split()[0],
        "platform": platform.platform(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "mpmath": mpmath.__version__,
    }


# -- helpers ------------------------------------------------------------------


def _rel(a: Bicomplex, b: Bicomplex, mask=None) -> float:
    """Sup-norm relative error, the worse of the two idempotent components."""
    out = 0.0
    for x, y in zip(as_bicomplex(a).components, as_bicomplex(b).components):
        x, y = np.atleast_1d(x), np.atleast_1d(y)
        if mask is not None:
            x, y = x[mask], y[mask]
        out = max(out, float(np.max(np.abs(x - y)) / max(np.max(np.abs(y)), 1e-300)))
    return out


def _pointwise_rel(a, b) -> float:
    out = 0.0
    for x, y in zip(as_bicomplex(a).components, as_bicomplex(b).components):
        out = max(out, float(np.max(np.abs(np.asarray(x) - np.asarray(y)) / np.maximum(np.abs(y), 1e-300))))
    return out


def _cplx(rng, lo, hi, im=0.0):
    return complex(rng.uniform(lo, hi), rng.uniform(-im, im) if im else 0.0)


def _kernel(grid: Grid, m, n, l, r) -> Bicomplex:
    t = grid.nodes - grid.a
    return Bicomplex(*(kernel_values(t, *(as_bicomplex(v).components[i] for v in (m, n, l, r))) for i in range(2)))


def _poly(rng, grid: Grid, degree: int = 4) -> SampledFn:
    t = grid.nodes
    comps = []
    for _ in range(2):
        c = rng.uniform(-1, 1, degree + 1) + 1j * rng.uniform(-1, 1, degree + 1)
        comps.append(np.polyval(c[::-1], t))
    return SampledFn.from_components(grid, *comps)


# operator fixtures on [0, 2]
_M = Bicomplex(0.8 + 0.1j, 1.2 - 0.1j)
_N = Bicomplex(1.3 + 0.2j, 1.6)
_L = Bicomplex(0.7 + 0.3j, 1.4)
_R = Bicomplex(-0.8 + 0.5j, 0.6)
_NU = Bicomplex(1.2 + 0.1j, 1.5)
_SIG = Bicomplex(0.5 - 0.2j, 0.3)
_ALPHA = Bicomplex(0.6 + 0.2j, 0.9)
_BETA = Bicomplex(0.4 + 0.1j, 0.3)
_P = MLParams(_M, _N, _L, _R)
_T = 2.0


def _smooth_test_fn(grid: Grid) -> SampledFn:
    t = grid.nodes
    return SampledFn.from_components(
        grid,
        1 + 0.5j * t - 0.3 * t**2 + 0.1j * t**3 - 1j * (0.5 - t + 0.2j * t**2 + 0.05 * t**4),
        1 + 0.5j * t - 0.3 * t**2 + 0.1j * t**3 + 1j * (0.5 - t + 0.2j * t**2 + 0.05 * t**4),
    )


def _over_grids(cfg: VerifyConfig, fn, grids=None) -> tuple:
    grids = tuple(grids or cfg.grids)
    return list(grids), [fn(Grid(0.0, _T, n)) for n in grids]


# -- algebra ------------------------------------------------------------------


def check_algebra_division(cfg: VerifyConfig) -> Record:
    rng = cfg.rng(101)
    x = rng.uniform(-3, 3, (4, 2000))
    y = rng.uniform(-3, 3, (4, 2000))
    a = Bicomplex.from_real_components(*x)
    b = Bicomplex.from_real_components(*y)
    keep = (np.abs(b.xi1) > 1e-3) & (np.abs(b.xi2) > 1e-3)
    a, b = a[keep], b[keep]
    err = _pointwise_rel((a * b) / b, a)
    return Record("algebra: div(mul(a, b), b) = a", None, [err], 1e-14)


def check_algebra_real_roundtrip(cfg: VerifyConfig) -> Record:
    rng = cfg.rng(102)
    x = rng.uniform(-5, 5, (4, 2000))
    a = Bicomplex(*Bicomplex.from_real_components(*x).components)
    back = np.array(a.to_real_components())
    err = float(np.max(np.abs(back - x)) / np.max(np.abs(x)))
    return Record("algebra: real components <-> idempotent pair", None, [err], 1e-15)


def check_algebra_unit_table(cfg: VerifyConfig) -> Record:
    i1 = Bicomplex.from_real_components(0, 1, 0, 0)
    i2 = Bicomplex.from_real_components(0, 0, 1, 0)
    j = Bicomplex.from_real_components(0, 0, 0, 1)
    one = Bicomplex(1, 1)
    cases = [(i1 * i1, -one), (i2 * i2, -one), (j * j, one), (i1 * i2, j), (i2 * j, -i1), (i1 * j, -i2)]
    err = max(max(abs(complex(x) - complex(y)) for x, y in zip(a.components, b.components)) for a, b in cases)
    return Record("algebra: multiplication table of i1, i2, j", None, [err], 0.0)


# -- Mittag-Leffler -----------------------------------------------------------


def check_exponential_reduction(cfg: VerifyConfig) -> Record:
    """``E^1_{1,1} = exp`` on ``|zeta_i| <= 5``."""
    rng = cfg.rng(1)
    rad = 5 * np.sqrt(rng.uniform(0, 1, (2, 400)))
    ang = rng.uniform(-np.pi, np.pi, (2, 400))
    zeta = Bicomplex(*(rad * np.exp(1j * ang)))
    val, _ = ml3(zeta, MLParams.of(1, 1, 1, 0))
    err = _pointwise_rel(val, Bicomplex(np.exp(zeta.xi1), np.exp(zeta.xi2)))
    return Record("ml3(l=m=n=1) = exp on 400 draws", 1, [err], 1e-12)


def _random_mn(rng):
    return Bicomplex(_cplx(rng, 0.5, 2.0, 0.5), _cplx(rng, 0.5, 2.0, 0.5))


def check_special_lattice(cfg: VerifyConfig) -> Record:
    """Special cases of the family against each other and the mpmath series."""
    rng = cfg.rng(2)
    worst = 0.0
    for _ in range(100):
        m, n = _random_mn(rng), _random_mn(rng)
        k = float(rng.choice([0.5, 2.0, 3.0]))
        # |zeta| <= 1.5: at 2 the k=3, Re m=0.5 series already cancels to 1e-11
        z = Bicomplex(*(rng.uniform(0, 1.5) * np.exp(1j * rng.uniform(-np.pi, np.pi)) for _ in range(2)))
        e3 = ml3(z, MLParams(m, n, 1, 0))[0]
        e2 = ml2(z, m, n)
        e2_mp = Bicomplex(*(ml3_mp(z.components[i], m.components[i], n.components[i], 1.0) for i in range(2)))
        e1 = ml1(z, m)
        e1_mp = Bicomplex(*(ml3_mp(z.components[i], m.components[i], 1.0, 1.0) for i in range(2)))
        ek = ml_k3(z, MLParams(m, n, 1, 0, k=1.0))[0]
        ekm1 = ml_k3(z, MLParams(m, 1, 1, 0, k=k))[0]
        ekm1_mp = Bicomplex(*(ml3_mp(z.components[i], m.components[i], 1.0, 1.0, k) for i in range(2)))
        worst = max(
            worst,
            _pointwise_rel(e3, e2),
            _pointwise_rel(e2, e2_mp),
            _pointwise_rel(e1, e1_mp),
            _pointwise_rel(ek, e3),
            _pointwise_rel(ekm1, ekm1_mp),
        )
    # closed forms: E_{2,1}(z^2) = cosh z, E_{1,2}(z) = (e^z - 1)/z
    z = Bicomplex(*(rng.uniform(0.2, 2.5, 50) * np.exp(1j * rng.uniform(-np.pi, np.pi, 50)) for _ in range(2)))
    worst = max(worst, _pointwise_rel(ml1(z * z, 2), Bicomplex(np.cosh(z.xi1), np.cosh(z.xi2))))
    closed = Bicomplex(*((np.exp(c) - 1) / c for c in z.components))
    worst = max(worst, _pointwise_rel(ml2(z, 1, 2), closed))
    return Record("special-case lattice on 100 draws (with mpmath and closed forms)", 2, [worst], 1e-12)


def _k_gamma_quad(x: float, k: float) -> float:
    f = lambda t: math.exp(-(t**k) / k)  # noqa: E731
    head, _ = integrate.quad(f, 0, 1, weight="alg", wvar=(x - 1, 0), epsabs=0, epsrel=1e-13, limit=200)
    tail, _ = integrate.quad(lambda t: t ** (x - 1) * f(t), 1, np.inf, epsabs=0, epsrel=1e-13, limit=200)
    return head + tail


def check_k_gamma(cfg: VerifyConfig) -> Record:
    rng = cfg.rng(3)
    worst = 0.0
    for k in (0.5, 1.0, 2.0, 3.0):
        for _ in range(10):
            x1, x2 = rng.uniform(0.5, 8, 2)
            val = bicomplex_k_gamma(Bicomplex(x1, x2), k)
            ref = Bicomplex(_k_gamma_quad(x1, k), _k_gamma_quad(x2, k))
            worst = max(worst, _pointwise_rel(val, ref))
    return Record("k-Gamma vs real-axis quadrature, k in {0.5,1,2,3}", 3, [worst], 1e-8)


def check_ml_oracle(cfg: VerifyConfig) -> Record:
    rng = cfg.rng(4)
    worst = 0.0
    for _ in range(30):
        m, n = _random_mn(rng), _random_mn(rng)
        l = Bicomplex(_cplx(rng, -1.5, 2.5, 1.0), _cplx(rng, -1.5, 2.5, 1.0))
        z = Bicomplex(*(rng.uniform(0, 2) * np.exp(1j * rng.uniform(-np.pi, np.pi)) for _ in range(2)))
        val = ml3(z, MLParams(m, n, l, 0))[0]
        ref = Bicomplex(*(ml3_mp(z.components[i], m.components[i], n.components[i], l.components[i]) for i in range(2)))
        worst = max(worst, _pointwise_rel(val, ref))
    return Record("ml3 vs 40-digit mpmath series on 30 draws", None, [worst], 1e-10)


# -- operators ----------------------------------------------------------------


def check_shift_integral(cfg: VerifyConfig) -> Record:
    def err(g):
        f = sampled_kernel(g, _P)
        return _rel(rl_integral(f, _ALPHA).values, _kernel(g, _M, _N + _ALPHA, _L, _R))

    grids, errs = _over_grids(cfg, err)
    return Record("I^alpha kernel = kernel with n+alpha", 5, errs, 5e-4, grids, floor=1.8, at=2049)


def check_shift_derivative(cfg: VerifyConfig) -> Record:
    def err(g):
        f = sampled_kernel(g, _P)
        mask = g.nodes > g.a
        return _rel(rl_derivative(f, _BETA).values, _kernel(g, _M, _N - _BETA, _L, _R), mask)

    grids, errs = _over_grids(cfg, err)
    return Record("D^beta kernel = kernel with n-beta (t > 0)", 5, errs, 5e-4, grids, floor=1.0, at=2049)


def check_kernel_convolution(cfg: VerifyConfig) -> Record:
    def err(g):
        fk = sampled_kernel(g, MLParams(_M, _NU, _SIG, _R))
        return _rel(prabhakar_integral(fk, _P).values, _kernel(g, _M, _N + _NU, _L + _SIG, _R))

    grids, errs = _over_grids(cfg, err)
    return Record("kernel convolution: E^l kernel(nu, sigma) = kernel(n+nu, l+sigma)", 6, errs, 5e-4, grids, floor=1.8, at=2049)


def check_semigroup(cfg: VerifyConfig) -> Record:
    def err(g):
        f = _smooth_test_fn(g)
        two = prabhakar_integral(prabhakar_integral(f, MLParams(_M, _NU, _SIG, _R)), _P)
        one = prabhakar_integral(f, MLParams(_M, _N + _NU, _L + _SIG, _R))
        return _rel(two.values, one.values)

    grids, errs = _over_grids(cfg, err)
    return Record("semigroup: E^l_n E^sigma_nu = E^(l+sigma)_(n+nu)", 6, errs, 5e-4, grids, floor=1.8, at=2049)


def check_semigroup_rl(cfg: VerifyConfig) -> Record:
    def err(g):
        f = _smooth_test_fn(g)
        two = prabhakar_integral(prabhakar_integral(f, MLParams(_M, _NU, -_L, _R)), _P)
        return _rel(two.values, rl_integral(f, _N + _NU).values)

    grids, errs = _over_grids(cfg, err)
    return Record("E^l_n E^(-l)_nu = I^(n+nu)", 6, errs, 5e-4, grids, at=2049)


def check_rl_composition(cfg: VerifyConfig) -> Record:
    def err(g):
        f = _smooth_test_fn(g)
        combined = prabhakar_integral(f, MLParams(_M, _N + _ALPHA, _L, _R)).values
        left = rl_integral(prabhakar_integral(f, _P), _ALPHA).values
        right = prabhakar_integral(rl_integral(f, _ALPHA), _P).values
        return max(_rel(left, combined), _rel(right, combined))

    grids, errs = _over_grids(cfg, err)
    return Record("I^alpha E^l = E^l_(n+alpha) = E^l I^alpha", 7, errs, 5e-4, grids, at=2049)


_LEFT_INV = (
    ("n+nu < 1", Bicomplex(0.3 + 0.1j, 0.4), Bicomplex(0.4 - 0.1j, 0.35)),
    ("1 < n+nu < 2", Bicomplex(1.2 + 0.1j, 1.3), Bicomplex(0.5 - 0.1j, 0.4)),
)


def check_left_inversion(cfg: VerifyConfig) -> list:
    out = []
    for idx, (label, n, nu) in enumerate(_LEFT_INV):
        rng = cfg.rng(80 + idx)
        c = [rng.uniform(-1, 1, 5) + 1j * rng.uniform(-1, 1, 5) for _ in range(2)]

        def err(g, c=c, n=n, nu=nu):
            t = g.nodes
            psi = SampledFn.from_components(g, *(np.polyval(ci[::-1], t) for ci in c))
            inner = prabhakar_integral(prabhakar_integral(psi, MLParams(_M, n, _L, _R)), MLParams(_M, nu, -_L, _R))
            rec = rl_derivative(inner, n + nu)
            return (rec - psi).sup_norm().max()

        grids, errs = _over_grids(cfg, err, cfg.grids_upto(2049)[-3:])
        out.append(
            Record(f"left inversion D^(n+nu) E^(-l)_nu E^l_n psi = psi ({label})", 8, errs, 1e-2, grids, at=2049, decreasing=True)
        )
    return out


def check_boundedness(cfg: VerifyConfig) -> Record:
    """``int |E f|_j <= K int |f|_j`` with the worst ratio reported (must stay below 1)."""
    rng = cfg.rng(9)
    g = Grid(0.0, 1.0, 513)
    t = g.nodes
    worst = 0.0
    for _ in range(10):
        p = MLParams(
            Bicomplex(_cplx(rng, 0.3, 2.0, 0.5), _cplx(rng, 0.3, 2.0, 0.5)),
            Bicomplex(_cplx(rng, 0.3, 2.0, 0.5), _cplx(rng, 0.3, 2.0, 0.5)),
            Bicomplex(_cplx(rng, -2, 2, 1), _cplx(rng, -2, 2, 1)),
            Bicomplex(*(rng.uniform(0, 3) * np.exp(1j * rng.uniform(-np.pi, np.pi)) for _ in range(2))),
        )
        K = boundedness_constant(p, 0.0, 1.0)
        for _ in range(2):
            comps = []
            for _ in range(2):
                a = rng.normal(size=4) + 1j * rng.normal(size=4)
                w = rng.uniform(1, 12, 2)
                comps.append(a[0] + a[1] * t + a[2] * np.sin(w[0] * t) + a[3] * np.cos(w[1] * t) ** 3)
            f = SampledFn.from_components(g, *comps)
            lhs = prabhakar_integral(f, p).l1_norm()
            rhs = f.l1_norm()
            worst = max(worst, lhs.d1 / (K.d1 * rhs.d1), lhs.d2 / (K.d2 * rhs.d2))
    return Record("boundedness: ||E f||_1 <= K ||f||_1 (worst ratio)", 9, [worst], 1.0)


def check_linearity(cfg: VerifyConfig) -> Record:
    rng = cfg.rng(10)
    g = Grid(0.0, _T, 513)
    t = g.nodes
    p = MLParams(_M, Bicomplex(0.6 + 0.1j, 0.8), _L, _R)
    f = _smooth_test_fn(g)
    h = SampledFn.from_components(g, np.cos(3 * t) + 1j * t**2, np.exp(-t) - 0.5j * t)
    a = Bicomplex(_cplx(rng, -2, 2, 2), _cplx(rng, -2, 2, 2))
    b = Bicomplex(_cplx(rng, -2, 2, 2), _cplx(rng, -2, 2, 2))
    worst = 0.0
    for op in (prabhakar_integral, prabhakar_derivative, regularized_derivative):
        mixed = op(f * a + h * b, p).values
        split = op(f, p).values * a + op(h, p).values * b
        worst = max(worst, _rel(mixed, split, t > 0))
    return Record("linearity of E, D and regularized D", 10, [worst], 1e-12)


def check_dual_form(cfg: VerifyConfig) -> list:
    out = []
    cases = (("Re n < 1", Bicomplex(0.6 + 0.1j, 0.8)), ("1 < Re n < 2", Bicomplex(1.4 + 0.1j, 1.7)))
    for label, n in cases:
        p = MLParams(_M, n, _L, _R)

        def err(g, p=p):
            f = _smooth_test_fn(g)
            lit = regularized_derivative(f, p).values
            dual = regularized_derivative_dual(f, p).values
            return _rel(lit, dual, g.nodes > g.a)

        grids, errs = _over_grids(cfg, err)
        out.append(Record(f"regularized derivative: literal vs dual form, t > 0 ({label})", 11, errs, 5e-4, grids, at=2049))
    return out


# -- Laplace ------------------------------------------------------------------


def draw_kernel_lt_case(rng):
    """Random ``(p, xi, M)`` with ``|r xi^-m|_j < 0.8`` and ``xi`` at distance 1.5 past the abscissa ``M``."""
    while True:
        ms, ns, ls, rs, xs = [], [], [], [], []
        for _ in range(2):
            mr = rng.uniform(0.5, 1.5)
            ms.append(mr + 1j * rng.uniform(-0.3, 0.3) * mr)
            ns.append(_cplx(rng, 0.6, 2.0, 0.3))
            ls.append(_cplx(rng, 0.2, 2.0, 0.5))
            rs.append(rng.uniform(0, 1) * np.exp(1j * rng.uniform(-np.pi, np.pi)))
            xs.append(rng.uniform(3, 7) * np.exp(1j * rng.uniform(-0.5, 0.5)))
        if not all(abs(rs[i] / xs[i] ** ms[i]) < 0.8 for i in range(2)):
            continue
        p = MLParams(Bicomplex(*ms), Bicomplex(*ns), Bicomplex(*ls), Bicomplex(*rs))
        xi = Bicomplex(*xs)
        M = max(0.0, max(singular_points(*p.component(i)).real.max(initial=0.0) for i in range(2))) + 0.1
        if region_ok(xi, M + 1.5):
            return p, xi, M


def check_kernel_lt(cfg: VerifyConfig) -> Record:
    rng = cfg.rng(4_000)
    worst = 0.0
    for _ in range(50):
        p, xi, M = draw_kernel_lt_case(rng)

        def f(s, p=p):
            return Bicomplex(*(kernel_values(np.array([s]), *p.component(i))[0] for i in range(2)))

        num = forward_lt_numeric(f, xi, M, tol=1e-9)
        worst = max(worst, _pointwise_rel(num, kernel_lt_closed(p, xi)))
    return Record("forward transform of the kernel vs closed form, 50 draws", 4, [worst], 1e-6)


def check_kernel_roundtrip(cfg: VerifyConfig) -> Record:
    rng = cfg.rng(4_001)
    worst = 0.0
    t = np.linspace(0.1, 5, 25)
    for _ in range(5):
        p, _, _ = draw_kernel_lt_case(rng)
        def F(s, p=p):
            return Bicomplex(*(kernel_lt(s.components[i], *p.component(i)) for i in range(2)))

        back = inverse_lt(F, t, kernel_contour(p))
        ref = Bicomplex(*(kernel_values(t, *p.component(i)) for i in range(2)))
        worst = max(worst, _pointwise_rel(back, ref))
    return Record("Talbot inverse of the closed-form transform recovers the kernel, t in [0.1, 5]", None, [worst], 1e-8)


def check_convolution_theorem(cfg: VerifyConfig) -> Record:
    n = max(cfg.grids)
    g = Grid(0.0, 20.0, n)
    t = g.nodes
    pairs = [
        (
            SampledFn.from_components(g, np.exp(-0.3 * t) * np.cos(t), (1 + 1j * t) * np.exp(-t)),
            SampledFn.from_components(g, np.ones_like(t), np.exp(0.4 * t) + 0.1j * t),
            0.4,
        ),
        (
            SampledFn.from_components(g, np.sin(2 * t) + 1j, np.exp(0.2j * t)),
            SampledFn.from_components(g, t * np.exp(-0.5 * t), np.cos(t) - 1j * t),
            0.0,
        ),
    ]
    worst = 0.0
    for f, h, M in pairs:
        for xi in (Bicomplex(2, 3), Bicomplex(2 + 1j, 1.5 - 2j), Bicomplex(1.5, 1.2)):
            worst = max(worst, convolution_lt_check(f, h, xi, M).max())
    return Record(f"Laplace convolution theorem on [0, 20], {n} points", 14, [worst], 1e-5, [n])


# -- Cauchy -------------------------------------------------------------------


def check_cauchy_exponential(cfg: VerifyConfig) -> Record:
    rng = cfg.rng(12)
    g = Grid(0.0, 2.0, 201)
    t = g.nodes
    worst = 0.0
    for _ in range(20):
        A = Bicomplex(*(rng.uniform(0, 1) * np.exp(1j * rng.uniform(-np.pi, np.pi)) for _ in range(2)))
        tau = Bicomplex(_cplx(rng, -2, 2, 2), _cplx(rng, -2, 2, 2))
        f = solve_homogeneous(CauchyProblem(MLParams.of(1, 1, 0, 0), [tau], g, A=A))
        ref = Bicomplex(*(tau.components[i] * np.exp(A.components[i] * t) for i in range(2)))
        worst = max(worst, _rel(f.values, ref))
    return Record("homogeneous, l=0 n=1: series = tau exp(A t) on [0, 2]", 12, [worst], 1e-10)


_CAUCHY_P1 = MLParams(
    Bicomplex(0.8 + 0.1j, 1.1), Bicomplex(0.7 + 0.1j, 0.8), Bicomplex(0.5 + 0.2j, 0.3), Bicomplex(-0.5 + 0.3j, 0.4)
)
_CAUCHY_P2 = MLParams(
    Bicomplex(0.9 + 0.1j, 1.2), Bicomplex(1.6 + 0.1j, 1.7), Bicomplex(0.6 + 0.2j, 0.4), Bicomplex(-0.4 + 0.3j, 0.5)
)
_CAUCHY_A = Bicomplex(-0.6 + 0.3j, 0.5)


def check_cauchy_residual(cfg: VerifyConfig) -> list:
    out = []
    cases = (
        ("kappa=1", _CAUCHY_P1, [Bicomplex(1, 2)]),
        ("kappa=2", _CAUCHY_P2, [Bicomplex(1, 2), Bicomplex(0.5j, -1)]),
    )
    for label, p, taus in cases:

        def err(g, p=p, taus=taus):
            prob = CauchyProblem(p, taus, g, A=_CAUCHY_A)
            return residual_check(solve_homogeneous(prob), prob).max()

        grids, errs = _over_grids(cfg, err, cfg.grids_upto(1025))
        out.append(Record(f"homogeneous residual ({label})", 12, errs, 1e-4, grids, floor=1.5, at=1025))
    return out


def _forcing(g: Grid) -> SampledFn:
    t = g.nodes
    return SampledFn.from_components(g, np.cos(t) + 0.2j * t, 1 - t**2 + 0.5j)


_CAUCHY_P3 = _CAUCHY_P1.replace(n=Bicomplex(0.6 + 0.1j, 0.8))


def check_corollary_consistency(cfg: VerifyConfig) -> list:
    g = Grid(0.0, 2.0, 513)
    prob = CauchyProblem(_CAUCHY_P3, [Bicomplex(1, 2)], g, k_const=Bicomplex(0, 0), g=_forcing(g))
    a = solve_nonhomogeneous(prob).values
    b = solve_corollary(prob).values
    first = Record("nonhomogeneous solver at k=0 = corollary solution", 13, [_rel(a, b)], 1e-4)

    def err(gr):
        pr = CauchyProblem(_CAUCHY_P3, [Bicomplex(1, 2)], gr, k_const=Bicomplex(0, 0), g=_forcing(gr))
        return residual_check(solve_corollary(pr), pr).max()

    grids, errs = _over_grids(cfg, err)
    second = Record("regularized derivative of the corollary solution recovers g", 13, errs, 5e-4, grids, at=2049)
    return [first, second]


def check_homogeneous_vs_transform(cfg: VerifyConfig) -> Record:
    g = Grid(0.0, 2.0, 257)
    taus = [Bicomplex(1, 2)]
    fh = solve_homogeneous(CauchyProblem(_CAUCHY_P1, taus, g, A=_CAUCHY_A))
    fn = solve_nonhomogeneous(CauchyProblem(_CAUCHY_P1, taus, g, k_const=-_CAUCHY_A))
    return Record("homogeneous series = transform solver with k = -A", None, [_rel(fh.values, fn.values)], 1e-9)


def check_nonhomogeneous_residual(cfg: VerifyConfig) -> Record:
    def err(g):
        prob = CauchyProblem(_CAUCHY_P1, [Bicomplex(1, 2)], g, k_const=Bicomplex(0.7 - 0.2j, 1.5), g=_forcing(g))
        return residual_check(solve_nonhomogeneous(prob), prob).max()

    grids, errs = _over_grids(cfg, err, cfg.grids_upto(1025))
    return Record("nonhomogeneous residual", None, errs, 1e-4, grids, floor=1.5, at=1025)


# -- suites -------------------------------------------------------------------

SUITES = {
    "algebra": (check_algebra_unit_table, check_algebra_real_roundtrip, check_algebra_division),
    "ml": (check_exponential_reduction, check_special_lattice, check_k_gamma, check_ml_oracle),
    "operators": (
        check_shift_integral,
        check_shift_derivative,
        check_kernel_convolution,
        check_semigroup,
        check_semigroup_rl,
        check_rl_composition,
        check_left_inversion,
        check_boundedness,
        check_linearity,
        check_dual_form,
    ),
    "laplace": (check_kernel_lt, check_kernel_roundtrip, check_convolution_theorem),
    "cauchy": (
        check_cauchy_exponential,
        check_cauchy_residual,
        check_corollary_consistency,
        check_homogeneous_vs_transform,
        check_nonhomogeneous_residual,
    ),
}


def run_check(check, cfg: VerifyConfig) -> list:
    """Run one check; an exception becomes a failed record instead of aborting."""
    try:
        res = check(cfg)
    except Exception as exc:  # noqa: BLE001 - reported, never swallowed silently
        name = check.__name__.removeprefix("check_").replace("_", " ")
        return [Record(name, None, [float("nan")], 0.0, note=f"{type(exc).__name__}: {exc}")]
    return res if isinstance(res, list) else [res]


def run_suite(suite: str, cfg: VerifyConfig | None = None, progress=None) -> list:
    cfg = cfg or VerifyConfig()
    names = list(SUITES) if suite == "all" else [suite]
    records = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; expected all or one of {', '.join(SUITES)}")
        for check in SUITES[name]:
            for rec in run_check(check, cfg):
                records.append(rec)
                if progress is not None:
                    progress(rec)
    return records
