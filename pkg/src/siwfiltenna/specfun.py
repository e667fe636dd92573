"""Cylinder functions used throughout the cavity analysis.

Function values come from :mod:`scipy.special`; the root table and the
closed-form ``x * J * J`` integrals are computed here.
"""
from functools import lru_cache

import numpy as np
from scipy import optimize, special

from .errors import DomainError, IndexRangeError

MAX_ORDER = 10
MAX_ROOT = 20

LOMMEL_KINDS = ("J1SQ", "J0SQ", "J2SQ", "J0J2")
# below this argument the closed forms lose digits to cancellation (the
# integrals grow like x^2 .. x^6), so the integrand is summed directly
LOMMEL_SMALL_X = 2.0
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def _check_order(n):
    if isinstance(n, bool) or int(n) != n or not 0 <= n <= MAX_ORDER:
        raise IndexRangeError(f"Bessel order n={n!r} outside supported range 0..{MAX_ORDER}")
    return int(n)


def bessel_j(n: int, x):
    """J_n(x) for integer order 0 <= n <= 10."""
    n = _check_order(n)
    return special.jv(n, x)


def bessel_y(n: int, x):
    """Neumann function Y_n(x); x must be strictly positive."""
    n = _check_order(n)
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise DomainError(f"Y_{n}(x) requires x > 0, got x={x!r}")
    return special.yv(n, x)


def bessel_j_prime(n: int, x):
    """dJ_n/dx via J_n' = (J_{n-1} - J_{n+1}) / 2 (J_0' = -J_1)."""
    n = _check_order(n)
    if n == 0:
        return -special.jv(1, x)
    return 0.5 * (special.jv(n - 1, x) - special.jv(n + 1, x))


def bessel_y_prime(n: int, x):
    n = _check_order(n)
    bessel_y(n, x)  # domain check
    if n == 0:
        return -special.yv(1, x)
    return 0.5 * (special.yv(n - 1, x) - special.yv(n + 1, x))


def _mcmahon(n, m):
    # leading terms of the large-root expansion of j_{n,m}
    mu = 4.0 * n * n
    beta = (m + 0.5 * n - 0.25) * np.pi
    e = 8.0 * beta
    return beta - (mu - 1) / e - 4 * (mu - 1) * (7 * mu - 31) / (3 * e**3)


def _refine(n, lo, hi):
    f = lambda t: special.jv(n, t)
    return optimize.brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


@lru_cache(maxsize=None)
def _root_table():
    # J_0 zeros bracketed around McMahon guesses; J_{n+1} zeros then sit
    # strictly between consecutive J_n zeros (interlacing), one per gap.
    count = MAX_ROOT + MAX_ORDER + 1
    prev = []
    for m in range(1, count + 1):
        g = _mcmahon(0, m)
        lo, hi = g - 0.5, g + 0.5
        if special.j0(lo) * special.j0(hi) > 0:
            raise RuntimeError(f"failed to bracket j_0,{m}")
        prev.append(_refine(0, lo, hi))
    table = [tuple(prev)]
    for n in range(1, MAX_ORDER + 1):
        cur = [_refine(n, prev[i], prev[i + 1]) for i in range(len(prev) - 1)]
        table.append(tuple(cur))
        prev = cur
    return tuple(t[:MAX_ROOT] for t in table)


def bessel_root(n: int, m: int) -> float:
    """m-th positive zero of J_n (P_nm), for n <= 10 and m <= 20."""
    n = _check_order(n)
    if isinstance(m, bool) or int(m) != m or not 1 <= m <= MAX_ROOT:
        raise IndexRangeError(f"root index m={m!r} outside supported range 1..{MAX_ROOT}")
    return _root_table()[n][int(m) - 1]


def bessel_roots(n: int, count: int):
    """First ``count`` zeros of J_n as an array."""
    n = _check_order(n)
    if not 1 <= count <= MAX_ROOT:
        raise IndexRangeError(f"count={count} outside 1..{MAX_ROOT}")
    return np.array(_root_table()[n][:count])


def bessel_j_peak(n: int) -> float:
    """max |J_n(x)| over x >= 0 (attained at the first zero of J_n')."""
    n = _check_order(n)
    if n == 0:
        return 1.0
    x = optimize.brentq(lambda t: bessel_j_prime(n, t), 1e-12, bessel_root(n, 1), xtol=1e-15)
    return float(abs(special.jv(n, x)))


def lommel_integrals(kind: str, x):
    """Closed-form integrals from 0 to x of t*J*J products.

    ``kind`` is one of ``J1SQ`` (t J1^2), ``J0SQ`` (t J0^2), ``J2SQ``
    (t J2^2) or ``J0J2`` (t J0 J2). All four vanish at x = 0.
    """
    if kind not in LOMMEL_KINDS:
        raise IndexRangeError(f"unknown integral identity {kind!r}; expected one of {LOMMEL_KINDS}")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise DomainError(f"integral upper limit must be >= 0, got {x!r}")
    j0 = special.j0(xa)
    j1 = special.j1(xa)
    x2 = xa * xa
    if kind == "J1SQ":
        out = 0.5 * xa * (xa * j0**2 + xa * j1**2 - 2.0 * j0 * j1)
    elif kind == "J0SQ":
        out = 0.5 * x2 * (j0**2 + j1**2)
    elif kind == "J2SQ":
        out = 0.5 * x2 * j0**2 + 0.5 * (x2 - 4.0) * j1**2
    else:
        out = 1.0 - 0.5 * x2 * j1**2 - 0.5 * (2.0 + x2) * j0**2
    small = xa < LOMMEL_SMALL_X
    if np.any(small):
        out = np.where(small, _lommel_quadrature(kind, np.where(small, xa, 0.0)), out)
    return out[()] if out.ndim == 0 else out


def _lommel_quadrature(kind, x):
    t = 0.5 * x[..., None] * (_GL_NODES + 1.0)
    a, b = {"J1SQ": (1, 1), "J0SQ": (0, 0), "J2SQ": (2, 2), "J0J2": (0, 2)}[kind]
    f = t * special.jv(a, t) * special.jv(b, t)
    return 0.5 * x * (f @ _GL_WEIGHTS)
