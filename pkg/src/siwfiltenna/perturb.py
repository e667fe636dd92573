"""Cavity-perturbation estimates for metal posts inside the SIW cavity.

A post of radius b is treated as a perturbing disk of radius b + (r - R_eff)
in the equivalent solid-wall cavity of radius R_eff, the same fence
correction that enters Q = (b + delta) / (a - delta) for the centred case.
"""
from dataclasses import dataclass
from math import pi
from typing import Optional

import numpy as np

from . import specfun
from .cavity import EPS0, MU0, ModeIndex, ModeSolution, SiwCavitySpec, effective_radius, resonant_frequency
from .coax import CoaxCavitySpec, tm010_frequency_approx
from .errors import DomainError, GeometryError, NoSolutionError

QUAD_POINTS = 16


@dataclass(frozen=True)
class PostSpec:
    """Metal post: radius and the polar position of its axis (m, rad)."""

    radius: float
    offset_rho: float = 0.0
    offset_phi: float = 0.0

    def __post_init__(self):
        if not self.radius > 0:
            raise GeometryError(f"post radius must be > 0, got {self.radius!r}")
        if self.offset_rho < 0:
            raise GeometryError(f"offset_rho must be >= 0, got {self.offset_rho!r}")

    @property
    def centered(self):
        return self.offset_rho == 0.0


# Feed post of the reference design: r1 = 0.2 mm, 1.6 mm off centre.
PAPER_FEED_POST = PostSpec(radius=0.2e-3, offset_rho=1.6e-3, offset_phi=0.0)
PAPER_CENTER_POST = PostSpec(radius=0.55e-3)

# full-wave TM110 frequency with the centred post
PAPER_TM110_LOADED = 31.1e9


@dataclass(frozen=True)
class ShiftResult:
    f_before: float
    f_after: float

    def __post_init__(self):
        if not (self.f_before > 0 and self.f_after > 0):
            raise DomainError(f"frequencies must be positive, got {self.f_before!r}, {self.f_after!r}")

    @property
    def fractional_shift(self):
        """(f_after - f_before) / f_after."""
        return (self.f_after - self.f_before) / self.f_after

    @property
    def delta_f(self):
        return self.f_after - self.f_before

    @classmethod
    def from_fraction(cls, f_before, fraction):
        if fraction >= 1:
            raise DomainError(f"fractional shift {fraction!r} >= 1 has no positive solution")
        return cls(f_before, f_before / (1.0 - fraction))


def _p11():
    return specfun.bessel_root(1, 1)


def loading_ratio(cavity: SiwCavitySpec, post: PostSpec) -> float:
    """Q = (b + delta) / (r - delta) with delta = r - R_eff."""
    delta = cavity.r - effective_radius(cavity)
    return (post.radius + delta) / (cavity.r - delta)


def tm110_bracket(x):
    """x^2 J0(x)^2 + (x^2 - 2) J1(x)^2, i.e. 2 * int_0^x t (J1'^2 + J1^2/t^2) dt."""
    j0 = specfun.bessel_j(0, x)
    j1 = specfun.bessel_j(1, x)
    return x * x * j0 * j0 + (x * x - 2.0) * j1 * j1


def stored_energy_tm110(cavity: SiwCavitySpec, amplitude: float = 1.0) -> float:
    """eps0 * integral of |E_z|^2 over the cavity for E_z = A J1(k rho) cos(phi)."""
    a = effective_radius(cavity)
    return pi * EPS0 * cavity.h * amplitude**2 * a * a / 2.0 * specfun.bessel_j(0, _p11()) ** 2


def perturbation_energy_tm110(cavity: SiwCavitySpec, post: PostSpec, amplitude: float = 1.0) -> float:
    """mu0 * integral of |H|^2 over a centred post, same amplitude convention."""
    if not post.centered:
        raise DomainError("closed form only covers a centred post; use general_post_shift")
    q = loading_ratio(cavity, post)
    if q >= 1:
        raise GeometryError(f"loading ratio Q={q:.6g} >= 1: post does not fit in the cavity")
    a = effective_radius(cavity)
    p11 = _p11()
    return pi * EPS0 * cavity.h * amplitude**2 * a * a / (2.0 * p11 * p11) * tm110_bracket(p11 * q)


def tm110_shift_fraction(q: float) -> float:
    p11 = _p11()
    return tm110_bracket(p11 * q) / (2.0 * p11 * p11 * specfun.bessel_j(0, p11) ** 2)


def tm110_shift_centered(cavity: SiwCavitySpec, post: PostSpec, f_before: Optional[float] = None) -> ShiftResult:
    """Closed-form TM110 up-shift from a centred post (electric term dropped).

    ``f_before`` defaults to the unloaded TM110 resonance of ``cavity``.
    """
    if not post.centered:
        raise DomainError("closed form only covers a centred post; use general_post_shift")
    if f_before is None:
        f_before = resonant_frequency(cavity, ModeIndex(1, 1))
    if not f_before > 0:
        raise DomainError(f"f_before must be > 0, got {f_before!r}")
    q = loading_ratio(cavity, post)
    if q >= 1:
        raise GeometryError(f"loading ratio Q={q:.6g} >= 1: post does not fit in the cavity")
    return ShiftResult.from_fraction(f_before, tm110_shift_fraction(q))


def _disk_rule(x0, y0, radius, n=QUAD_POINTS):
    # tensor Gauss-Legendre in local polar coordinates of the disk
    t, w = np.polynomial.legendre.leggauss(n)
    r = 0.5 * (t + 1.0) * radius
    wr = 0.5 * w * radius
    th = (t + 1.0) * pi
    wth = w * pi
    rr, tt = np.meshgrid(r, th, indexing="ij")
    weights = np.outer(wr, wth) * rr
    x = x0 + rr * np.cos(tt)
    y = y0 + rr * np.sin(tt)
    return np.hypot(x, y), np.arctan2(y, x), weights


def _mode_norm(mode: ModeSolution) -> float:
    """integral of |E_z|^2 dA over the cavity for the unit-peak field."""
    n, m = mode.mode.n, mode.mode.m
    p = specfun.bessel_root(n, m)
    radial = 0.5 * mode.radius**2 * specfun.bessel_j(n + 1, p) ** 2
    angular = 2 * pi if n == 0 else pi
    return radial * angular / specfun.bessel_j_peak(n) ** 2


def perturbation_integrals(cavity: SiwCavitySpec, mode: ModeSolution, post: PostSpec):
    """(magnetic, electric) energy densities integrated over the post disk, per unit height."""
    a = mode.radius
    radius = post.radius + (cavity.r - effective_radius(cavity))
    if post.offset_rho + radius > a:
        raise GeometryError(
            f"post (offset {post.offset_rho:.6g} m, effective radius {radius:.6g} m) overlaps the fence at R_eff={a:.6g} m"
        )
    x0 = post.offset_rho * np.cos(post.offset_phi)
    y0 = post.offset_rho * np.sin(post.offset_phi)
    rho, phi, w = _disk_rule(x0, y0, radius)
    ez, hr, hp = mode.fields(rho, phi)
    mu = MU0 * mode.mu_r
    eps = EPS0 * mode.eps_r
    magnetic = mu * np.sum(w * (np.abs(hr) ** 2 + np.abs(hp) ** 2))
    electric = eps * np.sum(w * np.abs(ez) ** 2)
    return magnetic, electric


def general_post_shift(cavity: SiwCavitySpec, mode: ModeSolution, post: PostSpec,
                       include_electric: bool = True) -> ShiftResult:
    """First-order shift of ``mode`` from a post anywhere in the cavity.

    Fractional shift = (W_m - W_e over the post) / (2 W_e over the cavity):
    a post in strong H raises the frequency, one in strong E lowers it.
    ``include_electric=False`` keeps only the magnetic term, matching the
    approximation behind :func:`tm110_shift_centered`.
    """
    magnetic, electric = perturbation_integrals(cavity, mode, post)
    num = magnetic - electric if include_electric else magnetic
    den = 2.0 * EPS0 * mode.eps_r * _mode_norm(mode)
    return ShiftResult.from_fraction(mode.f, num / den)


def fbw_from_modes(f1: float, f2: float) -> float:
    """Fractional bandwidth 2 |f2 - f1| / (f1 + f2)."""
    if not (f1 > 0 and f2 > 0):
        raise DomainError(f"frequencies must be positive, got {f1!r}, {f2!r}")
    return 2.0 * abs(f2 - f1) / (f1 + f2)


def _signed_fbw(cavity, b, delta_r, f_tm110):
    f010 = tm010_frequency_approx(CoaxCavitySpec(cavity, b, delta_r))
    f110 = tm110_shift_centered(cavity, PostSpec(b), f_tm110).f_after
    return 2.0 * (f110 - f010) / (f110 + f010)


def post_radius_limits(cavity: SiwCavitySpec, delta_r: Optional[float] = None):
    """Open interval of post radii for which both estimates are defined."""
    r_eff = effective_radius(cavity)
    delta = cavity.r - r_eff
    dr = 2.0 * delta if delta_r is None else delta_r
    hi = min(0.9 * r_eff, cavity.r - dr, r_eff - delta)
    if hi <= 0:
        raise GeometryError("no admissible centre-post radius for this cavity")
    return 1e-9 * r_eff, hi * (1 - 1e-9)


def solve_post_radius(cavity: SiwCavitySpec, target_fbw: float, delta_r: Optional[float] = None,
                      f_tm110: Optional[float] = None, tol: float = 1e-9) -> float:
    """Centre-post radius b giving the requested TM010/TM110 spacing.

    TM010 follows the closed-form coaxial estimate (with ``delta_r`` as in
    :class:`CoaxCavitySpec`), TM110 the centred-post shift. The signed
    spacing falls monotonically with b until the modes cross; the root on
    that branch (TM010 below TM110) is returned.
    """
    if target_fbw < 0:
        raise DomainError(f"target_fbw must be >= 0, got {target_fbw!r}")
    lo, hi = post_radius_limits(cavity, delta_r)
    g_lo = _signed_fbw(cavity, lo, delta_r, f_tm110) - target_fbw
    g_hi = _signed_fbw(cavity, hi, delta_r, f_tm110) - target_fbw
    if g_lo < 0 or g_hi > 0:
        top = g_lo + target_fbw
        bottom = max(g_hi + target_fbw, 0.0)
        raise NoSolutionError(
            f"target fbw {target_fbw:.6g} unreachable; achievable range is [{bottom:.6g}, {top:.6g}]"
            f" for b in ({lo:.3g}, {hi:.6g}) m"
        )
    while hi - lo > tol * cavity.r:
        mid = 0.5 * (lo + hi)
        g = _signed_fbw(cavity, mid, delta_r, f_tm110) - target_fbw
        if g > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
