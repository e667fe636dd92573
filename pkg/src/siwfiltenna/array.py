"""Uniform linear array: array factor, beam scanning and per-beam filtering.

Only relative quantities are modelled. The element power pattern is
cos^q(theta); mutual coupling is ignored.
"""
from dataclasses import dataclass
from math import pi
from typing import NamedTuple, Optional

import numpy as np

from .cavity import C0
from .coupling import SParamSweep
from .errors import DomainError, IndexRangeError

DB_FLOOR = -80.0
GRID_STEP_DEG = 0.05


@dataclass(frozen=True)
class ArraySpec:
    n_elements: int
    spacing: float
    f: float
    weights: Optional[tuple] = None
    q: float = 0.0

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise DomainError(f"n_elements must be a positive integer, got {self.n_elements!r}")
        if not self.spacing > 0:
            raise DomainError(f"spacing must be > 0, got {self.spacing!r}")
        if not self.f > 0:
            raise DomainError(f"frequency must be > 0, got {self.f!r}")
        if self.q < 0:
            raise DomainError(f"element exponent q must be >= 0, got {self.q!r}")
        if self.weights is not None:
            w = tuple(complex(x) for x in self.weights)
            if len(w) != self.n_elements:
                raise DomainError(f"{len(w)} weights given for {self.n_elements} elements")
            object.__setattr__(self, "weights", w)

    @property
    def w(self):
        if self.weights is None:
            return np.ones(self.n_elements, dtype=complex)
        return np.array(self.weights, dtype=complex)

    @property
    def wavelength(self):
        return C0 / self.f


# 1x8 array of the reference design. Spacing 7.0 mm and q = 2 are fitted;
# the design only says neighbours share a via row (so spacing < 8 mm).
PAPER_ARRAY = ArraySpec(n_elements=8, spacing=7.0e-3, f=28e9, q=2.0)
PRESETS = {"paper": PAPER_ARRAY}
PRESET_NOTES = {"paper": "n=8, uniform weights, f=28 GHz; spacing 7.0 mm and cos^2 element pattern fitted"}


def _element(theta, q):
    c = np.clip(np.cos(theta), 0.0, None)
    return c ** (q / 2.0)


def array_factor(spec: ArraySpec, theta0: float, theta, f: Optional[float] = None, steer_f: Optional[float] = None):
    """Complex pattern sum_k w_k exp(j k0 d k (sin theta - sin theta0)) * cos^(q/2) theta.

    ``f`` evaluates the array at another frequency; the progressive phase
    stays designed at ``steer_f`` (default ``spec.f``).
    """
    theta = np.asarray(theta, dtype=float)
    if np.any(np.abs(theta) > pi / 2 + 1e-12) or abs(theta0) > pi / 2 + 1e-12:
        raise DomainError("angles must lie in [-pi/2, pi/2]")
    f = spec.f if f is None else f
    steer_f = spec.f if steer_f is None else steer_f
    k = np.arange(spec.n_elements)
    kd = 2 * pi * spec.spacing / C0
    phase = kd * np.outer(np.sin(theta).ravel() * f - np.sin(theta0) * steer_f, k)
    af = np.exp(1j * phase) @ spec.w
    return (af * _element(theta.ravel(), spec.q)).reshape(theta.shape)[()]


def theta_grid(step_deg: float = GRID_STEP_DEG):
    n = int(round(180.0 / step_deg))
    return np.radians(np.linspace(-90.0, 90.0, n + 1))


def _db(power, ref):
    with np.errstate(divide="ignore"):
        out = 10 * np.log10(power / ref)
    return np.maximum(out, DB_FLOOR)


@dataclass
class ScanResult:
    theta0: float
    theta: np.ndarray
    pattern: np.ndarray
    peak_angle: float
    peak_gain_rel: float
    sll: float
    scan_loss: float


def _main_lobe_bounds(p, i):
    lo = i
    while lo > 0 and p[lo - 1] <= p[lo]:
        lo -= 1
    hi = i
    while hi < p.size - 1 and p[hi + 1] <= p[hi]:
        hi += 1
    return lo, hi


def scan_sweep(spec: ArraySpec, theta0s, step_deg: float = GRID_STEP_DEG):
    """Patterns for each steering angle, all in dB relative to the broadside beam peak."""
    theta = theta_grid(step_deg)
    ref = np.max(np.abs(array_factor(spec, 0.0, theta)) ** 2)
    out = []
    for t0 in theta0s:
        p = np.abs(array_factor(spec, t0, theta)) ** 2
        i = int(np.argmax(p))
        lo, hi = _main_lobe_bounds(p, i)
        side = np.concatenate([p[:lo], p[hi + 1:]])
        sll = _db(side.max(), p[i]) if side.size else DB_FLOOR
        gain = float(_db(p[i], ref))
        out.append(ScanResult(float(t0), theta, _db(p, ref), float(theta[i]), gain, float(sll), -gain + 0.0))
    return out


class GratingLobe(NamedTuple):
    visible: bool
    angle: Optional[float]


def grating_lobe_onset(spacing: float, f: float, theta0: float) -> GratingLobe:
    """First grating lobe in visible space, if any, for a beam steered to ``theta0``."""
    if not (spacing > 0 and f > 0):
        raise DomainError("spacing and frequency must be positive")
    ratio = spacing * f / C0
    u0 = np.sin(theta0)
    if ratio <= 1.0 / (1.0 + abs(u0)):
        return GratingLobe(False, None)
    shift = C0 / (f * spacing)
    u = u0 - shift if u0 >= 0 else u0 + shift
    return GratingLobe(True, float(np.arcsin(u)))


def scanned_filter_response(element: SParamSweep, spec: ArraySpec, theta0: float, band=None,
                            true_time_delay: bool = False, step_deg: float = 0.1):
    """Normalised per-frequency gain (dB) of one beam with a filtering element.

    |S21(f)|^2 of the element times the beam-peak array gain at f. With
    phase steering the progressive phase is fixed at ``spec.f`` so the beam
    squints with frequency; ``true_time_delay`` removes that dependence.
    Returns (freqs, gain_db) with the curve's maximum at 0 dB.
    """
    freqs = element.freqs
    if band is not None:
        lo, hi = band
        if lo < freqs[0] or hi > freqs[-1]:
            raise IndexRangeError(
                f"band [{lo:.6g}, {hi:.6g}] Hz not covered by element data [{freqs[0]:.6g}, {freqs[-1]:.6g}] Hz"
            )
        keep = (freqs >= lo) & (freqs <= hi)
    else:
        keep = np.ones(freqs.size, dtype=bool)
    f_sel = freqs[keep]
    s21 = element.s21[keep]
    theta = theta_grid(step_deg)
    gain = np.empty(f_sel.size)
    for i, fi in enumerate(f_sel):
        steer = fi if true_time_delay else spec.f
        gain[i] = np.max(np.abs(array_factor(spec, theta0, theta, f=fi, steer_f=steer)) ** 2)
    total = np.abs(s21) ** 2 * gain
    return f_sel, _db(total, total.max())


def pattern_csv(result: ScanResult) -> str:
    lines = ["theta_deg,gain_db"]
    for t, g in zip(np.degrees(result.theta), result.pattern):
        lines.append(f"{t:.4f},{g:.6f}")
    return "\r\n".join(lines) + "\r\n"
