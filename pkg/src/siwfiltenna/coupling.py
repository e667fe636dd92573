"""Coupled-resonator filter engine built on the N+2 coupling matrix.

Row/column 0 is the source, the last one the load. The lossless response
at lowpass frequency W is obtained from

    A(W) = M + W*U - j*R,    S21 = -2j [A^-1]_{L,S},    S11 = 1 + 2j [A^-1]_{S,S}

where U is the identity on resonator rows and R the identity on the
source/load rows.
"""
from dataclasses import dataclass, field
from math import pi
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, GeometryError, GridTooCoarseError, IndexRangeError

MAX_ORDER = 32
JITTER = 1e-12
# adjacent unwrapped phase steps must stay clearly below pi
MAX_PHASE_STEP = 0.9 * pi


class CouplingMatrix:
    """Real symmetric (N+2)x(N+2) coupling matrix indexed S, 1..N, L."""

    def __init__(self, entries):
        m = np.array(entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 3:
            raise GeometryError(f"coupling matrix must be square with size >= 3, got shape {m.shape}")
        if m.shape[0] - 2 > MAX_ORDER:
            raise GeometryError(f"order {m.shape[0] - 2} exceeds the supported {MAX_ORDER}")
        if not np.all(np.isfinite(m)):
            raise GeometryError("coupling matrix has non-finite entries")
        if not np.array_equal(m, m.T):
            i, j = np.argwhere(m != m.T)[0]
            raise GeometryError(f"coupling matrix not symmetric at ({i}, {j}): {m[i, j]} != {m[j, i]}")
        if m[0, 0] != 0 or m[-1, -1] != 0:
            raise GeometryError("source and load self-couplings must be zero")
        m.setflags(write=False)
        self._m = m

    @property
    def order(self):
        return self._m.shape[0] - 2

    @property
    def size(self):
        return self._m.shape[0]

    def to_array(self):
        return self._m.copy()

    def index(self, label) -> int:
        """Row index for 'S', 'L' or a 1-based resonator number."""
        if label in ("S", "s"):
            return 0
        if label in ("L", "l"):
            return self.size - 1
        k = int(label)
        if not 1 <= k <= self.order:
            raise IndexRangeError(f"resonator index {label!r} outside 1..{self.order}")
        return k

    def __getitem__(self, key):
        i, j = key
        return float(self._m[self.index(i), self.index(j)])

    def with_entry(self, i, j, value):
        """Copy with M[i, j] = M[j, i] = value."""
        m = self.to_array()
        a, b = self.index(i), self.index(j)
        m[a, b] = m[b, a] = value
        return CouplingMatrix(m)

    def __eq__(self, other):
        return isinstance(other, CouplingMatrix) and np.array_equal(self._m, other._m)

    def __repr__(self):
        return f"CouplingMatrix({self._m.tolist()!r})"


@dataclass(frozen=True)
class BandMap:
    f0: float
    fbw: float

    def __post_init__(self):
        if not self.f0 > 0:
            raise DomainError(f"center frequency must be > 0, got {self.f0!r}")
        if not 0 < self.fbw < 1:
            raise DomainError(f"fractional bandwidth must be in (0, 1), got {self.fbw!r}")

    def omega(self, f):
        """Lowpass variable (f/f0 - f0/f) / fbw."""
        f = np.asarray(f, dtype=float)
        return (f / self.f0 - self.f0 / f) / self.fbw


@dataclass
class SParamSweep:
    """Frequency-indexed S-matrices, shape (F, P, P) with P in {1, 2}."""

    freqs: np.ndarray
    s: np.ndarray
    z0: float = 50.0
    comments: list = field(default_factory=list)
    # (fmt, freqs, values) as parsed from a file; lets an unchanged sweep be
    # written back without a polar/complex conversion round
    source: Optional[tuple] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.freqs = np.asarray(self.freqs, dtype=float)
        self.s = np.asarray(self.s, dtype=complex)
        if self.freqs.ndim != 1 or self.freqs.size == 0:
            raise DomainError("sweep needs at least one frequency point")
        if self.s.ndim != 3 or self.s.shape[0] != self.freqs.size or self.s.shape[1] != self.s.shape[2]:
            raise DomainError(f"S data shape {self.s.shape} does not match {self.freqs.size} frequencies")
        if self.s.shape[1] not in (1, 2):
            raise DomainError(f"only 1- and 2-port data supported, got {self.s.shape[1]} ports")
        if np.any(np.diff(self.freqs) <= 0):
            i = int(np.argmax(np.diff(self.freqs) <= 0)) + 1
            raise DomainError(f"frequencies must be strictly ascending (index {i})")

    @property
    def nports(self):
        return self.s.shape[1]

    @property
    def s11(self):
        return self.s[:, 0, 0]

    def _need2(self):
        if self.nports != 2:
            raise DomainError("1-port sweep has no transmission parameters")

    @property
    def s21(self):
        self._need2()
        return self.s[:, 1, 0]

    @property
    def s12(self):
        self._need2()
        return self.s[:, 0, 1]

    @property
    def s22(self):
        self._need2()
        return self.s[:, 1, 1]

    def param(self, name):
        return {"11": lambda: self.s11, "21": lambda: self.s21,
                "12": lambda: self.s12, "22": lambda: self.s22}[str(name)]()


def _system(m, omega):
    n = m.shape[0]
    u = np.eye(n)
    u[0, 0] = u[-1, -1] = 0.0
    r = np.zeros((n, n))
    r[0, 0] = r[-1, -1] = 1.0
    return m[None, :, :] + omega[:, None, None] * u[None, :, :] - 1j * r[None, :, :]


def synthesize_response(M: CouplingMatrix, band: BandMap, freqs) -> SParamSweep:
    """Lossless two-port response of ``M`` over ``freqs`` (Hz).

    A point where A is singular is solved with a 1e-12 diagonal jitter.
    S12 is set equal to S21; A is complex symmetric so they agree
    analytically.
    """
    freqs = np.asarray(freqs, dtype=float)
    if freqs.ndim != 1 or freqs.size == 0 or np.any(freqs <= 0):
        raise DomainError("frequencies must be a non-empty list of positive values")
    m = M.to_array()
    n = m.shape[0]
    a = _system(m, band.omega(freqs))
    rhs = np.zeros((n, 2), dtype=complex)
    rhs[0, 0] = 1.0
    rhs[-1, 1] = 1.0
    x = np.empty((freqs.size, n, 2), dtype=complex)
    for i in range(freqs.size):
        try:
            x[i] = np.linalg.solve(a[i], rhs)
        except np.linalg.LinAlgError:
            x[i] = np.linalg.solve(a[i] + JITTER * np.eye(n), rhs)
    s = np.empty((freqs.size, 2, 2), dtype=complex)
    s[:, 0, 0] = 1.0 + 2j * x[:, 0, 0]
    s[:, 1, 0] = -2j * x[:, -1, 0]
    s[:, 0, 1] = s[:, 1, 0]
    s[:, 1, 1] = 1.0 + 2j * x[:, -1, 1]
    return SParamSweep(freqs, s)


def group_delay(sweep: SParamSweep, port_pair="11"):
    """-d(phase)/d(omega) in seconds at each frequency of the sweep."""
    if sweep.freqs.size < 3:
        raise DomainError("group delay needs at least 3 frequency points")
    data = sweep.param(port_pair)
    steps = np.angle(data[1:] * np.conj(data[:-1]))
    worst = np.max(np.abs(steps))
    if worst >= MAX_PHASE_STEP:
        k = int(np.argmax(np.abs(steps)))
        raise GridTooCoarseError(
            f"phase of S{port_pair} jumps {worst:.3f} rad between {sweep.freqs[k]:.6g} and "
            f"{sweep.freqs[k + 1]:.6g} Hz; refine the frequency grid"
        )
    phase = np.unwrap(np.angle(data))
    return -np.gradient(phase, 2 * pi * sweep.freqs, edge_order=2)


def qext_from_group_delay(tau: float, f0: float) -> float:
    """Q_ext = 2 pi f0 tau / 4 from the S11 group delay at resonance."""
    if not tau > 0:
        raise DomainError(f"group delay must be > 0, got {tau!r}")
    if not f0 > 0:
        raise DomainError(f"f0 must be > 0, got {f0!r}")
    return 2 * pi * f0 * tau / 4.0


def qext_from_matrix(M: CouplingMatrix, band: BandMap, port="S", resonator=1) -> float:
    """Q_e = 1 / (fbw * M[port, resonator]^2)."""
    if port not in ("S", "L"):
        raise IndexRangeError(f"port must be 'S' or 'L', got {port!r}")
    k = M[port, resonator]
    if k == 0:
        raise DomainError(f"M[{port},{resonator}] is zero: resonator not coupled to the port")
    return 1.0 / (band.fbw * k * k)


def single_resonator_matrix(qe: float, fbw: float, doubly_loaded: bool = False) -> CouplingMatrix:
    """One resonator at band centre coupled to the source for external Q ``qe``."""
    if not qe > 0:
        raise DomainError(f"qe must be > 0, got {qe!r}")
    k = 1.0 / np.sqrt(fbw * qe)
    return CouplingMatrix([[0, k, 0], [k, 0, k if doubly_loaded else 0], [0, k if doubly_loaded else 0, 0]])


def _golden_min(fn, lo, hi, tol):
    g = (np.sqrt(5.0) - 1.0) / 2.0
    c = hi - g * (hi - lo)
    d = lo + g * (hi - lo)
    fc, fd = fn(c), fn(d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - g * (hi - lo)
            fc = fn(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + g * (hi - lo)
            fd = fn(d)
    return 0.5 * (lo + hi)


def transmission_zeros(M: CouplingMatrix, band: BandMap, search: Sequence[float],
                       points: int = 4001, depth_db: float = 40.0, tol: float = 1e6):
    """Frequencies (Hz) of |S21| nulls inside ``search``.

    Local minima of a dense sweep lying ``depth_db`` below the passband peak
    are polished by golden-section search to ``tol`` Hz.
    """
    f_lo, f_hi = search
    if not 0 < f_lo < f_hi:
        raise DomainError(f"invalid search interval {search!r}")
    f = np.linspace(f_lo, f_hi, points)
    mag = np.abs(synthesize_response(M, band, f).s21)
    peak = max(mag.max(), np.abs(synthesize_response(M, band, [band.f0]).s21)[0])
    floor = peak * 10 ** (-depth_db / 20)

    def s21_mag(x):
        return abs(synthesize_response(M, band, [x]).s21[0])

    zeros = []
    for i in range(1, points - 1):
        if mag[i] <= mag[i - 1] and mag[i] < mag[i + 1]:
            fz = _golden_min(s21_mag, f[i - 1], f[i + 1], tol)
            if s21_mag(fz) <= floor:
                zeros.append(float(fz))
    return zeros


FILTENNA1_MATRIX = CouplingMatrix([
    [0.00, 0.95, 0.47, 0.00],
    [0.95, 0.32, 0.00, 0.95],
    [0.47, 0.00, -2.27, -0.47],
    [0.00, 0.95, -0.47, 0.00],
])

FILTENNA2_MATRIX = CouplingMatrix([
    [0.00, 1.12, 0.67, 0.00],
    [1.12, 1.95, 0.00, 1.12],
    [0.67, 0.00, -2.02, -0.67],
    [0.00, 1.12, -0.67, 0.00],
])


@dataclass(frozen=True)
class FilterPreset:
    name: str
    matrix: CouplingMatrix
    band: BandMap
    passband: tuple
    # external Q of (resonator 1, resonator 2) quoted with the design
    reported_qext: tuple


PRESETS = {
    "filtenna1": FilterPreset("filtenna1", FILTENNA1_MATRIX, BandMap(28e9, 0.071), (27e9, 29e9), (24.0, 98.0)),
    "filtenna2": FilterPreset("filtenna2", FILTENNA2_MATRIX, BandMap(29e9, 0.069), (28e9, 30e9), (15.5, 43.4)),
}


def get_preset(name: str) -> FilterPreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise IndexRangeError(f"unknown filter preset {name!r}; choose from {sorted(PRESETS)}") from None


def return_loss_db(sweep: SParamSweep):
    return -20 * np.log10(np.maximum(np.abs(sweep.s11), 1e-300))
