"""Touchstone v1 reader/writer for 1- and 2-port S-parameter files."""
from dataclasses import dataclass, field

import numpy as np

from .coupling import SParamSweep
from .errors import DomainError, ParseError

UNITS = {"HZ": 1.0, "KHZ": 1e3, "MHZ": 1e6, "GHZ": 1e9}
FORMATS = ("RI", "MA", "DB")
# 15 significant digits survive text -> float -> text unchanged
DIGITS = 15


@dataclass
class TouchstoneFile:
    freq_unit: str = "GHZ"
    parameter: str = "S"
    fmt: str = "MA"
    z0: float = 50.0
    nports: int = 2
    comments: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    @property
    def option_line(self):
        unit = {"HZ": "Hz", "KHZ": "kHz", "MHZ": "MHz", "GHZ": "GHz"}[self.freq_unit]
        return f"# {unit} {self.parameter} {self.fmt} R {_num(self.z0)}"


def _num(x):
    s = f"{x:.{DIGITS}g}"
    return "0" if s == "-0" else s


def _parse_option(tokens, lineno):
    opts = TouchstoneFile()
    toks = [t.upper() for t in tokens[1:]]
    i = 0
    while i < len(toks):
        t = toks[i]
        if t in UNITS:
            opts.freq_unit = t
        elif t in FORMATS:
            opts.fmt = t
        elif t in ("S", "Y", "Z", "H", "G"):
            if t != "S":
                raise ParseError(f"only S-parameters are supported, got {t!r}", lineno)
            opts.parameter = t
        elif t == "R":
            if i + 1 >= len(toks):
                raise ParseError("option 'R' needs a reference resistance", lineno)
            try:
                opts.z0 = float(toks[i + 1])
            except ValueError:
                raise ParseError(f"bad reference resistance {tokens[i + 2]!r}", lineno) from None
            if not opts.z0 > 0:
                raise ParseError(f"reference resistance must be > 0, got {opts.z0}", lineno)
            i += 1
        else:
            raise ParseError(f"unrecognised option token {tokens[i + 1]!r}", lineno)
        i += 1
    return opts


def _to_complex(a, b, fmt):
    if fmt == "RI":
        return complex(a, b)
    mag = a if fmt == "MA" else 10.0 ** (a / 20.0)
    return mag * complex(np.cos(np.radians(b)), np.sin(np.radians(b)))


def _from_complex(z, fmt):
    if fmt == "RI":
        return z.real, z.imag
    ang = float(np.degrees(np.angle(z)))
    mag = abs(z)
    if fmt == "MA":
        return mag, ang
    return (20.0 * np.log10(mag) if mag > 0 else -3000.0), ang


def read_touchstone(data, nports=None):
    """Parse v1 text (str or bytes) into ``(TouchstoneFile, SParamSweep)``.

    The port count is taken from ``nports`` or inferred from the width of
    the first data row (3 values: 1-port, 9 values: 2-port).
    """
    if isinstance(data, bytes):
        data = data.decode("ascii", errors="strict")
    opts = None
    comments = []
    rows = []
    width = None if nports is None else 1 + 2 * nports * nports
    last_f = None
    for lineno, raw in enumerate(data.splitlines(), start=1):
        body, _, note = raw.partition("!")
        if _:
            comments.append(note)
        body = body.strip()
        if not body:
            continue
        tokens = body.split()
        if tokens[0].startswith("#"):
            if opts is not None:
                raise ParseError("duplicate option line", lineno)
            if tokens[0] != "#":
                tokens = ["#", tokens[0][1:]] + tokens[1:]
            opts = _parse_option(tokens, lineno)
            continue
        if opts is None:
            opts = TouchstoneFile()
        try:
            vals = [float(t) for t in tokens]
        except ValueError:
            raise ParseError(f"non-numeric value in data row: {body!r}", lineno) from None
        if width is None:
            if len(vals) not in (3, 9):
                raise ParseError(f"cannot infer port count from a row of {len(vals)} values", lineno)
            width = len(vals)
        if len(vals) != width:
            raise ParseError(f"expected {width} values per row, got {len(vals)}", lineno)
        f = vals[0] * UNITS[opts.freq_unit]
        if last_f is not None and f <= last_f:
            raise ParseError(f"frequency {vals[0]!r} is not above the previous point", lineno)
        last_f = f
        rows.append((lineno, vals))
    if opts is None:
        opts = TouchstoneFile()
    if not rows:
        raise ParseError("no data rows found")
    p = 1 if width == 3 else 2
    opts.nports = p
    opts.comments = comments
    opts.rows = [v for _, v in rows]
    freqs = np.array([v[0] for _, v in rows]) * UNITS[opts.freq_unit]
    s = _assemble(np.array([v[1:] for _, v in rows]), p, opts.fmt)
    source = (opts.fmt, freqs.copy(), np.array([v[1:] for _, v in rows]))
    return opts, SParamSweep(freqs, s, z0=opts.z0, comments=list(comments), source=source)


def _order(p):
    # v1 2-port order: S11 S21 S12 S22
    return [(0, 0)] if p == 1 else [(0, 0), (1, 0), (0, 1), (1, 1)]


def _assemble(values, p, fmt):
    s = np.empty((values.shape[0], p, p), dtype=complex)
    for r, v in enumerate(values):
        for c, (i, j) in enumerate(_order(p)):
            s[r, i, j] = _to_complex(v[2 * c], v[2 * c + 1], fmt)
    return s


def _cached_values(sweep, fmt):
    # format-level numbers from the file the sweep was read from, if still valid
    if sweep.source is None:
        return None
    src_fmt, freqs, values = sweep.source
    if src_fmt != fmt or not np.array_equal(freqs, sweep.freqs):
        return None
    if values.shape[1] != 2 * sweep.nports**2 or not np.array_equal(_assemble(values, sweep.nports, fmt), sweep.s):
        return None
    return values


def write_touchstone(sweep: SParamSweep, fmt="RI", freq_unit="GHz", comments=None) -> bytes:
    """Serialise ``sweep`` as deterministic Touchstone v1 text."""
    fmt = fmt.upper()
    unit = freq_unit.upper()
    if fmt not in FORMATS:
        raise DomainError(f"unknown Touchstone format {fmt!r}; expected one of {FORMATS}")
    if unit not in UNITS:
        raise DomainError(f"unknown frequency unit {freq_unit!r}")
    if sweep.freqs.size == 0:
        raise DomainError("cannot write an empty sweep")
    head = TouchstoneFile(freq_unit=unit, fmt=fmt, z0=sweep.z0, nports=sweep.nports)
    lines = [f"!{c}" for c in (sweep.comments if comments is None else comments)]
    lines.append(head.option_line)
    scale = UNITS[unit]
    cached = _cached_values(sweep, fmt)
    for r, (f, sm) in enumerate(zip(sweep.freqs, sweep.s)):
        parts = [_num(f / scale)]
        if cached is not None:
            parts += [_num(x) for x in cached[r]]
        else:
            for i, j in _order(sweep.nports):
                a, b = _from_complex(complex(sm[i, j]), fmt)
                parts += [_num(a), _num(b)]
        lines.append(" ".join(parts))
    return ("\n".join(lines) + "\n").encode("ascii")
