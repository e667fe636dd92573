import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from siwfiltenna.coupling import PRESETS, SParamSweep, synthesize_response
from siwfiltenna.errors import DomainError, ParseError
from siwfiltenna.touchstone import read_touchstone, write_touchstone


def filtenna1_sweep():
    p = PRESETS["filtenna1"]
    return synthesize_response(p.matrix, p.band, np.linspace(26e9, 32e9, 61))


def test_minimal_two_port():
    text = "# GHz S RI R 50\n28.0 0.1 -0.2 0.9 0.05 0.9 0.05 0.1 -0.2\n"
    head, sw = read_touchstone(text)
    assert head.nports == 2 and head.fmt == "RI" and head.z0 == 50
    assert sw.freqs.tolist() == [28e9]
    assert sw.s11[0] == 0.1 - 0.2j
    assert sw.s21[0] == 0.9 + 0.05j
    assert sw.s22[0] == 0.1 - 0.2j


def test_db_unit_point():
    _, sw = read_touchstone(b"# Hz S DB R 50\n1 0 0\n")
    assert sw.nports == 1
    assert sw.s11[0] == 1 + 0j


def test_ma_conversion():
    _, sw = read_touchstone("# MHz S MA R 75\n100 0.5 90\n")
    assert sw.freqs[0] == 100e6
    assert sw.z0 == 75
    assert sw.s11[0] == pytest.approx(0.5j, abs=1e-16)


def test_defaults_without_option_line():
    head, sw = read_touchstone("1.0 0.5 0\n")
    assert head.freq_unit == "GHZ" and head.fmt == "MA"
    assert sw.freqs[0] == 1e9


@pytest.mark.parametrize("text,line", [
    ("# GHz S RI R 50\n28 1 0 0 0 0 0 1 0\n27 1 0 0 0 0 0 1 0\n", 3),
    ("! c\n# GHz S RI R 50\n28 1 0 0 0\n", 3),
    ("# GHz S RI R 50\n28 1 0 0 0 0 0 1 0\n29 1 0 0 0 0 0 1\n", 3),
    ("# GHz S XX R 50\n28 1 0\n", 1),
    ("# GHz Z RI R 50\n28 1 0\n", 1),
    ("# GHz S RI R\n28 1 0\n", 1),
    ("# GHz S RI R -5\n28 1 0\n", 1),
    ("# GHz S RI R 50\n28 1 abc\n", 2),
    ("# GHz S RI R 50\n# GHz S RI R 50\n28 1 0\n", 2),
])
def test_malformed_inputs_name_the_line(text, line):
    with pytest.raises(ParseError) as info:
        read_touchstone(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_empty_file():
    with pytest.raises(ParseError):
        read_touchstone("! only a comment\n# GHz S RI R 50\n")


def test_round_trip_identity_and_byte_stability():
    sw = filtenna1_sweep()
    sw.comments = [" synthesized"]
    for fmt in ("RI", "MA", "DB"):
        blob = write_touchstone(sw, fmt=fmt)
        head, back = read_touchstone(blob)
        assert head.comments == [" synthesized"]
        assert np.allclose(back.freqs, sw.freqs, rtol=1e-12, atol=0)
        assert np.max(np.abs(back.s - sw.s) / np.abs(sw.s)) <= 1e-12
        assert write_touchstone(back, fmt=fmt) == blob
        assert write_touchstone(sw, fmt=fmt) == blob


def test_ri_db_ri_chain():
    sw = filtenna1_sweep()
    _, via_db = read_touchstone(write_touchstone(sw, fmt="DB"))
    _, back = read_touchstone(write_touchstone(via_db, fmt="RI"))
    assert np.max(np.abs(back.s - sw.s) / np.abs(sw.s)) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=1, max_size=12),
       st.sampled_from(["RI", "MA", "DB"]), st.sampled_from(["Hz", "kHz", "MHz", "GHz"]))
def test_round_trip_property(vals, fmt, unit):
    vals = [complex(a, b) for a, b in vals if abs(complex(a, b)) > 1e-6]
    if not vals:
        return
    f = 1e9 + 1e6 * np.arange(len(vals))
    sw = SParamSweep(f, np.array(vals).reshape(-1, 1, 1))
    blob = write_touchstone(sw, fmt=fmt, freq_unit=unit)
    _, back = read_touchstone(blob)
    assert np.all(np.abs(back.s - sw.s) <= 1e-12 * np.abs(sw.s))
    assert np.allclose(back.freqs, f, rtol=1e-14, atol=0)
    assert write_touchstone(back, fmt=fmt, freq_unit=unit) == blob


def test_modified_sweep_is_not_written_from_stale_file_values():
    _, sw = read_touchstone("# GHz S MA R 50\n1 0.5 10\n2 0.25 20\n")
    sw.s[1, 0, 0] = 0.75
    text = write_touchstone(sw, fmt="MA").decode()
    assert text.splitlines()[-1] == "2 0.75 0"
    assert text.splitlines()[-2] == "1 0.5 10"


def test_writer_errors():
    sw = filtenna1_sweep()
    with pytest.raises(DomainError):
        write_touchstone(sw, fmt="XY")
    with pytest.raises(DomainError):
        write_touchstone(sw, freq_unit="THz")
    with pytest.raises(DomainError):
        SParamSweep(np.array([]), np.zeros((0, 2, 2)))


def test_column_order():
    f = np.array([1e9])
    s = np.array([[[1 + 0j, 2 + 0j], [3 + 0j, 4 + 0j]]])
    text = write_touchstone(SParamSweep(f, s)).decode()
    assert text.splitlines()[-1] == "1 1 0 3 0 2 0 4 0"
