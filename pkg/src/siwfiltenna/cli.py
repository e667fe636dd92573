"""Command-line front end.

Data goes to stdout, diagnostics to stderr. Exit status: 0 success,
1 domain/geometry error, 2 usage error.
"""
import argparse
import sys
from math import degrees, radians
from pathlib import Path

import numpy as np

from . import array as arr
from . import cavity, coax, coupling, perturb
from .design import load_design
from .errors import FiltennaError
from .touchstone import read_touchstone, write_touchstone


def _g(x):
    return f"{x:.9g}"


def _kv(out, key, value):
    out.write(f"{key},{value}\n")


def _add_source(p, presets):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--preset", choices=sorted(presets), help="built-in design (default: %(default)s)")
    g.add_argument("--spec", type=Path, help="JSON design spec")
    p.set_defaults(preset=None)


def _cavity_from(args):
    if args.spec is not None:
        doc = load_design(args.spec)
        if doc.cavity is None:
            raise FiltennaError(f"{args.spec}: no cavity section")
        return doc.cavity, doc, None
    name = args.preset or "paper"
    return cavity.PRESETS[name], None, name


def cmd_modes(args, out):
    spec, _, name = _cavity_from(args)
    if name is not None:
        out.write(f"# preset {name}: {cavity.PRESET_NOTES[name]}\n")
    out.write(f"# r={_g(spec.r)} m d={_g(spec.d)} m s={_g(spec.s)} m h={_g(spec.h)} m "
              f"eps_r={_g(spec.eps_r)} mu_r={_g(spec.mu_r)}\n")
    out.write(f"# R_eff={_g(cavity.effective_radius(spec))} m\n")
    out.write("mode,n,m,branch,f_hz\n")
    for sol in cavity.mode_table(spec, args.fmax):
        md = sol.mode
        out.write(f"{md.label},{md.n},{md.m},{md.branch},{_g(sol.f)}\n")


def _coax_from(args):
    spec, doc, name = _cavity_from(args)
    if doc is not None and doc.coax is not None:
        cs = doc.coax
    elif name is not None:
        cs = coax.PAPER_COAX
    else:
        cs = None
    b = args.b if args.b is not None else (cs.b if cs else None)
    if b is None:
        raise FiltennaError("post radius unknown: give --b or a coax section in the spec")
    delta_r = args.delta_r if args.delta_r is not None else (cs.delta_r if cs else None)
    return coax.CoaxCavitySpec(spec, b, delta_r), name


def cmd_coax(args, out):
    cs, name = _coax_from(args)
    if name is not None:
        out.write(f"# preset {name}: {coax.PRESET_NOTES[name]}\n")
    approx = coax.tm010_frequency_approx(cs)
    exact = coax.tm010_frequency_exact(cs)
    _kv(out, "r_m", _g(cs.base.r))
    _kv(out, "r_eff_m", _g(cs.outer_radius))
    _kv(out, "b_m", _g(cs.b))
    _kv(out, "delta_r_m", _g(cs.radial_correction))
    _kv(out, "delta_r_source", "fitted" if cs.delta_r is not None else "2*(r-R_eff)")
    _kv(out, "tm010_approx_hz", _g(approx))
    _kv(out, "tm010_exact_hz", _g(exact))
    _kv(out, "approx_vs_exact", _g((approx - exact) / exact))
    for n in range(args.orders):
        ks = coax.coax_cutoff_roots(cs, n, args.roots)
        for i, k in enumerate(ks, start=1):
            f = coax.cutoff_to_frequency(k, cs.base.eps_r, cs.base.mu_r)
            _kv(out, f"root_n{n}_m{i}", f"{_g(k)} rad/m {_g(f)} Hz")


def cmd_perturb(args, out):
    spec, doc, name = _cavity_from(args)
    b = args.b
    if b is None:
        b = doc.coax.b if doc is not None and doc.coax is not None else perturb.PAPER_CENTER_POST.radius
    post = perturb.PostSpec(b)
    f_before = args.f_before
    if f_before is None and name is not None:
        f_before = 29.0e9
    res = perturb.tm110_shift_centered(spec, post, f_before)
    _kv(out, "delta_m", _g(cavity.fence_correction(spec)))
    _kv(out, "Q", _g(perturb.loading_ratio(spec, post)))
    _kv(out, "tm110_f_before_hz", _g(res.f_before))
    _kv(out, "tm110_f_after_hz", _g(res.f_after))
    _kv(out, "fractional_shift", _g(res.fractional_shift))
    ref = args.f_reference if args.f_reference is not None else (perturb.PAPER_TM110_LOADED if name else None)
    if ref is not None:
        _kv(out, "reference_hz", _g(ref))
        _kv(out, "relative_error", _g((res.f_after - ref) / ref))
    posts = doc.posts if doc is not None and doc.posts else [perturb.PAPER_FEED_POST]
    out.write("post,mode,f_before_hz,f_after_hz,delta_f_hz\n")
    modes = [cavity.ModeIndex(0, 1), cavity.ModeIndex(1, 1, "cos"), cavity.ModeIndex(1, 1, "sin")]
    for i, p in enumerate(posts):
        for md in modes:
            r = perturb.general_post_shift(spec, cavity.solve_mode(spec, md), p)
            out.write(f"{i},{md.label},{_g(r.f_before)},{_g(r.f_after)},{_g(r.delta_f)}\n")


def cmd_design(args, out):
    spec, doc, name = _cavity_from(args)
    delta_r = args.delta_r
    if delta_r is None:
        if doc is not None and doc.coax is not None:
            delta_r = doc.coax.delta_r
        elif name is not None:
            delta_r = coax.PAPER_COAX.delta_r
    b = perturb.solve_post_radius(spec, args.fbw, delta_r=delta_r, f_tm110=args.f_before)
    f010 = coax.tm010_frequency_approx(coax.CoaxCavitySpec(spec, b, delta_r))
    f110 = perturb.tm110_shift_centered(spec, perturb.PostSpec(b), args.f_before).f_after
    _kv(out, "target_fbw", _g(args.fbw))
    _kv(out, "b_m", _g(b))
    _kv(out, "tm010_hz", _g(f010))
    _kv(out, "tm110_hz", _g(f110))
    _kv(out, "achieved_fbw", _g(perturb.fbw_from_modes(f010, f110)))


def _filter_from(args):
    if args.spec is not None:
        doc = load_design(args.spec)
        if doc.matrix is None or doc.band is None:
            raise FiltennaError(f"{args.spec}: needs coupling and band sections")
        return doc.matrix, doc.band, None
    p = coupling.get_preset(args.preset or "filtenna1")
    return p.matrix, p.band, p


def cmd_response(args, out):
    m, band, _ = _filter_from(args)
    freqs = np.linspace(args.f_from, args.f_to, args.points)
    sweep = coupling.synthesize_response(m, band, freqs)
    if args.out == "csv":
        out.write("f_hz,s11_db,s21_db,s11_re,s11_im,s21_re,s21_im\n")
        with np.errstate(divide="ignore"):
            s11db = 20 * np.log10(np.abs(sweep.s11))
            s21db = 20 * np.log10(np.abs(sweep.s21))
        for i, f in enumerate(freqs):
            out.write(",".join(_g(v) for v in (f, s11db[i], s21db[i], sweep.s11[i].real, sweep.s11[i].imag,
                                               sweep.s21[i].real, sweep.s21[i].imag)) + "\n")
    else:
        sweep.comments = [f" coupling-matrix synthesis f0={_g(band.f0)} Hz fbw={_g(band.fbw)}"]
        out.write(write_touchstone(sweep, fmt=args.format).decode("ascii"))


def cmd_qext(args, out):
    m, band, preset = _filter_from(args)
    q = coupling.qext_from_matrix(m, band, args.port, args.resonator)
    _kv(out, "f0_hz", _g(band.f0))
    _kv(out, "fbw", _g(band.fbw))
    _kv(out, f"M_{args.port}{args.resonator}", _g(m[args.port, args.resonator]))
    _kv(out, "qext_matrix", _g(q))
    # round trip through the S11 group delay of the singly loaded resonator
    probe = coupling.single_resonator_matrix(q, band.fbw)
    f = band.f0 * (1 + np.linspace(-1e-3, 1e-3, 201) * band.fbw)
    tau = coupling.group_delay(coupling.synthesize_response(probe, band, f), "11")[100]
    _kv(out, "group_delay_s", _g(tau))
    _kv(out, "qext_group_delay", _g(coupling.qext_from_group_delay(tau, band.f0)))
    if preset is not None and m.order >= 2:
        q1 = coupling.qext_from_matrix(m, band, args.port, 1)
        q2 = coupling.qext_from_matrix(m, band, args.port, 2)
        r1, r2 = preset.reported_qext
        _kv(out, "qext_matrix_r1_r2", f"{_g(q1)} {_g(q2)}")
        _kv(out, "qext_reported_r1_r2", f"{_g(r1)} {_g(r2)}")
        _kv(out, "ratio_matrix", _g(q2 / q1))
        _kv(out, "ratio_reported", _g(r2 / r1))
        _kv(out, "ratio_mismatch", _g(abs(q2 / q1 - r2 / r1) / (r2 / r1)))
        _kv(out, "absolute_scale_reported_over_matrix", _g(r1 / q1))


def cmd_zeros(args, out):
    m, band, _ = _filter_from(args)
    zs = coupling.transmission_zeros(m, band, (args.f_from, args.f_to))
    out.write("zero_hz,side\n")
    for z in zs:
        out.write(f"{_g(z)},{'upper' if z > band.f0 else 'lower'}\n")


def _array_from(args):
    if args.spec is not None:
        doc = load_design(args.spec)
        if doc.array is None:
            raise FiltennaError(f"{args.spec}: no array section")
        return doc.array
    return arr.PRESETS[args.preset or "paper"]


def cmd_array(args, out):
    spec = _array_from(args)
    if args.pattern is not None:
        res = arr.scan_sweep(spec, [radians(args.pattern)])[0]
        out.write(arr.pattern_csv(res))
        return
    out.write("theta0_deg,peak_deg,peak_gain_rel_db,sll_db,scan_loss_db,grating_lobe_deg\n")
    for res in arr.scan_sweep(spec, [radians(t) for t in args.theta0]):
        gl = arr.grating_lobe_onset(spec.spacing, spec.f, res.theta0)
        gl_txt = _g(degrees(gl.angle)) if gl.visible else ""
        out.write(",".join([_g(degrees(res.theta0)), _g(round(degrees(res.peak_angle), 6)),
                            _g(res.peak_gain_rel), _g(res.sll), _g(res.scan_loss), gl_txt]) + "\n")


def cmd_convert(args, out):
    _, sweep = read_touchstone(Path(args.input).read_bytes())
    out.write(write_touchstone(sweep, fmt=args.format, freq_unit=args.unit).decode("ascii"))


def build_parser():
    ap = argparse.ArgumentParser(prog="siwfiltenna", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("modes", help="TM_nm0 mode table of a circular SIW cavity")
    _add_source(p, cavity.PRESETS)
    p.add_argument("--fmax", type=float, default=35e9)
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("coax", help="centre-post (coaxial) cavity TM cutoffs")
    _add_source(p, cavity.PRESETS)
    p.add_argument("--b", type=float, help="post radius (m)")
    p.add_argument("--delta-r", type=float, help="radial correction for the closed form (m)")
    p.add_argument("--roots", type=int, default=3)
    p.add_argument("--orders", type=int, default=2)
    p.set_defaults(func=cmd_coax)

    p = sub.add_parser("perturb", help="perturbation shifts from centre and feed posts")
    _add_source(p, cavity.PRESETS)
    p.add_argument("--b", type=float, help="centre post radius (m)")
    p.add_argument("--f-before", type=float, help="unloaded TM110 frequency (Hz)")
    p.add_argument("--f-reference", type=float, help="reference loaded TM110 frequency (Hz)")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("design", help="solve the centre post radius for a target FBW")
    _add_source(p, cavity.PRESETS)
    p.add_argument("--fbw", type=float, required=True)
    p.add_argument("--delta-r", type=float)
    p.add_argument("--f-before", type=float)
    p.set_defaults(func=cmd_design)

    for name, fn, hlp in (("response", cmd_response, "S-parameters of a coupling matrix"),
                          ("zeros", cmd_zeros, "transmission zeros of a coupling matrix")):
        p = sub.add_parser(name, help=hlp)
        _add_source(p, coupling.PRESETS)
        p.add_argument("--from", dest="f_from", type=float, default=20e9)
        p.add_argument("--to", dest="f_to", type=float, default=40e9)
        if name == "response":
            p.add_argument("--points", type=int, default=601)
            p.add_argument("--out", choices=["s2p", "csv"], default="s2p")
            p.add_argument("--format", choices=["RI", "MA", "DB"], default="RI")
        p.set_defaults(func=fn)

    p = sub.add_parser("qext", help="external Q from the coupling matrix")
    _add_source(p, coupling.PRESETS)
    p.add_argument("--port", choices=["S", "L"], default="S")
    p.add_argument("--resonator", type=int, default=1)
    p.set_defaults(func=cmd_qext)

    p = sub.add_parser("array", help="linear array beam scanning")
    _add_source(p, arr.PRESETS)
    p.add_argument("--theta0", type=float, nargs="+", default=[-40, -30, -20, -10, 0, 10, 20, 30, 40],
                   help="steering angles in degrees")
    p.add_argument("--pattern", type=float, metavar="DEG", help="emit the pattern CSV of one beam")
    p.set_defaults(func=cmd_array)

    p = sub.add_parser("convert", help="rewrite a Touchstone file in another format")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--format", choices=["RI", "MA", "DB"], default="RI")
    p.add_argument("--unit", choices=["Hz", "kHz", "MHz", "GHz"], default="GHz")
    p.set_defaults(func=cmd_convert)
    return ap


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except FiltennaError as exc:
        err.write(f"error[{exc.code}]: {exc}\n")
        return 1
    except OSError as exc:
        err.write(f"error[IO]: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
