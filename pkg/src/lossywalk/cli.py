"""Command-line interface.

Angles are accepted either as decimals (radians) or as exact fractional-pi
shorthand such as ``-3pi/8`` or ``7pi/6``; the shorthand is evaluated as
``sign * a * math.pi / b`` so preset comparisons are bit-exact.  Ranges use
``start:stop:count`` with inclusive endpoints.

Exit codes: 0 success, 1 argument/configuration error, 2 numerical failure.
With ``--json`` errors are emitted as one JSON object on stdout.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys

import numpy as np

from . import errors
from .invariants import band_spectrum_1d, band_spectrum_2d, chern_number, winding_number
from .lattice import RegionSpec, build_chain_operator, chain_spectrum, detect_edge_states, strip_band_structure
from .sweeps import (
    sweep_chern_2d,
    sweep_chern_vs_gamma,
    sweep_phase_diagram_1d,
    sweep_winding_vs_gamma,
)
from .symmetries import check_cs, check_exact_pt, check_phs, check_pt_1d
from .tables import emit_plot_script, write_spectrum_csv, write_table
from .walks import (
    CriticalKind,
    WalkParams1D,
    WalkParams2D,
    bloch_ssqw,
    critical_gamma,
    min_positive_critical_gamma,
    momentum_grid,
)

_PI_FORM = re.compile(r"^([+-]?)(\d+)?pi(?:/(\d+))?$")

# values like -3pi/8 or -pi:pi:41 must not be mistaken for option flags
_NEGATIVE_VALUE = re.compile(r"^-(\d+(\.\d+)?([eE][+-]?\d+)?|(\d+)?pi(/\d+)?)(:[^ ]*)?$")


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = _NEGATIVE_VALUE


def parse_angle(text: str) -> float:
    """Radians from a decimal or an exact fractional-pi form like '-3pi/8'."""
    s = str(text).strip().replace(" ", "")
    m = _PI_FORM.match(s)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        a = float(m.group(2)) if m.group(2) else 1.0
        b = float(m.group(3)) if m.group(3) else 1.0
        return sign * a * math.pi / b
    try:
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from None


def parse_range(text: str) -> np.ndarray:
    """Inclusive grid 'start:stop:count' with angle-shorthand endpoints."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"range must be start:stop:count, got {text!r}")
    start, stop = parse_angle(parts[0]), parse_angle(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"range count must be an integer, got {parts[2]!r}") from None
    if count < 1:
        raise argparse.ArgumentTypeError("range count must be >= 1")
    return np.linspace(start, stop, count)


def parse_pair(text: str) -> tuple[float, float]:
    parts = str(text).split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'theta1,theta2', got {text!r}")
    return (parse_angle(parts[0]), parse_angle(parts[1]))


# one-shot reproduction presets; angles kept in shorthand so they parse
# bit-identically to user input
FIGURE_PRESETS = {
    "2a": {"what": "1D winding phase diagram at zero loss"},
    "2b": {"what": "2D Chern phase diagram at zero loss"},
    "3": {
        "what": "Bloch-vector winding trajectories of the lower band",
        "cases": [("-3pi/8", "pi/8", 0.25), ("-3pi/8", "5pi/8", 0.25),
                  ("-3pi/8", "pi/8", 1.8), ("-3pi/8", "pi/8", 3.0)],
        "n_k": 201,
    },
    "4": {
        "what": "lower-band winding vs (gamma, theta2)",
        "theta1s": ["-pi/2", "-3pi/4", "-pi"],
        "theta2_range": "0:2pi:41", "gamma_range": "0:1.5:41", "n_k": 201,
    },
    "5": {
        "what": "Chern number vs (gamma_x, theta2)",
        "panels": [("pi/4", 0.0), ("3pi/8", 0.0), ("3pi/2", 0.0),
                   ("pi/4", 0.1), ("3pi/8", 0.5), ("3pi/2", 1.0)],
        "theta2_range": "0:2pi:31", "gamma_x_range": "0:2:31", "grid": 51,
    },
    "6": {
        "what": "chain spectra for increasing loss",
        "n": 201, "boundary": 50,
        "inner": ("-3pi/8", "5pi/8"), "outer": ("-3pi/8", "pi/4"),
        "gammas": [0.0, 0.2, 0.2110, 0.25],
    },
    "7": {
        "what": "chain partition and edge-state site profiles",
        "n": 201, "boundary": 50,
        "inner": ("-3pi/8", "5pi/8"), "outer": ("-3pi/8", "pi/4"),
    },
    "8": {
        "what": "strip band structure for increasing loss",
        "n_y": 201, "boundary": 50, "kx_samples": 64,
        "inner": ("7pi/6", "7pi/6"), "outer": ("3pi/2", "pi"),
        "gammas": [0.0, 0.2, 0.3, 0.47],
    },
}


def _build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="lossywalk", description=__doc__.splitlines()[0])
    top.add_argument("--json", action="store_true", help="machine-readable errors on stdout")
    top.add_argument("--config", help="JSON file with defaults for the subcommand flags")
    top.add_argument("--outdir", default="out", help="directory for emitted files")
    top.add_argument("--workers", type=int, default=None, help="process-pool size for sweeps")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("winding", help="lower-band winding number at one parameter point")
    p.add_argument("--theta1", type=parse_angle, required=True)
    p.add_argument("--theta2", type=parse_angle, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--nk", type=int, default=201)

    p = sub.add_parser("chern", help="lower-band Chern number at one parameter point")
    p.add_argument("--theta1", type=parse_angle, required=True)
    p.add_argument("--theta2", type=parse_angle, required=True)
    p.add_argument("--gamma-x", type=float, default=0.0)
    p.add_argument("--gamma-y", type=float, default=0.0)
    p.add_argument("--grid", type=int, default=201)

    p = sub.add_parser("critical-gamma", help="closed-form critical scaling factor")
    p.add_argument("--theta1", type=parse_angle, required=True)
    p.add_argument("--theta2", type=parse_angle, required=True)
    p.add_argument("--k0", type=parse_angle, default=None, help="closing momentum, 0 or pi")
    p.add_argument("--e0", type=parse_angle, default=None, help="closing energy, 0 or pi")

    p = sub.add_parser("phase1d", help="winding phase diagram over (theta1, theta2)")
    p.add_argument("--theta1-range", type=parse_range, default=parse_range("-pi:pi:101"))
    p.add_argument("--theta2-range", type=parse_range, default=parse_range("-pi:pi:101"))
    p.add_argument("--nk", type=int, default=201)
    p.add_argument("--checkpoint", default=None)

    p = sub.add_parser("winding-sweep", help="winding over (theta2, gamma) at fixed theta1")
    p.add_argument("--theta1", type=parse_angle, required=True)
    p.add_argument("--theta2-range", type=parse_range, required=True)
    p.add_argument("--gamma-range", type=parse_range, required=True)
    p.add_argument("--nk", type=int, default=201)
    p.add_argument("--checkpoint", default=None)

    p = sub.add_parser("chern-sweep", help="Chern number over (theta2, gamma_x)")
    p.add_argument("--theta1", type=parse_angle, required=True)
    p.add_argument("--theta2-range", type=parse_range, required=True)
    p.add_argument("--gamma-x-range", type=parse_range, required=True)
    p.add_argument("--gamma-y", type=float, default=0.0)
    p.add_argument("--grid", type=int, default=51)
    p.add_argument("--checkpoint", default=None)

    p = sub.add_parser("symmetry-check", help="PT / exact-PT / particle-hole / chiral reports")
    p.add_argument("--model", choices=["1d", "2d"], default="1d")
    p.add_argument("--theta1", type=parse_angle, required=True)
    p.add_argument("--theta2", type=parse_angle, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--gamma-x", type=float, default=0.0)
    p.add_argument("--gamma-y", type=float, default=0.0)
    p.add_argument("--nk", type=int, default=201)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("chain-spectrum", help="spectrum of the two-region closed chain")
    p.add_argument("--n", type=int, default=201)
    p.add_argument("--boundary", type=int, default=50)
    p.add_argument("--inner", type=parse_pair, required=True, help="theta1,theta2 for |n|<=boundary")
    p.add_argument("--outer", type=parse_pair, required=True)
    p.add_argument("--gamma", type=float, default=0.0)

    p = sub.add_parser("strip-bands", help="strip band structure vs transverse momentum")
    p.add_argument("--ny", type=int, default=201)
    p.add_argument("--boundary", type=int, default=50)
    p.add_argument("--inner", type=parse_pair, required=True)
    p.add_argument("--outer", type=parse_pair, required=True)
    p.add_argument("--gamma-x", type=float, default=0.0)
    p.add_argument("--gamma-y", type=float, default=0.0)
    p.add_argument("--kx-samples", type=int, default=64)

    p = sub.add_parser("figure", help="one-shot reproduction presets")
    p.add_argument("id", choices=sorted(FIGURE_PRESETS))
    return top


def _inject_config(argv: list[str]) -> list[str]:
    """Splice config-file values (as flags) right after the subcommand token.

    Keys use the flag names; explicit command-line flags win; unknown keys
    are rejected before any computation.
    """
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
            break
        if tok.startswith("--config="):
            path = tok.split("=", 1)[1]
            break
    if path is None:
        return argv
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ValueError("config file must hold a JSON object")
    cmd_pos = next((i for i, tok in enumerate(argv) if tok in _HANDLERS), None)
    if cmd_pos is None:
        raise ValueError("config file given but no subcommand found")
    extra = []
    for key, value in cfg.items():
        flag = "--" + str(key).replace("_", "-")
        if flag in ("--config", "--json"):
            continue
        if flag in argv or any(a.startswith(flag + "=") for a in argv):
            continue  # command line wins
        extra.extend([flag, str(value)])
    return argv[: cmd_pos + 1] + extra + argv[cmd_pos + 1 :]


def _emit_sweep(table, outdir: str, stem: str, title: str, value_label: str) -> None:
    os.makedirs(outdir, exist_ok=True)
    write_table(table, os.path.join(outdir, f"{stem}.json"), "json")
    write_table(table, os.path.join(outdir, f"{stem}.csv"), "csv")
    emit_plot_script(
        "heatmap",
        os.path.join(outdir, f"{stem}_plot.py"),
        [f"{stem}.json"],
        f"{stem}.png",
        title=title,
        value_label=value_label,
    )
    print(f"wrote {outdir}/{stem}.json, .csv and {stem}_plot.py")


def _chain_to_csv(spec: RegionSpec, n: int, gamma: float, outdir: str, stem: str) -> None:
    op = build_chain_operator(n, spec, gamma)
    pairs = chain_spectrum(op)
    reports = detect_edge_states(pairs, 1e-6 if gamma == 0 else 1e-4, 0.05, 10, spec.boundary)
    lam = np.array([p.value for p in pairs])
    from .linalg import quasienergy

    es = quasienergy(lam)
    write_spectrum_csv(
        os.path.join(outdir, f"{stem}.csv"),
        {
            "re_lambda": lam.real,
            "im_lambda": lam.imag,
            "re_energy": es.real,
            "im_energy": es.imag,
        },
    )
    n_edge = sum(1 for r in reports if r.is_edge)
    print(f"{stem}: {len(pairs)} eigenvalues, {n_edge} edge state(s)")


def _cmd_winding(ns) -> int:
    lower, _ = band_spectrum_1d(WalkParams1D(ns.theta1, ns.theta2, ns.gamma, ns.phi), ns.nk)
    print(f"{winding_number(lower).w:.6f}")
    return 0


def _cmd_chern(ns) -> int:
    p = WalkParams2D(ns.theta1, ns.theta2, ns.gamma_x, ns.gamma_y)
    lower, _ = band_spectrum_2d(p, ns.grid, ns.grid)
    c, _ = chern_number(lower)
    print(c)
    return 0


def _cmd_critical_gamma(ns) -> int:
    if (ns.k0 is None) != (ns.e0 is None):
        raise ValueError("give both --k0 and --e0, or neither")
    if ns.k0 is not None:
        res = critical_gamma(ns.theta1, ns.theta2, ns.k0, ns.e0)
        if res.kind is CriticalKind.NO_CLOSING:
            print("none")
        else:
            print(f"{res.gamma_c:.6f}")
        return 0
    best = min_positive_critical_gamma(ns.theta1, ns.theta2)
    print("none" if not np.isfinite(best) else f"{best:.6f}")
    return 0


def _cmd_phase1d(ns) -> int:
    table = sweep_phase_diagram_1d(ns.theta1_range, ns.theta2_range, ns.nk,
                                   workers=ns.workers, checkpoint=ns.checkpoint)
    _emit_sweep(table, ns.outdir, "phase1d", "winding number, zero loss", "W")
    return 0


def _cmd_winding_sweep(ns) -> int:
    table = sweep_winding_vs_gamma(ns.theta1, ns.theta2_range, ns.gamma_range, ns.nk,
                                   workers=ns.workers, checkpoint=ns.checkpoint)
    _emit_sweep(table, ns.outdir, "winding_sweep", f"winding, theta1={ns.theta1:.4f}", "W")
    return 0


def _cmd_chern_sweep(ns) -> int:
    table = sweep_chern_vs_gamma(ns.theta1, ns.theta2_range, ns.gamma_x_range, ns.gamma_y,
                                 ns.grid, workers=ns.workers, checkpoint=ns.checkpoint)
    _emit_sweep(table, ns.outdir, "chern_sweep", f"Chern, theta1={ns.theta1:.4f}", "C")
    return 0


def _cmd_symmetry_check(ns) -> int:
    reports = []
    if ns.model == "1d":
        p = WalkParams1D(ns.theta1, ns.theta2, ns.gamma)
        reports.append(check_pt_1d(p, ns.nk, ns.tol))
        reports.append(check_exact_pt(p, ns.nk, max(ns.tol, 1e-8)))
        reports.append(check_phs("1d", p, ns.nk, ns.tol))
        reports.append(check_cs(p, ns.nk, ns.tol))
    else:
        p2 = WalkParams2D(ns.theta1, ns.theta2, ns.gamma_x, ns.gamma_y)
        grid = max(3, min(ns.nk, 51))
        reports.append(check_phs("2d", p2, grid, ns.tol))
    for r in reports:
        print(f"{r.relation}: max_violation={r.max_violation:.3e} passed={r.passed}")
    return 0


def _cmd_chain_spectrum(ns) -> int:
    spec = RegionSpec(ns.boundary, ns.inner, ns.outer)
    os.makedirs(ns.outdir, exist_ok=True)
    stem = "chain_spectrum"
    _chain_to_csv(spec, ns.n, ns.gamma, ns.outdir, stem)
    emit_plot_script("spectrum", os.path.join(ns.outdir, f"{stem}_plot.py"),
                     [f"{stem}.csv"], f"{stem}.png", labels=[f"gamma={ns.gamma}"])
    return 0


def _cmd_strip_bands(ns) -> int:
    spec = RegionSpec(ns.boundary, ns.inner, ns.outer)
    os.makedirs(ns.outdir, exist_ok=True)
    bands = strip_band_structure(spec, ns.ny, ns.kx_samples, ns.gamma_x, ns.gamma_y)
    stem = "strip_bands"
    cols = {"kx": bands.kx}
    for j in range(bands.re_energies.shape[1]):
        cols[f"e{j}"] = bands.re_energies[:, j]
    write_spectrum_csv(os.path.join(ns.outdir, f"{stem}.csv"), cols)
    emit_plot_script("bands", os.path.join(ns.outdir, f"{stem}_plot.py"),
                     [f"{stem}.csv"], f"{stem}.png",
                     labels=[f"gx={ns.gamma_x} gy={ns.gamma_y}"])
    print(f"wrote {ns.outdir}/{stem}.csv and {stem}_plot.py")
    return 0


def _figure_3(outdir: str) -> None:
    preset = FIGURE_PRESETS["3"]
    files, labels = [], []
    for i, (t1s, t2s, g) in enumerate(preset["cases"]):
        p = WalkParams1D(parse_angle(t1s), parse_angle(t2s), g)
        ks = momentum_grid(preset["n_k"])
        comps = {"k": ks}
        rows = {"re_nx": [], "im_nx": [], "re_ny": [], "im_ny": [], "re_nz": [], "im_nz": []}
        for k in ks:
            b = bloch_ssqw(p, float(k))
            for j, name in enumerate(("nx", "ny", "nz")):
                rows[f"re_{name}"].append(b.n[j].real)
                rows[f"im_{name}"].append(b.n[j].imag)
        comps.update({k: np.asarray(v) for k, v in rows.items()})
        fname = f"fig3_case{i}.csv"
        write_spectrum_csv(os.path.join(outdir, fname), comps)
        lower, _ = band_spectrum_1d(p, preset["n_k"])
        files.append(fname)
        labels.append(f"{t1s},{t2s},g={g}: W={winding_number(lower).w:.3f}")
    emit_plot_script("trajectory", os.path.join(outdir, "fig3_plot.py"), files,
                     "fig3.png", labels=labels)


def _figure_7(outdir: str) -> None:
    preset = FIGURE_PRESETS["7"]
    spec = RegionSpec(preset["boundary"], tuple(map(parse_angle, preset["inner"])),
                      tuple(map(parse_angle, preset["outer"])))
    n = preset["n"]
    t1, t2 = spec.angles(n)
    coords = np.arange(n) - (n - 1) // 2
    op = build_chain_operator(n, spec, 0.0)
    pairs = chain_spectrum(op)
    reports = detect_edge_states(pairs, 1e-6, 0.05, 10, spec.boundary)
    edges = [r for r in reports if r.is_edge]
    cols = {"site": coords.astype(float), "theta1": t1, "theta2": t2}
    for i, r in enumerate(edges):
        vec = next(p.vector for p in pairs if p.value == r.eigenvalue)
        probs = np.abs(vec[0::2]) ** 2 + np.abs(vec[1::2]) ** 2
        cols[f"edge{i}_prob"] = probs / probs.sum()
    write_spectrum_csv(os.path.join(outdir, "fig7_partition.csv"), cols)
    emit_plot_script("lines", os.path.join(outdir, "fig7_plot.py"),
                     ["fig7_partition.csv"], "fig7.png",
                     title="two-region chain and edge-state profiles")


def _cmd_figure(ns) -> int:
    fid = ns.id
    os.makedirs(ns.outdir, exist_ok=True)
    preset = FIGURE_PRESETS[fid]
    if fid == "2a":
        table = sweep_phase_diagram_1d(parse_range("-pi:pi:101"), parse_range("-pi:pi:101"),
                                       201, workers=ns.workers)
        _emit_sweep(table, ns.outdir, "fig2a", preset["what"], "W")
    elif fid == "2b":
        table = sweep_chern_2d(parse_range("0:2pi:51"), parse_range("0:2pi:51"), 101,
                               workers=ns.workers)
        _emit_sweep(table, ns.outdir, "fig2b", preset["what"], "C")
    elif fid == "3":
        _figure_3(ns.outdir)
        print(f"wrote {ns.outdir}/fig3_case*.csv and fig3_plot.py")
    elif fid == "4":
        for i, t1s in enumerate(preset["theta1s"]):
            table = sweep_winding_vs_gamma(parse_angle(t1s), parse_range(preset["theta2_range"]),
                                           parse_range(preset["gamma_range"]), preset["n_k"],
                                           workers=ns.workers)
            _emit_sweep(table, ns.outdir, f"fig4_panel{i}", f"winding, theta1={t1s}", "W")
    elif fid == "5":
        for i, (t1s, gy) in enumerate(preset["panels"]):
            table = sweep_chern_vs_gamma(parse_angle(t1s), parse_range(preset["theta2_range"]),
                                         parse_range(preset["gamma_x_range"]), gy,
                                         preset["grid"], workers=ns.workers)
            _emit_sweep(table, ns.outdir, f"fig5_panel{i}",
                        f"Chern, theta1={t1s}, gamma_y={gy}", "C")
    elif fid == "6":
        spec = RegionSpec(preset["boundary"], tuple(map(parse_angle, preset["inner"])),
                          tuple(map(parse_angle, preset["outer"])))
        files = []
        for g in preset["gammas"]:
            stem = f"fig6_gamma{g}"
            _chain_to_csv(spec, preset["n"], g, ns.outdir, stem)
            files.append(f"{stem}.csv")
        emit_plot_script("spectrum", os.path.join(ns.outdir, "fig6_plot.py"), files,
                         "fig6.png", labels=[f"gamma={g}" for g in preset["gammas"]])
    elif fid == "7":
        _figure_7(ns.outdir)
        print(f"wrote {ns.outdir}/fig7_partition.csv and fig7_plot.py")
    elif fid == "8":
        spec = RegionSpec(preset["boundary"], tuple(map(parse_angle, preset["inner"])),
                          tuple(map(parse_angle, preset["outer"])))
        files = []
        for g in preset["gammas"]:
            bands = strip_band_structure(spec, preset["n_y"], preset["kx_samples"], g, g)
            stem = f"fig8_gamma{g}"
            cols = {"kx": bands.kx}
            for j in range(bands.re_energies.shape[1]):
                cols[f"e{j}"] = bands.re_energies[:, j]
            write_spectrum_csv(os.path.join(ns.outdir, f"{stem}.csv"), cols)
            files.append(f"{stem}.csv")
        emit_plot_script("bands", os.path.join(ns.outdir, "fig8_plot.py"), files,
                         "fig8.png", labels=[f"gamma={g}" for g in preset["gammas"]])
    return 0


_HANDLERS = {
    "winding": _cmd_winding,
    "chern": _cmd_chern,
    "critical-gamma": _cmd_critical_gamma,
    "phase1d": _cmd_phase1d,
    "winding-sweep": _cmd_winding_sweep,
    "chern-sweep": _cmd_chern_sweep,
    "symmetry-check": _cmd_symmetry_check,
    "chain-spectrum": _cmd_chain_spectrum,
    "strip-bands": _cmd_strip_bands,
    "figure": _cmd_figure,
}

_NUMERICAL_ERRORS = (
    errors.ConvergenceFailure,
    errors.GapClosed,
    errors.GapClosure,
    errors.OrthogonalLink,
    errors.DegenerateCoin,
    errors.NoBracket,
    ArithmeticError,
)


def cli_dispatch(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    want_json = "--json" in argv

    def fail(code: int, kind: str, message: str) -> int:
        if want_json:
            print(json.dumps({"error": kind, "message": message}))
        else:
            print(f"error ({kind}): {message}", file=sys.stderr)
        return code

    try:
        ns = parser.parse_args(_inject_config(argv))
    except SystemExit as exc:  # argparse already printed usage
        return 1 if exc.code not in (0, None) else 0
    except ValueError as exc:
        return fail(1, "validation", str(exc))
    try:
        return _HANDLERS[ns.command](ns)
    except (errors.InvalidRegion, errors.CheckpointMismatch, ValueError) as exc:
        return fail(1, "validation", str(exc))
    except _NUMERICAL_ERRORS as exc:
        return fail(2, "numerical", f"{type(exc).__name__}: {exc}")
    except OSError as exc:
        return fail(1, "io", str(exc))


def main() -> None:
    raise SystemExit(cli_dispatch())


if __name__ == "__main__":
    main()
