"""Command line interface: simulate, scan, fit, tables.

Exit codes: 0 success, 2 configuration error, 3 physics-validity error
(basis truncation or norm loss), 4 fit residual above the given threshold.
Every output file embeds the fully resolved configuration and the package
version in `#` header comments; repeated runs with the same config produce
byte-identical files.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .angular import AXES, cos2_elements
from .config import (
    ConfigParseError,
    RunConfig,
    parse_config,
    serialize_config,
    with_ellipticity,
)
from .ensemble import simulate_alignment
from .propagate import TruncationError
from .signalmodel import (
    defocusing_signal,
    fit_scale,
    load_signal_csv,
    revival_peaks,
)
from .superposition import (
    LinearReference,
    approximate_trace,
    compare_superposition,
)
from .units import ConfigurationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PHYSICS = 3
EXIT_FIT = 4

log = logging.getLogger("ellipalign.cli")


def _header(cfg: RunConfig | None) -> list[str]:
    lines = [f"ellipalign {__version__}"]
    if cfg is not None:
        lines.append("resolved config:")
        lines += [f"  {line}" for line in serialize_config(cfg).splitlines()]
    return lines


def _load_config(path: str) -> RunConfig:
    return parse_config(Path(path).read_text())


def _simulate(cfg: RunConfig, threads: int):
    return simulate_alignment(
        cfg.molecule,
        cfg.pulse,
        cfg.grid,
        temperature=cfg.temperature,
        population_cutoff=cfg.population_cutoff,
        workers=threads,
    )


def _write_peaks_csv(path, peaks_by_axis, header):
    ratio_lines = []
    px = {p.index: p for p in peaks_by_axis.get("x", [])}
    py = {p.index: p for p in peaks_by_axis.get("y", [])}
    if 1 in px and 1 in py and py[1].height > 0:
        ratio_lines.append(
            f"first_revival_peak_ratio_Sx_over_Sy = {px[1].height / py[1].height!r}"
        )
    with open(path, "w") as fh:
        for line in header + ratio_lines:
            fh.write(f"# {line}\n")
        fh.write("axis,index,time_ps,height\n")
        for axis in ("x", "y"):
            for p in peaks_by_axis.get(axis, []):
                fh.write(f"{axis},{p.index},{p.time!r},{p.height!r}\n")


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    header = _header(cfg)

    result = _simulate(cfg, args.threads)
    trace = result.trace
    if "trace" in cfg.outputs:
        trace.to_csv(outdir / "trace.csv", header_comments=header)

    signal = None
    if "signal" in cfg.outputs or "peaks" in cfg.outputs:
        signal = defocusing_signal(trace, probe_fwhm=cfg.probe_fwhm)
    if "signal" in cfg.outputs:
        signal.to_csv(outdir / "signal.csv", header_comments=header)
    if "peaks" in cfg.outputs:
        peaks = {
            axis: revival_peaks(signal, cfg.molecule, axis=axis) for axis in ("x", "y")
        }
        _write_peaks_csv(outdir / "peaks.csv", peaks, header)

    if "superposition" in cfg.outputs:
        linear = _simulate(with_ellipticity(cfg, 0.0), args.threads)
        ref = LinearReference.from_trace(linear.trace)
        approx = approximate_trace(ref, cfg.pulse.ellipticity_a2)
        window = (result.t_ref, trace.time_grid[-1])
        dev = compare_superposition(trace, approx, window)
        extra = [
            f"relative_rms_deviation_{axis} = {dev[axis]!r}" for axis in AXES
        ]
        approx.to_csv(outdir / "superposition.csv", header_comments=header + extra)

    log.info("simulate: wrote %s", ", ".join(sorted(cfg.outputs)))
    return EXIT_OK


def cmd_scan(args) -> int:
    cfg = _load_config(args.config)
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    n = int(round(0.5 / args.a2_step))
    a2_values = [k * args.a2_step for k in range(n + 1)]
    if a2_values[-1] > 0.5:
        a2_values[-1] = 0.5

    rows = []
    for a2 in a2_values:
        result = _simulate(with_ellipticity(cfg, a2), args.threads)
        signal = defocusing_signal(result.trace, probe_fwhm=cfg.probe_fwhm)
        heights = {}
        for axis in ("x", "y"):
            peaks = revival_peaks(signal, cfg.molecule, axis=axis, threshold=0.0)
            first = next((p for p in peaks if p.index == 1), None)
            heights[axis] = first.height if first else 0.0
        rows.append((a2, heights["y"], heights["x"]))
        log.info("scan: a2 = %.4f done", a2)

    sy0, sx0 = rows[0][1], rows[0][2]
    if sy0 <= 0 or sx0 <= 0:
        raise TruncationError("a2 = 0 reference peaks vanish; scan undefined")
    path = outdir / "scan.csv"
    with open(path, "w") as fh:
        for line in _header(cfg):
            fh.write(f"# {line}\n")
        fh.write("# peaks normalized to their a2 = 0 values\n")
        fh.write("a2,Sy_norm,Sx_norm,Sy_peak,Sx_peak\n")
        for a2, sy, sx in rows:
            fh.write(f"{a2!r},{sy / sy0!r},{sx / sx0!r},{sy!r},{sx!r}\n")
    return EXIT_OK


def cmd_fit(args) -> int:
    cfg = _load_config(args.config)
    measured = load_signal_csv(args.measured, probe_fwhm=cfg.probe_fwhm)
    result = _simulate(cfg, args.threads)
    model = defocusing_signal(result.trace, probe_fwhm=cfg.probe_fwhm)
    window = (
        tuple(args.window)
        if args.window
        else (float(measured.delay_grid[0]), float(measured.delay_grid[-1]))
    )

    failed = False
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    lines = []
    for axis in args.axes:
        scale, residual = fit_scale(measured, model, window, axis=axis)
        lines.append(f"{axis},{scale!r},{residual!r}")
        print(f"axis {axis}: scale = {scale:.6g}, normalized rms residual = {residual:.3e}")
        if args.max_residual is not None and residual > args.max_residual:
            failed = True
    with open(outdir / "fit.csv", "w") as fh:
        for line in _header(cfg):
            fh.write(f"# {line}\n")
        fh.write(f"# window_ps = {window[0]!r}..{window[1]!r}\n")
        fh.write("axis,scale,normalized_rms_residual\n")
        fh.write("\n".join(lines) + "\n")
    if failed:
        print(f"residual exceeds threshold {args.max_residual}", file=sys.stderr)
        return EXIT_FIT
    return EXIT_OK


def cmd_tables(args) -> int:
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    table = cos2_elements(args.axis, args.j_max)
    path = outdir / f"tables_{args.axis}.csv"
    with open(path, "w") as fh:
        for line in _header(None):
            fh.write(f"# {line}\n")
        fh.write(f"# matrix elements of cos^2(theta_{args.axis}), J <= {args.j_max}\n")
        fh.write("J,M,Jp,Mp,value\n")
        for (J, M, Jp, Mp) in sorted(table.entries):
            fh.write(f"{J},{M},{Jp},{Mp},{table.entries[(J, M, Jp, Mp)]!r}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ellipalign",
        description="Field-free molecular alignment by elliptically polarized pulses",
    )
    parser.add_argument("--version", action="version", version=f"ellipalign {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="info-level logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output-dir", default=".", help="directory for output files")
        p.add_argument("--threads", type=int, default=1, help="parallel ensemble workers")
        p.add_argument("--seed", type=int, default=None,
                       help="RNG seed (test harnesses only; the pipeline is deterministic)")

    p = sub.add_parser("simulate", help="run one configuration, write requested artifacts")
    p.add_argument("--config", required=True)
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("scan", help="ellipticity scan of first-revival peaks")
    p.add_argument("--config", required=True)
    p.add_argument("--a2-step", type=float, default=1.0 / 24.0,
                   help="a2 grid step on [0, 1/2] (default 1/24)")
    common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("fit", help="scale-fit a measured signal against the model")
    p.add_argument("--config", required=True)
    p.add_argument("--measured", required=True, help="measured SignalTrace CSV")
    p.add_argument("--axes", nargs="+", default=["y"], choices=["x", "y"])
    p.add_argument("--window", nargs=2, type=float, metavar=("T0", "T1"),
                   help="fit window in ps (default: full measured range)")
    p.add_argument("--max-residual", type=float, default=None,
                   help="fail (exit 4) when the normalized residual exceeds this")
    common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("tables", help="dump cos^2 matrix-element tables")
    p.add_argument("--axis", choices=list(AXES), required=True)
    p.add_argument("--j-max", type=int, default=8)
    common(p)
    p.set_defaults(func=cmd_tables)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
    )
    if getattr(args, "seed", None) is not None:
        np.random.seed(args.seed)
    try:
        return args.func(args)
    except (ConfigParseError, ConfigurationError, FileNotFoundError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TruncationError as exc:
        print(f"physics validity error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
