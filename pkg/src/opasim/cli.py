"""Command-line front end.

Subcommands:
  spectrum   harmonic table from the numeric pipeline vs the closed form
  scan       quadrature-variance scan of the propagated ensemble (CSV)
  figure     plot-ready CSV bundles for the illustration figures
  oracle     closed-form single-pass report for the configured run
  validate   run the cross-validation suite
  config     show the effective or default run configuration

Exit codes: 0 success, 1 validation failure, 2 usage or config error.
All numeric output uses 17 significant digits and '.' decimals so runs
are reproducible byte for byte; the --workers flag never changes output.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import config as config_mod
from .config import ConfigError, RunConfig
from .ensemble import (
    GaussianState,
    default_thetas,
    propagate_ensemble,
    sample_state_array,
    scan_state,
    squeezing_report,
    variance_scan,
)
from .fields import HarmonicComponent, QuadraturePair, pump_carrier, synthesize
from .figures import FIGURE_NAMES, emit_figure
from .medium import polarize
from .oracle import PassGain, gain_matrix, gain_of_phase, map_quadratures, map_state
from .spectral import full_spectrum, predict_spectrum
from .validate import run_all

SPECTRUM_GATE = 1e-9


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_csv(stream, header, columns) -> None:
    stream.write(",".join(header) + "\n")
    for row in zip(*columns):
        stream.write(",".join(_fmt(v) for v in row) + "\n")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        metavar="PATH",
        help="JSON run configuration; '-' reads from stdin",
    )
    group = parser.add_argument_group("config overrides")
    group.add_argument("--A", type=float, help="fundamental amplitude")
    group.add_argument("--phi-deg", type=float, help="fundamental phase (degrees)")
    group.add_argument("--B", type=float, help="pump amplitude")
    group.add_argument("--pump-phase-deg", type=float, help="pump phase (degrees)")
    group.add_argument("--chi1", type=float, help="linear susceptibility")
    group.add_argument("--chi2", type=float, help="quadratic susceptibility")
    group.add_argument("--chi3", type=float, help="cubic susceptibility")
    group.add_argument("--eps0", type=float, help="permittivity scale")
    group.add_argument("--samples-per-period", type=int)
    group.add_argument("--n-periods", type=int)
    group.add_argument("--n-realizations", type=int)
    group.add_argument("--seed", type=int)
    group.add_argument("--var-zp", type=float, help="vacuum quadrature variance")
    group.add_argument("--thetas", type=int, help="quadrature phases per scan")
    group.add_argument("--mode", choices=("raw", "symplectic"))
    group.add_argument("--band-sigma", type=float, help="envelope width in stds")


def _load_config(args) -> RunConfig:
    if args.config is None:
        cfg = RunConfig()
    elif args.config == "-":
        cfg = config_mod.from_json(sys.stdin.read())
    else:
        cfg = config_mod.from_json(Path(args.config).read_text())
    return config_mod.with_overrides(
        cfg,
        A=args.A,
        phi_deg=args.phi_deg,
        B=args.B,
        pump_phase_deg=args.pump_phase_deg,
        chi1=args.chi1,
        chi2=args.chi2,
        chi3=args.chi3,
        eps0=args.eps0,
        samples_per_period=args.samples_per_period,
        n_periods=args.n_periods,
        n_realizations=args.n_realizations,
        seed=args.seed,
        var_zp=args.var_zp,
        thetas=args.thetas,
        mode=args.mode,
        band_sigma=args.band_sigma,
    )


def _input_carriers(cfg: RunConfig) -> list[HarmonicComponent]:
    return [
        HarmonicComponent(1, cfg.A * math.cos(cfg.phi), -cfg.A * math.sin(cfg.phi)),
        pump_carrier(cfg.B, cfg.pump_phase),
    ]


def cmd_spectrum(args) -> int:
    cfg = _load_config(args)
    if cfg.pump_phase_deg % 360.0 != 0.0:
        raise ConfigError(
            "spectrum compares against the closed form, which is defined "
            "for pump_phase_deg = 0"
        )
    if cfg.medium.chi3 != 0.0:
        raise ConfigError("spectrum requires chi3 = 0 (no closed form kept)")
    series = synthesize(_input_carriers(cfg), cfg.grid())
    numeric = full_spectrum(polarize(series, cfg.medium), 6).scaled(1.0 / cfg.medium.eps0)
    predicted = predict_spectrum(cfg.A, cfg.B, cfg.phi, cfg.medium)

    out = sys.stdout
    out.write(
        f"{'k':>2} {'c_pipeline':>24} {'s_pipeline':>24} {'magnitude':>24} "
        f"{'phase_deg':>12} {'c_predicted':>24} {'s_predicted':>24} {'deviation':>12}\n"
    )
    worst = 0.0
    for comp in numeric:
        k = comp.k
        pred_c, pred_s = (
            (predicted.component(k).c, predicted.component(k).s)
            if k <= predicted.k_max
            else (0.0, 0.0)
        )
        dev = max(
            abs(comp.c - pred_c) / max(1.0, abs(pred_c)),
            abs(comp.s - pred_s) / max(1.0, abs(pred_s)),
        )
        worst = max(worst, dev)
        out.write(
            f"{k:>2} {comp.c:>24.16e} {comp.s:>24.16e} {comp.magnitude:>24.16e} "
            f"{math.degrees(comp.phase):>12.6f} {pred_c:>24.16e} {pred_s:>24.16e} "
            f"{dev:>12.3e}\n"
        )
    out.write(f"max deviation = {worst:.3e} (gate {SPECTRUM_GATE:.0e})\n")
    return 0 if worst <= SPECTRUM_GATE else 1


def _scan_pairs(cfg: RunConfig, workers: int) -> np.ndarray:
    """Sample the configured input state and apply the configured channel."""
    ens = cfg.ensemble()
    state = GaussianState.coherent(
        QuadraturePair.from_amplitude_phase(cfg.A, cfg.phi), ens.convention
    )
    pairs = sample_state_array(state, ens)
    if cfg.mode == "symplectic":
        gain = PassGain(cfg.pump_ratio, "symplectic")
        return map_quadratures(pairs, gain, cfg.pump_phase)
    return propagate_ensemble(
        pairs, cfg.B, cfg.pump_phase, cfg.medium, ens.grid, workers=workers
    )


def _summary_line(report) -> str:
    return (
        f"squeeze {report.squeeze_db:+.3f} dB at theta {math.degrees(report.theta_min):.1f} deg; "
        f"antisqueeze {report.antisqueeze_db:+.3f} dB at theta {math.degrees(report.theta_max):.1f} deg; "
        f"uncertainty product {report.uncertainty_product:.6g}"
    )


def cmd_scan(args) -> int:
    cfg = _load_config(args)
    out_pairs = _scan_pairs(cfg, args.workers)
    thetas = default_thetas(cfg.thetas)
    scan = variance_scan(out_pairs, thetas)
    convention = cfg.convention()
    with np.errstate(divide="ignore"):
        squeeze_db = 10.0 * np.log10(scan.variances / convention.var_zp)
    columns = (np.degrees(scan.thetas), scan.variances, scan.means, squeeze_db)
    header = ("theta_deg", "variance", "mean", "squeeze_db")
    if args.output:
        with open(args.output, "w", newline="\n") as stream:
            write_csv(stream, header, columns)
    else:
        write_csv(sys.stdout, header, columns)
    report = squeezing_report(scan, convention)
    print(_summary_line(report), file=sys.stderr)
    return 0


def cmd_figure(args) -> int:
    cfg = _load_config(args)
    tables = emit_figure(args.name, cfg, workers=args.workers)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for table in tables:
        path = outdir / f"{table.name}.csv"
        with open(path, "w", newline="\n") as stream:
            write_csv(stream, table.header, table.columns)
        print(path)
    return 0


def cmd_oracle(args) -> int:
    cfg = _load_config(args)
    gain = PassGain(cfg.pump_ratio, cfg.mode)
    g1, g2 = gain.gains()
    convention = cfg.convention()
    state_in = GaussianState.coherent(
        QuadraturePair.from_amplitude_phase(cfg.A, cfg.phi), convention
    )
    state_out = map_state(state_in, gain, cfg.pump_phase)
    report = squeezing_report(
        scan_state(state_out, default_thetas(cfg.thetas)), convention
    )
    matrix = gain_matrix(gain, cfg.pump_phase)
    out = sys.stdout
    out.write(f"mode                = {cfg.mode}\n")
    out.write(f"pump ratio r        = {_fmt(cfg.pump_ratio)}\n")
    out.write(f"gains (g1, g2)      = {_fmt(g1)}, {_fmt(g2)}\n")
    out.write(
        f"transfer matrix     = [[{_fmt(matrix[0, 0])}, {_fmt(matrix[0, 1])}], "
        f"[{_fmt(matrix[1, 0])}, {_fmt(matrix[1, 1])}]]\n"
    )
    out.write(
        f"mean out (x1, x2)   = {_fmt(state_out.mean.x1)}, {_fmt(state_out.mean.x2)}\n"
    )
    out.write(
        f"cov out             = [[{_fmt(state_out.cov[0, 0])}, {_fmt(state_out.cov[0, 1])}], "
        f"[{_fmt(state_out.cov[1, 0])}, {_fmt(state_out.cov[1, 1])}]]\n"
    )
    out.write(f"det cov / var_zp^2  = {_fmt(float(np.linalg.det(state_out.cov)) / convention.var_zp**2)}\n")
    if cfg.A > 0.0:
        out.write(
            f"amplitude gain      = {_fmt(gain_of_phase(cfg.A, cfg.phi, gain))}"
            f" (at phi = {_fmt(cfg.phi_deg)} deg)\n"
        )
    out.write(
        f"v_min, v_max        = {_fmt(report.v_min)}, {_fmt(report.v_max)} "
        f"(theta {math.degrees(report.theta_min):.1f}, {math.degrees(report.theta_max):.1f} deg)\n"
    )
    out.write(
        f"squeeze, antisqueeze = {report.squeeze_db:+.4f} dB, {report.antisqueeze_db:+.4f} dB\n"
    )
    out.write(f"uncertainty product = {_fmt(report.uncertainty_product)}\n")
    return 0


def cmd_validate(args) -> int:
    cfg = _load_config(args)
    failures = 0
    for name, ok, detail in run_all(cfg):
        status = "PASS" if ok else "FAIL"
        print(f"{status} {name}: {detail}")
        failures += 0 if ok else 1
    if failures:
        print(f"{failures} check(s) failed", file=sys.stderr)
        return 1
    return 0


def cmd_config(args) -> int:
    if args.print_defaults:
        sys.stdout.write(RunConfig().to_json())
        return 0
    cfg = _load_config(args)
    sys.stdout.write(cfg.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opasim",
        description="Simulator of optical parametric generation of squeezed light",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_spectrum = sub.add_parser(
        "spectrum", help="harmonic table: numeric pipeline vs closed form"
    )
    _add_config_flags(p_spectrum)
    p_spectrum.set_defaults(func=cmd_spectrum)

    p_scan = sub.add_parser("scan", help="quadrature variance scan (CSV)")
    _add_config_flags(p_scan)
    p_scan.add_argument("-o", "--output", metavar="FILE", help="write CSV here")
    p_scan.add_argument("--workers", type=int, default=1)
    p_scan.set_defaults(func=cmd_scan)

    p_figure = sub.add_parser("figure", help="emit plot data for a named figure")
    p_figure.add_argument("name", choices=FIGURE_NAMES)
    _add_config_flags(p_figure)
    p_figure.add_argument("--outdir", default=".", help="directory for CSV files")
    p_figure.add_argument("--workers", type=int, default=1)
    p_figure.set_defaults(func=cmd_figure)

    p_oracle = sub.add_parser("oracle", help="closed-form single-pass report")
    _add_config_flags(p_oracle)
    p_oracle.set_defaults(func=cmd_oracle)

    p_validate = sub.add_parser("validate", help="run the cross-validation suite")
    _add_config_flags(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_config = sub.add_parser("config", help="show run configuration as JSON")
    _add_config_flags(p_config)
    p_config.add_argument(
        "--print-defaults", action="store_true", help="show built-in defaults"
    )
    p_config.set_defaults(func=cmd_config)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
