"""Command-line interface.

Subcommands:

  report          full detection-limit report for one scenario
  sweep           CSV of detection limits while one or more inputs vary
  modes           acoustic mode table of the scenario's cell
  validate-noise  stochastic integration cross-check of the noise model
  presets         list built-in scenarios

Output is deterministic: identical inputs produce byte-identical output
(no timestamps, no machine identifiers), so reports can be diffed and
archived.  Numbers are printed with repr precision, which round-trips
doubles exactly.

Exit codes: 0 success, 1 a validation subcommand found a mismatch,
2 bad usage or an invalid scenario.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .acoustics import cylinder_modes
from .detection import BREAKDOWN_RISK, NEP_CONVENTION_NOTE, SPARSE_SUSPENSION, min_density
from .noise import MODULATION_NOT_SMALL
from .oracle import SdeRunConfig, integrate_langevin, series_variance
from .presets import PRESETS, build_preset, preset_names
from .quantities import Scenario, ScenarioValidationError, sound_speed, validate_scenario
from .raman import LINEWIDTH_CONVENTIONS
from .scenario_io import ParseError, SchemaError, load_scenario, scenario_hash
from .thermal import TIMESCALES_NOT_SEPARATED

__all__ = ["main", "WARNING_BITS", "warning_bits"]

# stable bit assignments for machine-readable warnings
WARNING_BITS = {
    BREAKDOWN_RISK: 1,
    TIMESCALES_NOT_SEPARATED: 2,
    SPARSE_SUSPENSION: 4,
    MODULATION_NOT_SMALL: 8,
}


def warning_bits(codes) -> int:
    bits = 0
    for code in codes:
        bits |= WARNING_BITS.get(code, 0)
    return bits


def _add_scenario_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--preset", default=None,
                       help="built-in scenario name (default: anthrax_stp)")
    group.add_argument("--scenario", default=None, metavar="FILE",
                       help="scenario YAML file")
    parser.add_argument("--lenient", action="store_true",
                        help="warn about unknown scenario keys instead of failing")


def _load(args) -> tuple[Scenario, str]:
    if args.scenario is not None:
        result = load_scenario(args.scenario, lenient=args.lenient)
        for message in result.warnings:
            print(f"warning: {message}", file=sys.stderr)
        return result.scenario, f"file:{args.scenario}"
    name = args.preset if args.preset is not None else "anthrax_stp"
    return build_preset(name), f"preset:{name}"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# report

def _report_text(scenario: Scenario, origin: str, snr: float,
                 convention: str) -> str:
    report = min_density(scenario, snr=snr, linewidth_convention=convention)
    thermal = report.thermal
    eff = thermal.efficiency
    lines = [
        f"parsim detection report (version {__version__})",
        f"scenario: {origin}",
        f"scenario_sha256: {scenario_hash(scenario)}",
        f"linewidth_convention: {convention}",
        f"snr: {snr!r}",
        "",
        "[laser]",
        f"pump_omega_rad_s = {scenario.laser.pump_omega!r}",
        f"stokes_omega_rad_s = {scenario.laser.stokes_omega!r}",
        f"raman_shift_rad_s = {scenario.laser.raman_shift!r}",
        f"pump_intensity_w_m2 = {scenario.laser.pump_intensity!r}",
        f"stokes_intensity_w_m2 = {scenario.laser.stokes_intensity!r}",
        f"modulation_omega_rad_s = {scenario.laser.modulation_omega!r}",
        "",
        "[raman]",
        f"population_factor = {report.gain.population_factor!r}",
        f"gain_factor_m_w = {report.gain.gain_factor!r}",
        f"gain_m = {report.gain.gain!r}",
        f"branching = {report.deposition.branching!r}",
        f"h_r_w_m3 = {report.h_r!r}",
        "",
        "[thermal]",
        f"equivalent_radius_m = {scenario.particle.equivalent_radius!r}",
        f"collision_rate_hz = {thermal.collision_rate!r}",
        f"temperature_rise_k = {thermal.temperature_rise!r}",
        f"peak_temperature_k = {thermal.peak_temperature!r}",
        f"collisional_timescale_s = {thermal.collisional_timescale!r}",
        f"radiative_power_w = {thermal.radiative_power!r}",
        f"radiative_timescale_s = {thermal.radiative_timescale!r}",
        f"drive_separation = {eff.drive_separation!r}",
        f"radiative_separation = {eff.radiative_separation!r}",
        f"eta = {report.eta!r}",
        "",
        "[noise]",
        f"sound_speed_m_s = {sound_speed(scenario.gas)!r}",
        f"cell_volume_m3 = {scenario.cell.volume!r}",
        f"vh_nep_w_sqrt_s = {report.nep.vh_nep!r}",
        f"h_nep_w_sqrt_s_m3 = {report.nep.h_nep!r}",
        "",
        "[detection]",
        f"bandwidth_root_sqrt_hz = {report.bandwidth_root!r}",
        f"intensity_product_w2_m4 = {report.intensity_product!r}",
        f"rho_min_m3 = {report.rho_min!r}",
        f"implied_count_in_cell = {report.rho_min * scenario.cell.volume!r}",
    ]
    if report.h_available is not None:
        lines.append(f"h_available_w_m3 = {report.h_available!r}")
        lines.append(f"spore_density_m3 = {scenario.spore_density!r}")
    flagged = [c for c in report.warnings if c in WARNING_BITS]
    notes = [c for c in report.warnings if c not in WARNING_BITS]
    lines.append(f"warning_bits = {warning_bits(report.warnings)}")
    lines.append("warnings = " + (",".join(flagged) if flagged else "(none)"))
    if notes:
        lines.append("notes = " + ",".join(notes))
    return "\n".join(lines) + "\n"


def _cmd_report(args) -> int:
    scenario, origin = _load(args)
    text = _report_text(scenario, origin, args.snr, args.linewidth_convention)
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------------------
# sweep

_SECTIONS = ("gas", "cell", "laser", "particle", "detector")


def _parse_sweep(spec: str):
    """Parse "path[,path...]=lin|log:lo:hi:n" into (paths, values)."""
    head, sep, tail = spec.partition("=")
    if not sep:
        raise ValueError("sweep spec needs the form path=lin|log:lo:hi:n")
    paths = [p.strip() for p in head.split(",") if p.strip()]
    if not paths:
        raise ValueError("sweep spec names no scenario path")
    parts = tail.split(":")
    if len(parts) != 4:
        raise ValueError("sweep range needs the form lin|log:lo:hi:n")
    kind, lo_s, hi_s, n_s = parts
    if kind not in ("lin", "log"):
        raise ValueError(f"unknown sweep spacing {kind!r} (use lin or log)")
    lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    if n < 2:
        raise ValueError("sweep needs at least 2 points")
    if kind == "log":
        if lo <= 0.0 or hi <= 0.0:
            raise ValueError("log sweeps need positive endpoints")
        values = np.geomspace(lo, hi, n)
    else:
        values = np.linspace(lo, hi, n)
    return paths, values


def _with_value(scenario: Scenario, path: str, value: float) -> Scenario:
    if path == "spore_density":
        return dataclasses.replace(scenario, spore_density=float(value))
    section, sep, attr = path.partition(".")
    if not sep or section not in _SECTIONS:
        raise ValueError(
            f"unknown sweep path {path!r}; use section.attribute with "
            f"section one of {', '.join(_SECTIONS)}, or spore_density")
    component = getattr(scenario, section)
    if attr not in {f.name for f in dataclasses.fields(component)}:
        raise ValueError(f"{section} has no attribute {attr!r}")
    replaced = dataclasses.replace(component, **{attr: float(value)})
    return dataclasses.replace(scenario, **{section: replaced})


def _cmd_sweep(args) -> int:
    scenario, origin = _load(args)
    paths, values = _parse_sweep(args.vary)
    rows = []
    for value in values:
        point = scenario
        for path in paths:
            point = _with_value(point, path, value)
        try:
            validate_scenario(point)
        except ScenarioValidationError as exc:
            raise SchemaError(
                f"sweep point {args.vary.partition('=')[0]}={value!r} "
                f"invalid: {exc}") from exc
        report = min_density(point, snr=args.snr,
                             linewidth_convention=args.linewidth_convention)
        rows.append((value, report))

    lines = [
        f"# parsim sweep (version {__version__})",
        f"# scenario: {origin}",
        f"# scenario_sha256: {scenario_hash(scenario)}",
        f"# linewidth_convention: {args.linewidth_convention}",
        f"# snr: {args.snr!r}",
        f"# vary: {args.vary}",
        ",".join(paths) + ",rho_min_m3,h_r_w_m3,eta,h_nep_w_sqrt_s_m3,warning_bits",
    ]
    for value, report in rows:
        cells = [repr(float(value))] * len(paths)
        cells += [repr(report.rho_min), repr(report.h_r), repr(report.eta),
                  repr(report.h_nep), str(warning_bits(report.warnings))]
        lines.append(",".join(cells))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# modes

def _cmd_modes(args) -> int:
    scenario, origin = _load(args)
    max_axial, max_azimuthal, max_radial = (args.max_axial, args.max_azimuthal,
                                            args.max_radial)
    if args.max_modes is not None:
        parts = args.max_modes.split(",")
        if len(parts) != 3:
            raise ValueError("--max-modes needs three comma-separated "
                             "integers: axial,azimuthal,radial")
        max_axial, max_azimuthal, max_radial = (int(p) for p in parts)
    modes = cylinder_modes(scenario.cell, scenario.gas,
                           max_axial=max_axial,
                           max_radial=max_radial,
                           max_azimuthal=max_azimuthal)
    c = sound_speed(scenario.gas)
    lines = [
        f"# parsim modes (version {__version__})",
        f"# scenario: {origin}",
        f"# sound_speed_m_s: {c!r}",
        f"# cell: length_m={scenario.cell.length!r} radius_m={scenario.cell.radius!r}",
        "q,m,n,omega_rad_s,freq_hz,norm,uniform",
    ]
    for mode in modes:
        q, m, n = mode.index
        lines.append(f"{q},{m},{n},{mode.omega!r},{mode.omega / (2 * math.pi)!r},"
                     f"{mode.norm!r},{'yes' if mode.is_uniform else 'no'}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# validate-noise

def _cmd_validate_noise(args) -> int:
    scenario, origin = _load(args)
    det = scenario.detector
    gas = scenario.gas
    k = scenario.constants
    fastest = max(det.noise_damping, det.noise_mode_omega)
    dt = 0.05 / fastest
    duration = args.duration_dampings / det.noise_damping
    n_keep = int(round(duration / dt))
    nperseg = min(1024, 1 << int(math.log2(max(n_keep, 8))))
    config = SdeRunConfig(
        timestep=dt,
        duration=duration,
        seed=args.seed,
        ensemble_size=args.members,
        mode_omega=det.noise_mode_omega,
        damping=det.noise_damping,
        psd_nperseg=nperseg,
    )
    stats = integrate_langevin(config, scenario)

    lines = [f"noise model validation: {origin}",
             f"seed {args.seed}, {args.members} members, "
             f"{stats.n_samples} samples at dt {dt!r} s"]
    ok = True

    ratio = stats.equipartition_ratio
    sigma = ratio * stats.mean_u2_stderr / stats.mean_u2
    z = abs(ratio - 1.0) / sigma
    passed = z <= args.sigmas
    ok &= passed
    lines.append(f"equipartition: ratio {ratio:.4f} +- {sigma:.4f} "
                 f"(z = {z:.2f}, limit {args.sigmas:.1f}) "
                 f"{'PASS' if passed else 'FAIL'}")

    c = sound_speed(gas)
    analytic_var = (gas.density * c**2 * k.k_boltzmann * gas.temperature
                    / scenario.cell.volume)
    welch_var = series_variance(stats.psd)
    rel = abs(welch_var - analytic_var) / analytic_var
    passed = rel <= args.psd_tolerance
    ok &= passed
    lines.append(f"psd variance: welch {welch_var!r} vs analytic "
                 f"{analytic_var!r} (rel err {100 * rel:.1f}%, "
                 f"limit {100 * args.psd_tolerance:.0f}%) "
                 f"{'PASS' if passed else 'FAIL'}")

    lines.append("overall: " + ("PASS" if ok else "FAIL"))
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# presets

def _cmd_presets(args) -> int:
    lines = []
    for name in preset_names():
        _, blurb = PRESETS[name]
        digest = scenario_hash(build_preset(name))
        lines.append(f"{name}: {blurb} (sha256 {digest[:12]})")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parsim",
        description="Detection-limit calculator for photoacoustic Raman "
                    "sensing of micron-scale particles in gas.")
    parser.add_argument("--version", action="version",
                        version=f"parsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    rep = sub.add_parser("report", help="full detection-limit report")
    _add_scenario_args(rep)
    rep.add_argument("--snr", type=float, default=1.0)
    rep.add_argument("--linewidth-convention", choices=LINEWIDTH_CONVENTIONS,
                     default="ordinary")
    rep.add_argument("--out", default=None, metavar="FILE")
    rep.set_defaults(func=_cmd_report)

    sw = sub.add_parser("sweep", help="detection limit across a parameter range")
    _add_scenario_args(sw)
    sw.add_argument("--vary", required=True, metavar="SPEC",
                    help="path[,path...]=lin|log:lo:hi:n, e.g. "
                         "laser.pump_intensity,laser.stokes_intensity=log:1e10:1e14:9")
    sw.add_argument("--snr", type=float, default=1.0)
    sw.add_argument("--linewidth-convention", choices=LINEWIDTH_CONVENTIONS,
                    default="ordinary")
    sw.add_argument("--out", default=None, metavar="FILE")
    sw.set_defaults(func=_cmd_sweep)

    mo = sub.add_parser("modes", help="acoustic mode table of the cell")
    _add_scenario_args(mo)
    mo.add_argument("--max-axial", type=int, default=4)
    mo.add_argument("--max-radial", type=int, default=2)
    mo.add_argument("--max-azimuthal", type=int, default=0)
    mo.add_argument("--max-modes", default=None, metavar="q,m,n",
                    help="caps for all three indices at once "
                         "(axial,azimuthal,radial); overrides the flags above")
    mo.add_argument("--out", default=None, metavar="FILE")
    mo.set_defaults(func=_cmd_modes)

    vn = sub.add_parser("validate-noise",
                        help="integrate the mode SDE and compare with the "
                             "analytic noise statistics")
    _add_scenario_args(vn)
    vn.add_argument("--seed", type=int, default=1234)
    vn.add_argument("--members", type=int, default=32)
    vn.add_argument("--duration-dampings", type=float, default=200.0,
                    help="run length in units of 1/damping (default 200)")
    vn.add_argument("--sigmas", type=float, default=4.0,
                    help="allowed equipartition deviation in standard errors")
    vn.add_argument("--psd-tolerance", type=float, default=0.15,
                    help="allowed relative error of the PSD-implied variance")
    vn.add_argument("--out", default=None, metavar="FILE")
    vn.set_defaults(func=_cmd_validate_noise)

    pr = sub.add_parser("presets", help="list built-in scenarios")
    pr.add_argument("--out", default=None, metavar="FILE")
    pr.set_defaults(func=_cmd_presets)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, SchemaError, ScenarioValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, ValueError) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
