"""Command-line front end: landscape, switching, sweeps, imaging, budgets.

Every subcommand reads the same plain-text config (all defaults when no
--config is given), writes CSV (and PGM for images) under the output
directory and prints a one-line summary. Each output file starts with a
provenance header carrying the tool version and the config hash, so a
result can always be traced to the exact configuration that produced it.

Sweeps distribute points over `run.workers` processes; results are
assembled in axis order, so outputs are byte-identical for any worker
count. An environment-variable override for workers is deliberately not
honored: the config (or the --workers flag) is the single source of truth.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__, landscape
from .config import ConfigError, RunConfig, config_hash, parse_config, serialize_config
from .dynamics import FitError, IntegrationError, relax_in_field, simulate_switch
from .energetics import (
    bit_dissipation,
    heat_density,
    photon_areal_density,
    photon_volume_density,
    temperature_rise,
)
from .imaging import (
    BeamProfile,
    area_sweep,
    checkerboard_image,
    load_pgm_labels,
    normalized_switched_area,
    render_pgm,
    simulate_image,
    stripe_image,
    uniform_image,
)
from .landscape import find_minima, fmr_frequency, minima_by_label, parse_label
from .magnetics import FilmFrame
from .photoexcitation import (
    CalibrationError,
    NotCalibratedError,
    absorption_coeff,
    calibrate_threshold,
    photo_field_magnitude,
)
from .symmetry import ChiTensor, group_elements, project_tensor, switching_coefficient


def _provenance(cfg: RunConfig) -> str:
    return f"# photomag {__version__}\n# config_hash={config_hash(cfg)}\n"


def _write_csv(path: Path, cfg: RunConfig, header: str, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(_provenance(cfg))
        f.write(header + "\n")
        for row in rows:
            f.write(",".join(_cell(v) for v in row) + "\n")


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return str(v)


def _load_config(args) -> RunConfig:
    text = Path(args.config).read_text(encoding="utf-8") if args.config else ""
    cfg = parse_config(text)
    if getattr(args, "workers", None):
        cfg = replace(cfg, run=replace(cfg.run, workers=args.workers))
    if getattr(args, "out", None):
        cfg = replace(cfg, output=replace(cfg.output, directory=args.out))
    return cfg


def _pulse_from_args(cfg: RunConfig, args):
    pulse = cfg.pulse
    if getattr(args, "fluence", None) is not None:
        pulse = replace(pulse, fluence=args.fluence)
    if getattr(args, "wavelength", None) is not None:
        pulse = replace(pulse, wavelength_nm=args.wavelength)
    if getattr(args, "phi", None) is not None:
        pulse = replace(pulse, polarization_angle_deg=args.phi)
    return pulse


def _require_calibrated(pulse) -> None:
    if pulse.coupling_at_reference is None:
        raise NotCalibratedError(
            "pulse.coupling_at_reference is not set; run the `calibrate` subcommand "
            "and use the config it writes"
        )


def cmd_minima(cfg: RunConfig, args) -> int:
    frame = FilmFrame.from_params(cfg.material)
    minima = find_minima(cfg.material, frame)
    rows = [
        (eq.label, float(eq.m[0]), float(eq.m[1]), float(eq.m[2]), eq.energy,
         fmr_frequency(cfg.material, frame, eq))
        for eq in minima
    ]
    out = Path(cfg.output.directory) / "minima.csv"
    _write_csv(out, cfg, "label,mx,my,mz,energy_erg_cm3,fmr_GHz", rows)
    print(f"{len(minima)} minima -> {out}")
    return 0


def cmd_switch(cfg: RunConfig, args) -> int:
    frame = FilmFrame.from_params(cfg.material)
    pulse = _pulse_from_args(cfg, args)
    _require_calibrated(pulse)
    outcome = simulate_switch(
        parse_label(args.from_label), cfg.material, frame, pulse,
        t_end_ps=cfg.sim.t_end_ps, dt_ps=cfg.sim.dt_ps,
        spectral_model=cfg.spectral, t_pre_ps=cfg.sim.t_pre_ps,
    )
    out = Path(cfg.output.directory) / "trajectory.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    tr = outcome.trajectory
    with open(out, "w", encoding="utf-8") as f:
        f.write(_provenance(cfg))
        f.write("t_ps,mx,my,mz,energy_erg_cm3,label\n")
        for t, m, e, lab in zip(tr.times, tr.m, tr.energies, tr.labels):
            f.write(f"{t!r},{m[0]!r},{m[1]!r},{m[2]!r},{e!r},{lab}\n")
    verdict = "undecided" if outcome.undecided else f"switched={'true' if outcome.switched else 'false'}"
    print(f"{outcome.initial_label} -> {outcome.final_label}, {verdict}")
    if outcome.crossing_time_ps is not None:
        print(f"crossing_time_ps={outcome.crossing_time_ps!r} "
              f"stabilization_time_ps={outcome.stabilization_time_ps!r} "
              f"fitted_tau_ps={outcome.fitted_tau_ps!r}")
    print(f"trajectory -> {out}")
    return 0


def cmd_relax(cfg: RunConfig, args) -> int:
    frame = FilmFrame.from_params(cfg.material)
    direction = np.array([float(x) for x in args.field_dir.split(",")])
    h = args.field_oe * direction / np.linalg.norm(direction)
    rng = np.random.default_rng(args.seed)
    m0 = rng.normal(size=3)
    m0 /= np.linalg.norm(m0)
    final = relax_in_field(m0, cfg.material, frame, h, t_relax_ps=args.t_relax)
    minima = find_minima(cfg.material, frame)
    label = landscape.classify(final, minima)
    out = Path(cfg.output.directory) / "relax.csv"
    _write_csv(out, cfg, "field_oe,dir_x,dir_y,dir_z,mx,my,mz,label",
               [(args.field_oe, *direction, *map(float, final), label)])
    print(f"relaxed into {label} (m = {np.round(final, 5)}) -> {out}")
    return 0


def _sweep_point(packed):
    """Worker task: one sweep point, exceptions folded into the row."""
    cfg_text, variable, value = packed
    cfg = parse_config(cfg_text)
    frame = FilmFrame.from_params(cfg.material)
    pulse = cfg.pulse
    if variable == "fluence":
        pulse = replace(pulse, fluence=float(value))
    elif variable == "wavelength":
        pulse = replace(pulse, wavelength_nm=float(value))
    elif variable == "polarization":
        pulse = replace(pulse, polarization_angle_deg=float(value))
    try:
        _require_calibrated(pulse)
        outcome = simulate_switch(
            parse_label(cfg.run.from_label), cfg.material, frame, pulse,
            t_end_ps=cfg.sim.t_end_ps, dt_ps=cfg.sim.dt_ps,
            spectral_model=cfg.spectral, t_pre_ps=cfg.sim.t_pre_ps,
        )
        tr = outcome.trajectory
        sel = tr.times >= 0.0
        max_dmz = float(np.max(np.abs(tr.m[sel, 2] - tr.m[sel][0, 2])))
        return (float(value), outcome.switched, outcome.undecided,
                outcome.initial_label, outcome.final_label,
                outcome.crossing_time_ps, outcome.stabilization_time_ps,
                max_dmz, "")
    except (NotCalibratedError, IntegrationError, ValueError) as exc:
        return (float(value), None, None, cfg.run.from_label, None, None, None, None, str(exc))


def _run_sweep(cfg: RunConfig, variable: str, out_name: str) -> Path:
    values = np.linspace(cfg.sweep.start, cfg.sweep.stop, cfg.sweep.steps)
    cfg_text = serialize_config(cfg)
    tasks = [(cfg_text, variable, float(v)) for v in values]
    if cfg.run.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.run.workers) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    axis = {"fluence": "fluence_mJcm2", "wavelength": "lambda_nm", "polarization": "phi_deg"}[variable]
    out = Path(cfg.output.directory) / out_name
    _write_csv(out, cfg,
               f"{axis},switched,undecided,initial_label,final_label,"
               f"crossing_time_ps,stabilization_time_ps,max_abs_dmz,error",
               rows)
    return out


def cmd_sweep(cfg: RunConfig, args, variable: str) -> int:
    sweep = cfg.sweep
    if args.start is not None:
        sweep = replace(sweep, start=args.start)
    if args.stop is not None:
        sweep = replace(sweep, stop=args.stop)
    if args.steps is not None:
        sweep = replace(sweep, steps=args.steps)
    cfg = replace(cfg, sweep=replace(sweep, variable=variable))
    out = _run_sweep(cfg, variable, f"sweep_{variable}.csv")
    print(f"{cfg.sweep.steps} points -> {out}")
    return 0


def _initial_image(cfg: RunConfig, minima):
    by_label = minima_by_label(minima)
    pitch = cfg.image.size_um / cfg.image.grid_px
    pattern = cfg.image.pattern
    if pattern == "uniform":
        return uniform_image(cfg.run.from_label, cfg.image.grid_px, pitch, by_label)
    if pattern == "stripes":
        return stripe_image(("L+", "S-"), cfg.image.stripe_period_um,
                            cfg.image.grid_px, pitch, by_label)
    if pattern == "checkerboard":
        return checkerboard_image(("L+", "S-"), cfg.image.stripe_period_um,
                                  cfg.image.grid_px, pitch, by_label)
    data = Path(cfg.image.pattern_file).read_bytes()
    return load_pgm_labels(data, pitch, by_label)


def cmd_image(cfg: RunConfig, args) -> int:
    frame = FilmFrame.from_params(cfg.material)
    pulse = _pulse_from_args(cfg, args)
    _require_calibrated(pulse)
    minima = find_minima(cfg.material, frame)
    initial = _initial_image(cfg, minima)
    beam = BeamProfile(
        peak_fluence=args.i0 if args.i0 is not None else cfg.beam.peak_fluence,
        spot_radius_um=cfg.beam.spot_radius_um,
        center_um=(cfg.beam.center_x_um, cfg.beam.center_y_um),
    )
    outdir = Path(cfg.output.directory)
    outdir.mkdir(parents=True, exist_ok=True)

    if args.sweep:
        values = np.linspace(args.start, args.stop, args.steps)
        pulse_for_sweep = replace(pulse, fluence=beam.peak_fluence)
        rows = area_sweep(args.sweep, values, initial, beam, pulse_for_sweep,
                          cfg.material, frame, minima=minima, spectral_model=cfg.spectral,
                          t_end_ps=cfg.sim.t_end_ps, dt_ps=cfg.sim.dt_ps)
        axis = "I0_mJcm2" if args.sweep == "fluence" else "lambda_nm"
        out = outdir / f"area_vs_{args.sweep}.csv"
        _write_csv(out, cfg, f"{axis},normalized_area,undecided_fraction",
                   [(r[axis], r["normalized_area"], r["undecided_fraction"]) for r in rows])
        print(f"area sweep -> {out}")
        return 0

    pulse = replace(pulse, fluence=beam.peak_fluence)
    result = simulate_image(initial, beam, pulse, cfg.material, frame,
                            minima=minima, spectral_model=cfg.spectral,
                            t_end_ps=cfg.sim.t_end_ps, dt_ps=cfg.sim.dt_ps)
    (outdir / "before.pgm").write_bytes(render_pgm(initial, "mz"))
    (outdir / "after.pgm").write_bytes(render_pgm(result.final, "mz"))
    (outdir / "difference.pgm").write_bytes(
        render_pgm(result.final, "difference", reference=initial,
                   undecided_mask=result.undecided_mask))
    area = normalized_switched_area(initial, result.final, beam)
    _write_csv(outdir / "image_summary.csv", cfg,
               "I0_mJcm2,normalized_area,undecided_fraction",
               [(beam.peak_fluence, area, result.undecided_pixels / initial.labels.size)])
    print(f"normalized switched area = {area:.4f}, undecided pixels = "
          f"{result.undecided_pixels} -> {outdir}/(before|after|difference).pgm")
    return 0


def cmd_energetics(cfg: RunConfig, args) -> int:
    thermo = cfg.sample
    a = args.absorption if args.absorption is not None else absorption_coeff(
        cfg.pulse.wavelength_nm, cfg.spectral)
    fluence = args.fluence if args.fluence is not None else 34.0
    dims = tuple(float(x) for x in args.bit_dims.split("x"))
    q = heat_density(a, fluence, thermo.thickness_cm)
    rows = [
        ("temperature_rise", temperature_rise(a, fluence, thermo), "K"),
        ("heat_density", q, "J_cm3"),
        ("photon_areal_density", photon_areal_density(a, fluence, thermo.photon_energy_ev), "cm-2"),
        ("photon_volume_density",
         photon_volume_density(a, fluence, thermo.photon_energy_ev, thermo.thickness_cm), "cm-3"),
        ("bit_dissipation", bit_dissipation(q, dims), "aJ"),
    ]
    out = Path(cfg.output.directory) / "energetics.csv"
    _write_csv(out, cfg, "quantity,value,unit", rows)
    for name, value, unit in rows:
        print(f"{name} = {value:.6g} {unit}")
    print(f"-> {out}")
    return 0


def cmd_tensor(cfg: RunConfig, args) -> int:
    group = group_elements(args.group)
    chi = project_tensor(ChiTensor.random(args.seed), group)
    names = "xyz"
    rows = []
    for i in range(3):
        for j in range(3):
            for k in range(3):
                for l in range(3):
                    v = chi.components[i, j, k, l]
                    if abs(v) > 1e-12:
                        rows.append((names[i] + names[j] + names[k] + names[l], v))
    out = Path(cfg.output.directory) / f"tensor_{args.group}.csv"
    a = switching_coefficient(chi)
    _write_csv(out, cfg, "component,value", rows)
    with open(out, "a", encoding="utf-8") as f:
        f.write(f"# switching term: W(phi) = A cos(2 phi) mx my with A = {a!r}\n")
    print(f"group {args.group}: {len(rows)} nonzero components, "
          f"switching coefficient A = {a:.6g} -> {out}")
    return 0


def cmd_calibrate(cfg: RunConfig, args) -> int:
    frame = FilmFrame.from_params(cfg.material)
    coupling = calibrate_threshold(
        cfg.material, frame,
        target_imin=args.target, wavelength_nm=args.wavelength or 1300.0,
        model=cfg.spectral, lifetime_ps=cfg.pulse.lifetime_ps,
        t_end_ps=cfg.sim.t_end_ps, dt_ps=cfg.sim.dt_ps,
    )
    cfg = replace(cfg, pulse=replace(cfg.pulse, coupling_at_reference=coupling))
    outdir = Path(cfg.output.directory)
    outdir.mkdir(parents=True, exist_ok=True)
    out = outdir / "calibrated.config"
    out.write_text(serialize_config(cfg), encoding="utf-8")
    minima = find_minima(cfg.material, frame)
    eq = minima_by_label(minima)["L+"]
    pulse = replace(cfg.pulse, fluence=args.target, wavelength_nm=args.wavelength or 1300.0)
    h_l = photo_field_magnitude(pulse, eq.m, cfg.material, cfg.spectral)
    print(f"coupling_at_reference = {coupling!r} erg cm^-3 per mJ cm^-2")
    print(f"photo-induced field at threshold: {h_l:.0f} Oe")
    print(f"calibrated config -> {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photomag",
        description="Macrospin simulator for polarization-controlled photo-magnetic switching",
    )
    parser.add_argument("--version", action="version", version=f"photomag {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="run configuration file")
        p.add_argument("--out", help="output directory (overrides output.directory)")
        p.add_argument("--workers", type=int, help="worker processes (overrides run.workers)")

    p = sub.add_parser("minima", help="locate metastable states and their FMR frequencies")
    common(p)

    p = sub.add_parser("switch", help="single-pulse switching attempt from a labeled state")
    common(p)
    p.add_argument("--phi", type=float, help="pump polarization angle from [100], deg")
    p.add_argument("--fluence", type=float, help="pump fluence, mJ/cm^2")
    p.add_argument("--lambda", dest="wavelength", type=float, help="pump wavelength, nm")
    p.add_argument("--from", dest="from_label", default="L+", help="initial domain label")

    p = sub.add_parser("relax", help="field preparation protocol from a random state")
    common(p)
    p.add_argument("--field-oe", type=float, default=800.0)
    p.add_argument("--field-dir", default="1,-1,0", help="field direction, crystal frame")
    p.add_argument("--t-relax", type=float, default=500.0)
    p.add_argument("--seed", type=int, default=0)

    for name in ("sweep-fluence", "sweep-polarization", "sweep-wavelength"):
        p = sub.add_parser(name, help=f"{name.split('-', 1)[1]} sweep of switching observables")
        common(p)
        p.add_argument("--start", type=float)
        p.add_argument("--stop", type=float)
        p.add_argument("--steps", type=int)

    p = sub.add_parser("image", help="pulse a 2-D domain pattern under the Gaussian beam")
    common(p)
    p.add_argument("--i0", type=float, help="peak fluence, mJ/cm^2")
    p.add_argument("--phi", type=float, help="pump polarization angle, deg")
    p.add_argument("--lambda", dest="wavelength", type=float, help="pump wavelength, nm")
    p.add_argument("--sweep", choices=("fluence", "wavelength"),
                   help="emit normalized-area sweep instead of images")
    p.add_argument("--start", type=float, default=5.0)
    p.add_argument("--stop", type=float, default=150.0)
    p.add_argument("--steps", type=int, default=30)

    p = sub.add_parser("energetics", help="heating and photon budget table")
    common(p)
    p.add_argument("--absorption", type=float, help="absorbed fraction (default: from spectrum)")
    p.add_argument("--fluence", type=float, help="fluence, mJ/cm^2 (default 34)")
    p.add_argument("--bit-dims", default="20x20x10", help="bit size in nm, WxHxD")

    p = sub.add_parser("tensor", help="project a random susceptibility onto a point group")
    common(p)
    p.add_argument("--group", choices=("1", "4", "4mm"), default="4")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("calibrate", help="pin the fluence-to-anisotropy coupling to a threshold")
    common(p)
    p.add_argument("--target", type=float, default=34.0, help="threshold fluence, mJ/cm^2")
    p.add_argument("--lambda", dest="wavelength", type=float, help="calibration wavelength, nm")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        if args.command == "minima":
            return cmd_minima(cfg, args)
        if args.command == "switch":
            return cmd_switch(cfg, args)
        if args.command == "relax":
            return cmd_relax(cfg, args)
        if args.command == "sweep-fluence":
            return cmd_sweep(cfg, args, "fluence")
        if args.command == "sweep-polarization":
            return cmd_sweep(cfg, args, "polarization")
        if args.command == "sweep-wavelength":
            return cmd_sweep(cfg, args, "wavelength")
        if args.command == "image":
            return cmd_image(cfg, args)
        if args.command == "energetics":
            return cmd_energetics(cfg, args)
        if args.command == "tensor":
            return cmd_tensor(cfg, args)
        if args.command == "calibrate":
            return cmd_calibrate(cfg, args)
        raise AssertionError(f"unhandled command {args.command}")
    except (ConfigError, CalibrationError, NotCalibratedError, IntegrationError,
            FitError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
