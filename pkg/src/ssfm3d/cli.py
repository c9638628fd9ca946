"""Batch command-line driver.

Subcommands:
    run               propagate a configured problem, writing diagnostics
                      tables and field dumps into the output directory
    validate          run the desk-scale self-check suite (pass/fail lines)
    convergence-sweep measure the global accuracy order on a steepening toy
    describe-presets  list presets, their constants, schedules, and profiles

Exit codes: 0 success, 1 failed check/sweep, 2 configuration error,
3 runtime blow-up (with a last-good-slice report).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fielddump, stepper, validation
from .config import RunConfig, parse_config
from .errors import ConfigError, PropagationError, SolverError
from .grid import build_grid
from .nonlinear_operators import Alpha2Order
from .oracle import reference_integrate
from .presets import PRESETS, PROFILES, InitialCondition, PresetSpec, instantiate
from .stepper import SCHEDULES, DiagnosticsConfig, StepSchedule


def _build_schedule(config: RunConfig) -> StepSchedule:
    if config.schedule_entries is not None:
        return StepSchedule(entries=config.schedule_entries, name="custom")
    return SCHEDULES[config.schedule_name]()


def _write_diagnostics(log: list[dict], outdir: Path, config: RunConfig) -> None:
    scalar_cols = [
        q for q in ("l2_norm", "peak_intensity") if q in config.diagnostics.quantities
    ]
    with open(outdir / "diagnostics.tsv", "w") as fh:
        header = ["slice", "zeta", *scalar_cols]
        if any("nyquist_flag" in rec for rec in log):
            header.append("nyquist_flag")
        fh.write("\t".join(header) + "\n")
        for rec in log:
            row = [str(rec["slice"]), repr(rec["zeta"])]
            row += [repr(rec[c]) for c in scalar_cols]
            if "nyquist_flag" in rec:
                row.append("1" if rec["nyquist_flag"] else "0")
            fh.write("\t".join(row) + "\n")

    for quantity in ("time_spectrum", "transverse_spectrum"):
        if quantity not in config.diagnostics.quantities:
            continue
        with open(outdir / f"{quantity}.tsv", "w") as fh:
            for rec in log:
                values = "\t".join(repr(v) for v in rec[quantity])
                fh.write(f"{rec['slice']}\t{values}\n")


def _cmd_run(args) -> int:
    try:
        config = parse_config(Path(args.config).read_text())
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        grid = config.grid.build()
        bundle = instantiate(config.preset, grid)
        bundle.model.alpha2_order = Alpha2Order(config.alpha2_order)
        schedule = _build_schedule(config)
        hooks = DiagnosticsConfig(
            record_every=config.diagnostics.record_every,
            quantities=config.diagnostics.quantities,
            nyquist_threshold=config.nyquist_threshold,
        )
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    outdir = Path(args.output_dir or config.output.directory)
    outdir.mkdir(parents=True, exist_ok=True)

    try:
        state = stepper.run(bundle.initial, bundle.model, bundle.symbol, schedule, grid, hooks)
    except PropagationError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        last = exc.last_state
        if last is not None:
            print(
                f"last good slice: {last.slice_index} (zeta = {last.zeta!r});"
                " dumping it for inspection",
                file=sys.stderr,
            )
            fielddump.write_dump(
                last.field,
                str(outdir / "field_lastgood.fdump"),
                zeta=last.zeta,
                precision=config.output.precision,
            )
            _write_diagnostics(last.diagnostics_log, outdir, config)
        return 3

    _write_diagnostics(state.diagnostics_log, outdir, config)
    for rec in state.diagnostics_log:
        if "full_field" in rec:
            fielddump.write_dump(
                rec["full_field"],
                str(outdir / f"field_{rec['slice']:06d}.fdump"),
                zeta=rec["zeta"],
                precision=config.output.precision,
            )
    fielddump.write_dump(
        state.field,
        str(outdir / "field_final.fdump"),
        zeta=state.zeta,
        precision=config.output.precision,
    )
    print(
        f"run complete: {state.slice_index} slices to zeta = {state.zeta!r},"
        f" {len(state.diagnostics_log)} diagnostic rows -> {outdir}"
    )
    return 0


def _cmd_validate(args) -> int:
    return 0 if validation.run_all() else 1


def _cmd_sweep(args) -> int:
    dzetas = sorted((float(s) for s in args.dzeta.split(",")), reverse=True)
    zeta_end = args.zeta_end
    steps_per = [zeta_end / dz for dz in dzetas]
    for dz, n in zip(dzetas, steps_per):
        if abs(n - round(n)) > 1e-9:
            print(f"error: zeta_end = {zeta_end} is not a multiple of dzeta = {dz}", file=sys.stderr)
            return 2

    spec = PresetSpec(
        name="derivative-nlse-toy",
        constants={"steepening": args.steepening},
        initial_condition=InitialCondition(
            "gaussian", {"amplitude": 1.5, "width_x": 1.0, "width_t": 1.0}
        ),
    )
    errors = []
    reference = None
    for dz in dzetas:
        grid = build_grid(args.nx, 1, args.nt, 0.5, 1.0, 0.25, dzeta=dz, n_steps=int(round(zeta_end / dz)))
        bundle = instantiate(spec, grid)
        if reference is None:
            n_ref = int(round(zeta_end / args.ref_step))
            print(f"reference: {n_ref} steps of a 4th-order one-step method at {args.ref_step:g}")
            reference = reference_integrate(
                bundle.initial, bundle.model, bundle.symbol, args.ref_step, n_ref
            ).values
        final = stepper.run(bundle.initial, bundle.model, bundle.symbol, bundle.schedule, grid)
        err = float(np.linalg.norm(final.field.values - reference) / np.linalg.norm(reference))
        errors.append(err)
        print(f"dzeta = {dz:<9g} rel L2 error = {err:.6e}")

    slope = float(np.polyfit(np.log(dzetas), np.log(errors), 1)[0])
    print(f"measured order: {slope:.3f}")
    if slope < 1.8:
        print("error: measured order below 1.8", file=sys.stderr)
        return 1
    return 0


def _cmd_describe(args) -> int:
    print("presets:")
    for name in sorted(PRESETS):
        info = PRESETS[name]
        print(f"  {name}: {info.description}")
        req = ", ".join(info.required) if info.required else "(none)"
        print(f"    required constants: {req}")
        if info.optional:
            opts = ", ".join(f"{k}={v:g}" for k, v in sorted(info.optional.items()))
            print(f"    optional constants: {opts}")
    print(f"schedules: {', '.join(sorted(SCHEDULES))}")
    print(f"initial profiles: {', '.join(PROFILES)}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ssfm3d",
        description="exponential split-step propagator for 3+1D nonlinear fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="propagate a configured problem")
    p_run.add_argument("config", help="path to the run configuration file")
    p_run.add_argument("--output-dir", help="override the configured output directory")
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser("validate", help="run the self-check suite")
    p_val.set_defaults(func=_cmd_validate)

    p_sweep = sub.add_parser(
        "convergence-sweep", help="measure the global order on the steepening toy"
    )
    p_sweep.add_argument("--dzeta", default="4e-3,2e-3,1e-3", help="comma list of step sizes")
    p_sweep.add_argument("--zeta-end", type=float, default=0.02)
    p_sweep.add_argument("--ref-step", type=float, default=2e-5)
    p_sweep.add_argument("--nx", type=int, default=32)
    p_sweep.add_argument("--nt", type=int, default=64)
    p_sweep.add_argument("--steepening", type=float, default=-0.2)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_desc = sub.add_parser("describe-presets", help="list presets and constants")
    p_desc.set_defaults(func=_cmd_describe)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())
