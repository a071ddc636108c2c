"""Command-line entry point: run experiments, probe fields, self-validate."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from .experiments import EXPERIMENTS, default_scenario, run_experiment, write_csv
from .fields import AXES, Excitation, simplified_field
from .media import Geometry
from .scenario import Scenario, load_scenario
from .sommerfeld import exact_field


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mi-sim",
        description="Underwater magnetic-induction link simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a named experiment and write CSV")
    run.add_argument("experiment", choices=EXPERIMENTS)
    run.add_argument("--scenario", help="scenario file (defaults per experiment)")
    run.add_argument("--out", help="output CSV path (default <experiment>.csv)")
    run.add_argument("--seed", type=int, help="override the scenario seed")
    run.add_argument("--model", choices=("exact", "simplified"),
                     help="override the field model")
    run.add_argument("--draws", type=int, help="override the draw count")

    probe = sub.add_parser("field-probe",
                           help="dump field components over a range grid")
    probe.add_argument("--scenario", help="scenario file for media and coil")
    probe.add_argument("--model", choices=("exact", "simplified"))
    probe.add_argument("--rho-start", type=float, default=2.0)
    probe.add_argument("--rho-stop", type=float, default=10.0)
    probe.add_argument("--points", type=int, default=5)
    probe.add_argument("--out", help="output CSV path (default stdout)")

    sub.add_parser("validate", help="run the invariant self-checks")
    return parser


def _load(args) -> Scenario:
    scenario = (load_scenario(args.scenario) if args.scenario
                else default_scenario(getattr(args, "experiment", "")))
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "model", None) is not None:
        overrides["model"] = args.model
    if getattr(args, "draws", None) is not None:
        overrides["draws"] = args.draws
    return replace(scenario, **overrides) if overrides else scenario


def _cmd_run(args) -> int:
    from .coupling import rank1_defect
    from .experiments import scenario_field_matrix

    scenario = _load(args)
    for i in range(len(scenario.receivers)):
        defect = rank1_defect(scenario_field_matrix(scenario, i))
        print(f"receiver {i + 1}: kernel rank-1 defect |K|_F/sigma_max "
              f"= {defect:.4f} ({scenario.model} model)")
    rows = run_experiment(args.experiment, scenario)
    out = args.out or f"{args.experiment}.csv"
    with open(out, "w", encoding="utf-8", newline="") as fh:
        write_csv(rows, fh)
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def _cmd_field_probe(args) -> int:
    scenario = load_scenario(args.scenario) if args.scenario else Scenario()
    model = args.model or scenario.model
    exc = Excitation(scenario.coil, 1.0)
    rx = scenario.receivers[0]
    lines = ["rho_m,axis,h_rho_re,h_rho_im,h_phi_re,h_phi_im,h_z_re,h_z_im"]
    for rho in np.linspace(args.rho_start, args.rho_stop, args.points):
        geometry = Geometry(scenario.tx_depth, rx.depth_m, float(rho),
                            np.radians(rx.azimuth_deg))
        for axis in AXES:
            if model == "exact":
                h = exact_field(axis, geometry, scenario.air, scenario.water,
                                exc, scenario.frequency, scenario.quadrature())
            else:
                h = simplified_field(axis, geometry, scenario.air,
                                     scenario.water, exc, scenario.frequency)
            vals = h.as_array()
            nums = ",".join(
                f"{part:.12g}" for c in vals for part in (c.real, c.imag))
            lines.append(f"{rho:.12g},{axis},{nums}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_validate() -> int:
    from .validate import run_all_checks

    ok = True
    for name, passed, detail in run_all_checks():
        status = "PASS" if passed else "FAIL"
        print(f"[{status}] {name}: {detail}")
        ok = ok and passed
    return 0 if ok else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "field-probe":
            return _cmd_field_probe(args)
        return _cmd_validate()
    except Exception as exc:  # surface a clean message, not a traceback
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
