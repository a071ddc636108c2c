#!/usr/bin/env python3
"""Run the five standard experiments and drop their CSVs under results/.

Each experiment uses its built-in default scenario; pass --draws/--seed to
override.  Render the figures afterwards with the frontend package:

    cd frontend && npm run render -- --experiment fig5_reliability \
        --csv ../results/fig5_reliability.csv --out ../results/fig5.svg
"""

import argparse
import pathlib
import sys
import time
from dataclasses import replace

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from mi_sim import EXPERIMENTS, default_scenario, run_experiment, write_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--draws", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--experiments", nargs="*", default=list(EXPERIMENTS))
    args = parser.parse_args()

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in args.experiments:
        scenario = default_scenario(name)
        overrides = {}
        if args.draws:
            overrides["draws"] = args.draws
        if args.seed is not None:
            overrides["seed"] = args.seed
        if overrides:
            scenario = replace(scenario, **overrides)
        started = time.time()
        rows = run_experiment(name, scenario)
        path = out_dir / f"{name}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)
        print(f"{name}: {len(rows)} rows -> {path} ({time.time() - started:.1f}s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
