"""Sweep the basin contrast and watch both methods' errors grow with it.

Reruns the two-basin pipeline at several contrast steps with survey noise
proportional to the step (constant signal-to-noise), then prints the MAE of
the in-water path method, the straight-line method, and the gap between
them at each step. Larger contrasts mean larger errors for both methods,
with the straight-line method falling behind faster.

Example:
    python3 scripts/sweep_step_sizes.py --out-dir runs/step_sweep
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from pathidw.cli import main as pathidw
from pathidw.fileio import read_error_report

SCENE_CELLS = 100
CELLSIZE = 60.0
MESH_CELLSIZE = 1095.4


def cli(*args):
    argv = [str(a) for a in args]
    rc = pathidw(argv)
    if rc != 0:
        raise SystemExit(f"pathidw {argv[0]} exited with {rc}")


def run_step(step_dir: Path, seed: int, step: float, noise: float, threads: int):
    step_dir.mkdir(parents=True, exist_ok=True)
    cli("synth", "--scene", "two-basin", "--step", step, "--noise", noise,
        "--seed", seed, "--out-dir", step_dir)
    extent = f"0,0,{SCENE_CELLS * CELLSIZE:g},{SCENE_CELLS * CELLSIZE:g}"
    cli("costraster", "--polygons", step_dir / "polygons.txt",
        "--extent", extent, "--cellsize", CELLSIZE, "--out", step_dir / "cost.asc")
    cli("split", "--points", step_dir / "track.csv",
        "--mesh-cellsize", MESH_CELLSIZE, "--per-cell", 1, "--seed", seed,
        "--train-out", step_dir / "train.csv", "--valid-out", step_dir / "valid.csv")
    maes = {}
    for method in ("ipdw", "idw"):
        cli("interpolate", "--method", method, "--train", step_dir / "train.csv",
            "--cost", step_dir / "cost.asc", "--threads", threads,
            "--out", step_dir / f"pred_{method}.asc")
        cli("crossval", "--pred", step_dir / f"pred_{method}.asc",
            "--valid", step_dir / "valid.csv",
            "--out", step_dir / f"report_{method}.csv")
        maes[method] = read_error_report(step_dir / f"report_{method}.csv").mae
    return maes


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", type=Path, required=True)
    ap.add_argument("--steps", default="5,10,20,40",
                    help="comma-separated contrast steps")
    ap.add_argument("--noise-frac", type=float, default=0.05,
                    help="survey noise as a fraction of the step")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    return ap.parse_args()


def main():
    args = parse_args()
    steps = [float(s) for s in args.steps.split(",") if s.strip()]
    if not steps:
        raise SystemExit("no steps given")
    started = time.perf_counter()
    print(f"{'step':>6}  {'mae ipdw':>9}  {'mae idw':>9}  {'gap':>7}")
    for step in steps:
        maes = run_step(args.out_dir / f"step_{step:g}", args.seed, step,
                        args.noise_frac * step, args.threads)
        gap = maes["idw"] - maes["ipdw"]
        print(f"{step:>6g}  {maes['ipdw']:>9.4f}  {maes['idw']:>9.4f}  {gap:>7.4f}")
    elapsed = time.perf_counter() - started
    print(f"artifacts in {args.out_dir}  ({elapsed:.1f} s)")


if __name__ == "__main__":
    main()
