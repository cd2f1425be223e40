"""Threshold attainment of the annealer across seeds.

    python scripts/seed_sweep.py --seeds 100 [--gamma 0.89] [--csv out.csv]

Prints one row per seed and a closing summary line.
"""
import argparse
import csv
import sys
import time

from fuzzyccl import SAParams, Termination, WeightConfig, analyze_panel, anneal, complete_panel
from fuzzyccl.io import read_panel


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--in", dest="input", default="paper_sec4.json")
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--delta", type=float, default=0.65)
    ap.add_argument("--gamma", type=float, default=0.89)
    ap.add_argument("--csv")
    args = ap.parse_args()

    weights = WeightConfig(args.delta, args.gamma)
    panel = complete_panel(read_panel(args.input).to_panel())
    start = analyze_panel(panel, weights)

    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    w = csv.writer(out)
    w.writerow(["seed", "termination", "trials", "best_ccl", "cl", "cr", "seconds"])
    hits, secs = 0, []
    for seed in range(args.seeds):
        t0 = time.perf_counter()
        res = anneal(panel, weights, SAParams(seed=seed))
        dt = time.perf_counter() - t0
        rep = analyze_panel(res.best_panel, weights)
        hits += res.termination is Termination.THRESHOLD_REACHED
        secs.append(dt)
        w.writerow([seed, res.termination.value, res.trials_used, f"{res.best_ccl:.4f}",
                    f"{rep.global_cl:.4f}", f"{rep.cr:.4f}", f"{dt:.3f}"])
    if args.csv:
        out.close()
    print(f"start CL={start.global_cl:.3f} CR={start.cr:.3f} CCL={start.ccl:.3f}; "
          f"reached gamma={args.gamma} in {hits}/{args.seeds} runs; "
          f"mean {sum(secs) / len(secs):.2f}s, max {max(secs):.2f}s", file=sys.stderr)


if __name__ == "__main__":
    main()
