"""Full pipeline on the bundled four-expert panel: complete, measure, anneal.

    python scripts/run_worked_example.py [--seed 7] [--delta 0.65] [--gamma 0.89]
"""
import argparse

import numpy as np

from fuzzyccl import SAParams, WeightConfig, analyze_panel, anneal, complete_panel, suggest_changes
from fuzzyccl.io import bundled, read_panel


def show(label, panel):
    print(label)
    for eid, rel in zip(panel.expert_ids, panel.relations):
        rows = ["  ".join("  - " if i == k else f"{v:.2f}" for k, v in enumerate(row))
                for i, row in enumerate(rel.cells)]
        print(f"  {eid}: " + "\n      ".join(rows))


def summary(label, rep):
    print(f"{label}: CL per expert {np.round(rep.per_expert_cl, 3).tolist()}  "
          f"CL={rep.global_cl:.3f}  CR={rep.cr:.3f}  CCL={rep.ccl:.3f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--delta", type=float, default=0.65)
    ap.add_argument("--gamma", type=float, default=0.89)
    args = ap.parse_args()

    weights = WeightConfig(args.delta, args.gamma)
    panel = complete_panel(read_panel(bundled("paper_sec4.json")).to_panel())
    show("completed relations", panel)
    before = analyze_panel(panel, weights)
    summary("before", before)

    res = anneal(panel, weights, SAParams(seed=args.seed))
    after = analyze_panel(res.best_panel, weights)
    show("suggested relations", res.best_panel)
    summary("after", after)
    print(f"termination={res.termination.value} trials={res.trials_used} temp0={res.temp0:.2e}")
    changes = suggest_changes(panel, res.best_panel, 0.05)
    print(f"{len(changes)} cell(s) moved by more than 0.05")


if __name__ == "__main__":
    main()
