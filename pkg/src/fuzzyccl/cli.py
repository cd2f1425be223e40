"""Command-line front end.

Subcommands: ``complete``, ``analyze``, ``optimize``, ``gen``.

Exit codes: 0 success, 1 validation or input error, 2 a relation cannot be
completed, 3 ``optimize`` stopped without reaching gamma (the best panel
found is still written).
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import fields, replace

from .annealer import (
    SAParams,
    Termination,
    anneal_restarts,
    experts_without_changes,
    suggest_changes,
)
from .completion import complete_panel
from .errors import FPRError, Unestimable
from .fpr import WeightConfig
from .generate import generate_panel
from .io import PanelDocument, dumps, read_panel, write_json
from .metrics import analyze_panel

log = logging.getLogger("fuzzyccl")

EXIT_OK, EXIT_INVALID, EXIT_UNESTIMABLE, EXIT_NOT_REACHED = 0, 1, 2, 3
DEFAULT_SEED = 7
DEFAULT_REPORT_EPS = 0.005

_SA_FLAGS = [f for f in fields(SAParams) if f.name != "seed"]


def _sa_type(f):
    if f.name == "temp0":
        return float
    return {"float": float, "int": int}.get(str(f.type), float)


def _weights(doc: PanelDocument, args) -> WeightConfig:
    w = dict(doc.weights or {})
    if getattr(args, "delta", None) is not None:
        w["delta"] = args.delta
    if getattr(args, "gamma", None) is not None:
        w["gamma"] = args.gamma
    return WeightConfig(**w)


def _sa_params(doc: PanelDocument, args) -> SAParams:
    p = SAParams.from_mapping(dict(doc.sa or {}))
    overrides = {f.name: getattr(args, f"sa_{f.name}") for f in _SA_FLAGS
                 if getattr(args, f"sa_{f.name}", None) is not None}
    seed = args.seed if args.seed is not None else (doc.sa or {}).get("seed", DEFAULT_SEED)
    return replace(p, seed=seed, **overrides)


def _emit(data: dict, out) -> None:
    if out:
        write_json(out, data)
    else:
        sys.stdout.write(dumps(data))


def _summary(label: str, report) -> None:
    cls = ", ".join(f"{v:.2f}" for v in report.per_expert_cl)
    log.info("%s: CL per expert [%s], global CL %.3f, CR %.3f, CCL %.3f (delta=%.2f)",
             label, cls, report.global_cl, report.cr, report.ccl, report.weights.delta)


def cmd_complete(args) -> int:
    doc = read_panel(args.input)
    panel = complete_panel(doc.to_panel())
    out = PanelDocument.from_panel(panel)
    out.weights, out.sa = doc.weights, doc.sa
    _emit(out.to_dict(), args.out)
    log.info("completed %d expert relation(s) over %d alternatives", panel.m, panel.n)
    return EXIT_OK


def cmd_analyze(args) -> int:
    doc = read_panel(args.input)
    weights = _weights(doc, args)
    report = analyze_panel(complete_panel(doc.to_panel()), weights)
    _emit(report.to_dict(), args.out)
    _summary("analysis", report)
    return EXIT_OK


def _trace_rows(result):
    def num(x):
        return None if x != x else x
    return [[t.trial, num(t.temperature), t.current_cost, t.best_cost] for t in result.trace]


def cmd_optimize(args) -> int:
    doc = read_panel(args.input)
    weights = _weights(doc, args)
    params = _sa_params(doc, args)
    panel = complete_panel(doc.to_panel())
    initial = analyze_panel(panel, weights)
    _summary("initial", initial)

    best, runs = anneal_restarts(panel, weights, params, args.restarts)
    final = analyze_panel(best.best_panel, weights)
    changes = suggest_changes(panel, best.best_panel, args.report_eps)
    ids = panel.expert_ids

    report = final.to_dict()
    report.update({
        "initial": initial.to_dict(),
        "best_ccl": best.best_ccl,
        "best_cost": best.best_cost,
        "gamma": weights.gamma,
        "termination": best.termination.value,
        "trials_used": best.trials_used,
        "seed": best.params.seed,
        "temp0": None if best.temp0 != best.temp0 else best.temp0,
        "params": best.params.to_dict(),
        "suggestions": [{"expert": ids[c.expert], "expert_index": c.expert,
                         "cell": list(c.cell), "from": c.original, "to": c.suggested}
                        for c in changes],
        "experts_unchanged": experts_without_changes(panel, changes),
        "restarts": [{"seed": r.params.seed, "termination": r.termination.value,
                      "best_ccl": r.best_ccl, "trials_used": r.trials_used} for r in runs],
        "best_panel": PanelDocument.from_panel(best.best_panel).to_dict(),
    })
    report["rendered"]["best_ccl"] = round(best.best_ccl, 2)
    if args.trace:
        report["trace"] = _trace_rows(best)
    _emit(report, args.out)

    _summary("optimized", final)
    log.info("termination %s after %d trial(s); %d suggested change(s)",
             best.termination.value, best.trials_used, len(changes))
    for c in changes:
        log.info("  %s cell (%d,%d): %.2f -> %.2f", ids[c.expert], c.cell[0] + 1,
                 c.cell[1] + 1, c.original, c.suggested)
    if best.termination is not Termination.THRESHOLD_REACHED:
        log.warning("gamma=%.3f not reached; best CCL %.4f", weights.gamma, best.best_ccl)
        return EXIT_NOT_REACHED
    return EXIT_OK


def cmd_gen(args) -> int:
    doc = generate_panel(args.n, args.m, args.missing, args.noise, args.seed)
    _emit(doc.to_dict(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fuzzyccl", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-q", "--quiet", action="store_true", help="suppress the summary on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complete", parents=[common], help="estimate missing preference degrees")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("analyze", parents=[common], help="consistency, consensus and CCL of a panel")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--delta", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("optimize", parents=[common], help="raise CCL above gamma by simulated annealing")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--delta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--report-eps", type=float, default=DEFAULT_REPORT_EPS,
                   help="minimum |change| for a cell to be suggested")
    p.add_argument("--trace", action="store_true", help="include the cost trace in the report")
    for f in _SA_FLAGS:
        flag = "--sa-" + f.name.replace("_", "-")
        if f.name == "enforce_reciprocity":
            p.add_argument(flag, dest=f"sa_{f.name}", action="store_const", const=True)
        else:
            p.add_argument(flag, dest=f"sa_{f.name}", type=_sa_type(f))
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("gen", parents=[common], help="generate a synthetic panel")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--missing", type=float, default=0.0)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return ap


def dispatch(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    # rebind on every call so a replaced sys.stderr (tests, embedding) is honoured
    for old in list(log.handlers):
        log.removeHandler(old)
    h = logging.StreamHandler(sys.stderr)
    h.setFormatter(logging.Formatter("%(message)s"))
    log.addHandler(h)
    log.propagate = False
    log.setLevel(logging.WARNING if args.quiet else logging.INFO)
    try:
        return args.func(args)
    except Unestimable as exc:
        log.error("error: Unestimable: %s", exc)
        return EXIT_UNESTIMABLE
    except (FPRError, OSError) as exc:
        log.error("error: %s: %s", type(exc).__name__, exc)
        return EXIT_INVALID


def main() -> None:
    sys.exit(dispatch())
