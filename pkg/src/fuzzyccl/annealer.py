"""Simulated annealing over expert panels, minimizing cost = 1 - CCL.

The search state is the (m, n, n) stack of completed relations. A move
perturbs one off-diagonal cell of one expert. Each temperature stage runs
``sizefactor * N`` trials, where N = m * n * (n - 1) is the number of
modifiable cells. Cooling is fast when the stage acceptance ratio is at
least ``tcent`` and slow otherwise. The search freezes after ``frzlim``
consecutive stages with acceptance below ``minpercent``, and stops early
once the best CCL reaches ``gamma``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, replace
from enum import Enum
from typing import Optional

import numpy as np

from .errors import InvalidParams, ShapeMismatch
from .fpr import ExpertPanel, WeightConfig
from .metrics import stack_ccl

ADAPTIVE_SAMPLES = 100
ADAPTIVE_ACCEPTANCE = 0.4


class Termination(str, Enum):
    THRESHOLD_REACHED = "ThresholdReached"
    FROZEN = "Frozen"
    TRIAL_CAP_HIT = "TrialCapHit"


@dataclass(frozen=True)
class SAParams:
    temp0: Optional[float] = None  # None: adaptive, from sampled uphill deltas
    fastfactor: float = 0.8
    tempfactor: float = 0.95
    frzlim: int = 5
    sizefactor: int = 16
    minpercent: float = 0.02
    tcent: float = 0.5
    move_width: float = 0.2
    value_grid: float = 0.01
    seed: int = 0
    max_trials: int = 1_000_000
    enforce_reciprocity: bool = False

    def __post_init__(self):
        def need(ok, msg):
            if not ok:
                raise InvalidParams(msg)

        need(self.temp0 is None or self.temp0 > 0, f"temp0 must be positive, got {self.temp0}")
        for name in ("fastfactor", "tempfactor", "minpercent", "tcent"):
            v = getattr(self, name)
            need(0.0 < v < 1.0, f"{name} must lie in (0, 1), got {v}")
        need(self.fastfactor < self.tempfactor,
             f"fastfactor ({self.fastfactor}) must be below tempfactor ({self.tempfactor})")
        need(self.minpercent < self.tcent,
             f"minpercent ({self.minpercent}) must be below tcent ({self.tcent})")
        need(int(self.frzlim) == self.frzlim and self.frzlim >= 1, f"frzlim must be a positive integer")
        need(int(self.sizefactor) == self.sizefactor and self.sizefactor >= 1,
             "sizefactor must be a positive integer")
        need(0.0 < self.move_width <= 1.0, f"move_width must lie in (0, 1], got {self.move_width}")
        need(0.0 <= self.value_grid < 1.0, f"value_grid must lie in [0, 1), got {self.value_grid}")
        need(int(self.max_trials) == self.max_trials and self.max_trials >= 1,
             "max_trials must be a positive integer")

    @classmethod
    def from_mapping(cls, data: dict) -> "SAParams":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise InvalidParams(f"unknown SA parameter(s): {sorted(extra)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class TracePoint:
    trial: int
    temperature: float
    current_cost: float
    best_cost: float


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    best_panel: ExpertPanel
    best_ccl: float
    best_cost: float
    initial_cost: float
    trace: tuple[TracePoint, ...]
    termination: Termination
    trials_used: int
    temp0: float
    params: SAParams = field(repr=False)


@dataclass(frozen=True)
class SuggestedChange:
    expert: int
    cell: tuple[int, int]
    original: float
    suggested: float

    @property
    def delta(self) -> float:
        return self.suggested - self.original


def cost(panel: ExpertPanel, weights: WeightConfig) -> float:
    if not panel.is_complete:
        raise TypeError("cost is defined on completed panels")
    return 1.0 - stack_ccl(panel.stack(), weights.delta)


def _perturb(stack: np.ndarray, rng: np.random.Generator, params: SAParams):
    """Copy of ``stack`` with one off-diagonal cell moved; returns (new, (h, i, k))."""
    m, n, _ = stack.shape
    h = int(rng.integers(m))
    flat = int(rng.integers(n * (n - 1)))
    i, r = divmod(flat, n - 1)
    k = r if r < i else r + 1
    u = rng.uniform(-params.move_width, params.move_width)
    v = min(1.0, max(0.0, stack[h, i, k] + u))
    if params.value_grid > 0:
        v = round(v / params.value_grid) * params.value_grid
        v = min(1.0, max(0.0, v))
    out = stack.copy()
    out[h, i, k] = v
    if params.enforce_reciprocity:
        out[h, k, i] = 1.0 - v
    return out, (h, i, k)


def neighbor(panel: ExpertPanel, rng: np.random.Generator, params: SAParams) -> ExpertPanel:
    """Random neighbour differing from ``panel`` in one cell of one expert."""
    new, _ = _perturb(np.asarray(panel.stack()), rng, params)
    return ExpertPanel.from_stack(new, panel.alternatives, panel.expert_ids)


def _adaptive_temp0(stack, c0, delta, rng, params) -> float:
    ups = []
    for _ in range(ADAPTIVE_SAMPLES):
        cand, _ = _perturb(stack, rng, params)
        d = (1.0 - stack_ccl(cand, delta)) - c0
        if d > 0:
            ups.append(d)
    if not ups:
        return 1e-3
    return float(np.mean(ups)) / math.log(1.0 / ADAPTIVE_ACCEPTANCE)


def anneal(panel0: ExpertPanel, weights: WeightConfig, params: SAParams | None = None) -> OptimizationResult:
    params = params or SAParams()
    if not panel0.is_complete:
        raise TypeError("anneal needs a completed panel")
    delta, gamma = weights.delta, weights.gamma
    rng = np.random.default_rng(params.seed)

    s = np.array(panel0.stack(), dtype=float)
    c = 1.0 - stack_ccl(s, delta)
    c0 = c
    best, best_c = s, c
    trace = [TracePoint(0, float("nan"), c, best_c)]

    def result(term, trials, temp0):
        if best is s and trials == 0:
            bp = panel0
        else:
            bp = ExpertPanel.from_stack(best, panel0.alternatives, panel0.expert_ids)
        return OptimizationResult(bp, 1.0 - best_c, best_c, c0, tuple(trace), term,
                                  trials, temp0, params)

    if 1.0 - best_c >= gamma:
        return result(Termination.THRESHOLD_REACHED, 0, float("nan"))

    temp = params.temp0 if params.temp0 is not None else _adaptive_temp0(s, c, delta, rng, params)
    temp0 = temp
    trace[0] = TracePoint(0, temp, c, best_c)
    m, n, _ = s.shape
    stage_len = params.sizefactor * m * n * (n - 1)
    total = 0
    freezecount = 0
    while freezecount < params.frzlim:
        changes = trials = 0
        while trials < stage_len:
            if total >= params.max_trials:
                trace.append(TracePoint(total, temp, c, best_c))
                return result(Termination.TRIAL_CAP_HIT, total, temp0)
            trials += 1
            total += 1
            cand, _ = _perturb(s, rng, params)
            cc = 1.0 - stack_ccl(cand, delta)
            d = cc - c
            if cc < best_c:
                best, best_c = cand, cc
                trace.append(TracePoint(total, temp, cc, best_c))
                if 1.0 - best_c >= gamma:
                    return result(Termination.THRESHOLD_REACHED, total, temp0)
            if d <= 0 or rng.random() <= math.exp(-d / temp):
                changes += 1
                s, c = cand, cc
        ratio = changes / trials
        trace.append(TracePoint(total, temp, c, best_c))
        temp *= params.fastfactor if ratio >= params.tcent else params.tempfactor
        freezecount = freezecount + 1 if ratio < params.minpercent else 0
    return result(Termination.FROZEN, total, temp0)


def anneal_restarts(panel0: ExpertPanel, weights: WeightConfig, params: SAParams | None = None,
                    restarts: int = 1) -> tuple[OptimizationResult, list[OptimizationResult]]:
    """Independent runs with seeds ``seed, seed+1, ...``; returns (best, all)."""
    params = params or SAParams()
    if restarts < 1:
        raise InvalidParams(f"restarts must be >= 1, got {restarts}")
    runs = [anneal(panel0, weights, replace(params, seed=params.seed + r)) for r in range(restarts)]
    best = min(runs, key=lambda r: r.best_cost)
    return best, runs


def suggest_changes(original: ExpertPanel, optimized: ExpertPanel,
                    eps_report: float = 0.005) -> list[SuggestedChange]:
    """Cells that moved by more than ``eps_report``.

    Grouped by expert (in panel order), largest absolute change first within
    each expert.
    """
    a, b = original.stack(), optimized.stack()
    if a.shape != b.shape:
        raise ShapeMismatch(f"panel shapes differ: {a.shape} vs {b.shape}")
    out = []
    for h in range(a.shape[0]):
        diff = np.abs(b[h] - a[h])
        cells = [(i, k) for i, k in zip(*np.nonzero(diff > eps_report)) if i != k]
        cells.sort(key=lambda ik: (-diff[ik], ik))
        out.extend(SuggestedChange(h, (int(i), int(k)), float(a[h, i, k]), float(b[h, i, k]))
                   for i, k in cells)
    return out


def experts_without_changes(panel: ExpertPanel, changes: list[SuggestedChange]) -> list[str]:
    touched = {c.expert for c in changes}
    return [e for h, e in enumerate(panel.expert_ids) if h not in touched]
