"""Consistency, consensus and the combined consistency/consensus level (CCL).

All array helpers accept a single (n, n) relation or a stacked (..., n, n)
batch; the annealer evaluates whole panels through :func:`stack_ccl`.
Diagonal cells never enter a sum.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .completion import _intermediary_mask
from .errors import DiagonalPair, DimensionMismatch, EmptyList, IndexOutOfRange, TooFewExperts
from .fpr import CompleteFPR, ExpertPanel, WeightConfig


@dataclass(frozen=True, eq=False)
class ConsistencyReport:
    pair_errors: np.ndarray
    pair_levels: np.ndarray
    relation_level: float

    def to_dict(self) -> dict:
        return {
            "pair_errors": _offdiag_grid(self.pair_errors),
            "pair_levels": _offdiag_grid(self.pair_levels),
            "relation_level": self.relation_level,
        }


@dataclass(frozen=True, eq=False)
class ConsensusReport:
    collective_sm: np.ndarray
    pair_consensus: np.ndarray
    alternative_consensus: np.ndarray
    relation_consensus: float


@dataclass(frozen=True, eq=False)
class AnalysisReport:
    consistency: tuple[ConsistencyReport, ...]
    global_cl: float
    consensus: ConsensusReport
    ccl: float
    weights: WeightConfig

    @property
    def per_expert_cl(self) -> list[float]:
        return [c.relation_level for c in self.consistency]

    @property
    def cr(self) -> float:
        return self.consensus.relation_consensus

    def to_dict(self) -> dict:
        full = {
            "per_expert_cl": self.per_expert_cl,
            "global_cl": self.global_cl,
            "collective_sm": _offdiag_grid(self.consensus.collective_sm),
            "ca": self.consensus.alternative_consensus.tolist(),
            "cr": self.cr,
            "ccl": self.ccl,
        }
        rendered = {
            "per_expert_cl": [round(v, 2) for v in full["per_expert_cl"]],
            "global_cl": round(self.global_cl, 2),
            "collective_sm": [[None if v is None else round(v, 2) for v in row]
                              for row in full["collective_sm"]],
            "ca": [round(v, 2) for v in full["ca"]],
            "cr": round(self.cr, 2),
            "ccl": round(self.ccl, 2),
        }
        return {**full, "delta": self.weights.delta, "rendered": rendered}


def _offdiag_grid(a: np.ndarray) -> list[list[float | None]]:
    return [[None if i == k else float(a[i, k]) for k in range(a.shape[1])]
            for i in range(a.shape[0])]


def _offdiag(n: int) -> np.ndarray:
    return ~np.eye(n, dtype=bool)


def pair_error_grid(a: np.ndarray) -> np.ndarray:
    """Consistency error for every cell of (..., n, n) relations; diagonal is 0.

    For each l in {1, 2, 3}, the mean absolute deviation of the family-l
    estimates from p_ik over the n-2 intermediaries; the three means are
    averaged and scaled by 2/3 so the result lies in [0, 1].
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[-1]
    at = np.swapaxes(a, -1, -2)
    a_ij = a[..., :, None, :]
    a_jk = at[..., None, :, :]
    a_ji = at[..., :, None, :]
    a_kj = a[..., None, :, :]
    a_ik = a[..., :, :, None]
    dev = (np.abs(a_ij + a_jk - 0.5 - a_ik)
           + np.abs(a_jk - a_ji + 0.5 - a_ik)
           + np.abs(a_ij - a_kj + 0.5 - a_ik))
    dev = np.where(_intermediary_mask(n), dev, 0.0).sum(axis=-1)
    dev = np.where(_offdiag(n), dev, 0.0)
    return (2.0 / 3.0) * dev / (3.0 * (n - 2))


def relation_levels(a: np.ndarray) -> np.ndarray:
    """CL_p of each relation in a (..., n, n) batch."""
    n = np.shape(a)[-1]
    err = pair_error_grid(a)
    return 1.0 - err.sum(axis=(-1, -2)) / (n * n - n)


def consistency_pair(fpr: CompleteFPR, i: int, k: int) -> tuple[float, float]:
    """(error, level) for a single preference degree."""
    n = fpr.n
    if not (0 <= i < n and 0 <= k < n):
        raise IndexOutOfRange(f"pair ({i}, {k}) outside 0..{n - 1}")
    if i == k:
        raise DiagonalPair(f"pair ({i}, {k}) is on the diagonal")
    eps = float(pair_error_grid(fpr.cells)[i, k])
    return eps, 1.0 - eps


def consistency_level(fpr: CompleteFPR) -> ConsistencyReport:
    err = pair_error_grid(fpr.cells)
    levels = np.where(_offdiag(fpr.n), 1.0 - err, np.nan)
    err = np.where(_offdiag(fpr.n), err, np.nan)
    rel = float(np.nanmean(levels))
    for a in (err, levels):
        a.setflags(write=False)
    return ConsistencyReport(err, levels, rel)


def global_consistency(levels: Sequence[float]) -> float:
    levels = list(levels)
    if not levels:
        raise EmptyList("global consistency of an empty list")
    return float(np.mean(levels))


def pair_similarity(a: CompleteFPR, b: CompleteFPR) -> np.ndarray:
    """Cellwise 1 - |a - b|. The diagonal is 1 and carries no meaning."""
    if a.n != b.n:
        raise DimensionMismatch(f"n={a.n} vs n={b.n}")
    return 1.0 - np.abs(a.cells - b.cells)


def stack_similarity(stack: np.ndarray) -> np.ndarray:
    """Mean pairwise similarity over all unordered expert pairs of (m, n, n)."""
    m = stack.shape[0]
    if m < 2:
        raise TooFewExperts(f"need at least 2 experts, got {m}")
    h, l = np.triu_indices(m, k=1)
    return 1.0 - np.abs(stack[h] - stack[l]).mean(axis=0)


def collective_similarity(panel: ExpertPanel) -> np.ndarray:
    # each unordered pair h < l contributes once: m(m-1)/2 matrices
    if not panel.is_complete:
        raise TypeError("collective similarity needs a completed panel")
    return stack_similarity(panel.stack())


def consensus_degrees(sm: np.ndarray) -> ConsensusReport:
    sm = np.array(sm, dtype=float)
    n = sm.shape[0]
    off = _offdiag(n)
    cop = np.where(off, sm, np.nan)
    both = np.where(off, sm + sm.T, 0.0)
    ca = both.sum(axis=1) / (2 * (n - 1))
    cr = float(ca.mean())
    for a in (cop, ca):
        a.setflags(write=False)
    return ConsensusReport(cop, cop, ca, cr)


def ccl(cl: float, cr: float, weights: WeightConfig | float) -> float:
    delta = weights.delta if isinstance(weights, WeightConfig) else float(weights)
    return (1.0 - delta) * cl + delta * cr


def stack_ccl(stack: np.ndarray, delta: float) -> float:
    """CCL of an (m, n, n) panel in one vectorized pass."""
    n = stack.shape[-1]
    cl = float(relation_levels(stack).mean())
    sm = stack_similarity(stack)
    # the pair -> alternative -> relation roll-up reduces to the off-diagonal mean
    cr = float(sm[_offdiag(n)].mean())
    return (1.0 - delta) * cl + delta * cr


def analyze_panel(panel: ExpertPanel, weights: WeightConfig | None = None) -> AnalysisReport:
    weights = weights or WeightConfig()
    if not panel.is_complete:
        raise TypeError("analysis needs a completed panel; run complete_panel first")
    reports = tuple(consistency_level(r) for r in panel.relations)
    gcl = global_consistency([r.relation_level for r in reports])
    cons = consensus_degrees(collective_similarity(panel))
    return AnalysisReport(reports, gcl, cons, ccl(gcl, cons.relation_consensus, weights), weights)


def pairwise_similarities(panel: ExpertPanel) -> dict[tuple[int, int], np.ndarray]:
    """Every SM^{hl}, h < l, keyed by expert index pair."""
    return {(h, l): pair_similarity(panel.relations[h], panel.relations[l])
            for h, l in combinations(range(panel.m), 2)}
