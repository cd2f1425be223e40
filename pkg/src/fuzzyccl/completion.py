"""Estimation of missing preference degrees via additive consistency.

For a pair (i, k) and an intermediate alternative j there are three
estimators, each derived from p_ik = p_ij + p_jk - 0.5:

    family 1:  p_ij + p_jk - 0.5
    family 2:  p_jk - p_ji + 0.5
    family 3:  p_ij - p_kj + 0.5

A missing cell is filled with the mean of whichever estimators have all of
their source cells known, and the mean is clamped to [0, 1]. Filling runs in
synchronous rounds, so cells filled in one round only see values known before
that round and the result does not depend on enumeration order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DiagonalPair, IndexOutOfRange, Unestimable
from .fpr import CompleteFPR, IncompleteFPR, _frozen

FAMILIES = (1, 2, 3)


@dataclass(frozen=True)
class Estimate:
    family: int
    via: int
    value: float


@dataclass(frozen=True)
class EstimateBundle:
    pair: tuple[int, int]
    estimates: tuple[Estimate, ...]

    @property
    def values(self) -> list[float]:
        return [e.value for e in self.estimates]

    def mean(self) -> float:
        if not self.estimates:
            raise Unestimable(f"no estimator available for cell {self.pair}")
        return float(np.mean(self.values))

    def __len__(self) -> int:
        return len(self.estimates)


def _cells(fpr) -> np.ndarray:
    return fpr.cells if hasattr(fpr, "cells") else np.asarray(fpr, dtype=float)


def candidate_estimates(fpr, i: int, k: int) -> EstimateBundle:
    """All estimators for (i, k) whose source cells are currently known.

    ``fpr`` is an :class:`IncompleteFPR`, :class:`CompleteFPR` or a raw
    (n, n) array with ``NaN`` for missing cells. Values are not clamped.
    """
    a = _cells(fpr)
    n = a.shape[0]
    if not (0 <= i < n and 0 <= k < n):
        raise IndexOutOfRange(f"pair ({i}, {k}) outside 0..{n - 1}")
    if i == k:
        raise DiagonalPair(f"pair ({i}, {k}) is on the diagonal")
    known = ~np.isnan(a)
    out = []
    for j in range(n):
        if j == i or j == k:
            continue
        if known[i, j] and known[j, k]:
            out.append(Estimate(1, j, a[i, j] + a[j, k] - 0.5))
        if known[j, k] and known[j, i]:
            out.append(Estimate(2, j, a[j, k] - a[j, i] + 0.5))
        if known[i, j] and known[k, j]:
            out.append(Estimate(3, j, a[i, j] - a[k, j] + 0.5))
    return EstimateBundle((i, k), tuple(out))


def _intermediary_mask(n: int) -> np.ndarray:
    idx = np.arange(n)
    return (idx[None, None, :] != idx[:, None, None]) & (idx[None, None, :] != idx[None, :, None])


def estimate_grids(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sum and count of available raw estimates for every cell of ``a``.

    ``a`` is (n, n) with ``NaN`` for missing cells. Axis layout of the
    intermediate arrays is [i, k, j].
    """
    n = a.shape[0]
    at = a.T
    fams = np.stack([
        a[:, None, :] + at[None, :, :] - 0.5,   # p_ij + p_jk - 0.5
        at[None, :, :] - at[:, None, :] + 0.5,  # p_jk - p_ji + 0.5
        a[:, None, :] - a[None, :, :] + 0.5,    # p_ij - p_kj + 0.5
    ])
    usable = ~np.isnan(fams) & _intermediary_mask(n)[None]
    total = np.where(usable, fams, 0.0).sum(axis=(0, 3))
    count = usable.sum(axis=(0, 3))
    return total, count


def is_completable(known: np.ndarray) -> bool:
    """Whether round-by-round propagation from ``known`` fills every cell."""
    known = np.array(known, dtype=bool)
    np.fill_diagonal(known, True)
    while not known.all():
        _, count = estimate_grids(np.where(known, 0.5, np.nan))
        grow = ~known & (count > 0)
        if not grow.any():
            return False
        known |= grow
    return True


def complete(fpr: IncompleteFPR) -> CompleteFPR:
    """Fill every missing cell; known cells are never altered.

    Raises :class:`Unestimable` when a round makes no progress while cells
    are still missing.
    """
    a = np.array(fpr.cells, dtype=float)
    rounds = 0
    while True:
        missing = np.isnan(a)
        if not missing.any():
            break
        total, count = estimate_grids(a)
        fill = missing & (count > 0)
        if not fill.any():
            cells = [tuple(int(x) for x in c) for c in np.argwhere(missing)]
            raise Unestimable(
                f"{len(cells)} cell(s) cannot be estimated after {rounds} round(s): {cells}"
            )
        a[fill] = np.clip(total[fill] / count[fill], 0.0, 1.0)
        rounds += 1
    if rounds == 0 and isinstance(fpr, CompleteFPR):
        return fpr
    return CompleteFPR(_frozen(a))


def complete_panel(panel):
    """Complete every relation of an :class:`~fuzzyccl.fpr.ExpertPanel`."""
    if panel.is_complete:
        return panel
    return panel.with_relations(complete(r) for r in panel.relations)
