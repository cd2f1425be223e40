"""Preference-relation types and structural predicates.

Relations are stored as read-only ``float64`` arrays. Missing cells of an
incomplete relation are ``NaN``; the diagonal is always stored as 0.5.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DiagonalConflict,
    DimensionMismatch,
    EmptyRelation,
    FPRError,
    NonSquareGrid,
    OutOfRangeValue,
    TooFewAlternatives,
    TooFewExperts,
)

INDIFFERENCE = 0.5


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


def _to_array(raw) -> np.ndarray:
    if isinstance(raw, np.ndarray):
        a = np.array(raw, dtype=float, copy=True)
    else:
        rows = [list(r) for r in raw]
        if not rows or any(len(r) != len(rows) for r in rows):
            raise NonSquareGrid(f"grid must be square, got row lengths {[len(r) for r in rows]}")
        a = np.array([[np.nan if v is None else float(v) for v in r] for r in rows], dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquareGrid(f"grid must be square, got shape {a.shape}")
    return a


def _check_values(a: np.ndarray) -> None:
    n = a.shape[0]
    if n < 3:
        raise TooFewAlternatives(f"need at least 3 alternatives, got {n}")
    known = ~np.isnan(a)
    bad = known & ((a < 0.0) | (a > 1.0) | ~np.isfinite(a))
    if bad.any():
        i, k = np.argwhere(bad)[0]
        raise OutOfRangeValue(f"cell ({i}, {k}) = {a[i, k]!r} outside [0, 1]")
    diag = np.diag(a)
    given = ~np.isnan(diag)
    if (given & (diag != INDIFFERENCE)).any():
        i = int(np.argmax(given & (diag != INDIFFERENCE)))
        raise DiagonalConflict(f"diagonal cell ({i}, {i}) = {diag[i]!r}, expected 0.5")


@dataclass(frozen=True, eq=False)
class IncompleteFPR:
    """Fuzzy preference relation whose membership function may be partial."""

    cells: np.ndarray

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    @property
    def known_mask(self) -> np.ndarray:
        return ~np.isnan(self.cells)

    @property
    def n_missing(self) -> int:
        return int(np.isnan(self.cells).sum())

    @property
    def is_complete(self) -> bool:
        return self.n_missing == 0

    def to_grid(self) -> list[list[float | None]]:
        return [[None if np.isnan(v) else float(v) for v in row] for row in self.cells]

    def __eq__(self, other) -> bool:
        if not isinstance(other, IncompleteFPR):
            return NotImplemented
        return np.array_equal(self.cells, other.cells, equal_nan=True)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class CompleteFPR:
    cells: np.ndarray

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    def to_grid(self) -> list[list[float]]:
        return self.cells.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, CompleteFPR):
            return NotImplemented
        return np.array_equal(self.cells, other.cells)

    __hash__ = None


def validate_incomplete(raw) -> IncompleteFPR:
    """Build an :class:`IncompleteFPR` from a square grid.

    ``raw`` is a nested sequence with ``None`` for missing cells, or an array
    with ``NaN`` for missing cells. The diagonal may be missing or 0.5.
    """
    a = _to_array(raw)
    _check_values(a)
    np.fill_diagonal(a, INDIFFERENCE)
    off = ~np.eye(a.shape[0], dtype=bool)
    if not (~np.isnan(a) & off).any():
        raise EmptyRelation("relation has no known off-diagonal cells")
    return IncompleteFPR(_frozen(a))


def validate_complete(raw) -> CompleteFPR:
    a = _to_array(raw)
    _check_values(a)
    np.fill_diagonal(a, INDIFFERENCE)
    if np.isnan(a).any():
        i, k = np.argwhere(np.isnan(a))[0]
        raise FPRError(f"cell ({i}, {k}) is missing; relation is not complete")
    return CompleteFPR(_frozen(a))


def is_additively_consistent(fpr: CompleteFPR, tol: float = 1e-9) -> bool:
    """True iff p_ik == p_ij + p_jk - 0.5 (within ``tol``) for all distinct i, j, k."""
    a = fpr.cells
    n = a.shape[0]
    # dev[i, j, k] = p_ij + p_jk - 0.5 - p_ik
    dev = a[:, :, None] + a[None, :, :] - INDIFFERENCE - a[:, None, :]
    idx = np.arange(n)
    distinct = (
        (idx[:, None, None] != idx[None, :, None])
        & (idx[None, :, None] != idx[None, None, :])
        & (idx[:, None, None] != idx[None, None, :])
    )
    return bool(np.all(np.abs(dev[distinct]) <= tol))


def is_reciprocal(fpr: CompleteFPR | IncompleteFPR, tol: float = 1e-9) -> bool:
    """p_ij + p_ji == 1 on every pair where both cells are known."""
    s = fpr.cells + fpr.cells.T
    known = ~np.isnan(s)
    return bool(np.all(np.abs(s[known] - 1.0) <= tol))


@dataclass(frozen=True)
class WeightConfig:
    """Consensus weight ``delta`` and CCL acceptance threshold ``gamma``."""

    delta: float = 0.65
    gamma: float = 0.89

    def __post_init__(self):
        for name in ("delta", "gamma"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise OutOfRangeValue(f"{name}={v!r} outside [0, 1]")


@dataclass(frozen=True, eq=False)
class ExpertPanel:
    """m expert relations over the same n alternatives.

    Relations are either all :class:`IncompleteFPR` or all :class:`CompleteFPR`.
    """

    relations: tuple
    alternatives: tuple[str, ...] = ()
    expert_ids: tuple[str, ...] = ()
    _stack: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        rels = tuple(self.relations)
        object.__setattr__(self, "relations", rels)
        if len(rels) < 2:
            raise TooFewExperts(f"need at least 2 experts, got {len(rels)}")
        kinds = {type(r) for r in rels}
        if len(kinds) != 1 or not kinds <= {IncompleteFPR, CompleteFPR}:
            raise FPRError("relations must be all IncompleteFPR or all CompleteFPR")
        n = rels[0].n
        if any(r.n != n for r in rels):
            raise DimensionMismatch(f"relations disagree on n: {[r.n for r in rels]}")
        alts = tuple(self.alternatives) or tuple(f"x{i + 1}" for i in range(n))
        if len(alts) != n:
            raise DimensionMismatch(f"{len(alts)} alternative labels for n={n}")
        ids = tuple(self.expert_ids) or tuple(f"e{h + 1}" for h in range(len(rels)))
        if len(ids) != len(rels):
            raise DimensionMismatch(f"{len(ids)} expert ids for m={len(rels)}")
        object.__setattr__(self, "alternatives", alts)
        object.__setattr__(self, "expert_ids", ids)
        object.__setattr__(self, "_stack", _frozen(np.stack([r.cells for r in rels])))

    @property
    def m(self) -> int:
        return len(self.relations)

    @property
    def n(self) -> int:
        return self.relations[0].n

    @property
    def is_complete(self) -> bool:
        return isinstance(self.relations[0], CompleteFPR)

    def stack(self) -> np.ndarray:
        """Read-only (m, n, n) array of all relations."""
        return self._stack

    @classmethod
    def from_stack(cls, stack: np.ndarray, alternatives: Sequence[str] = (),
                   expert_ids: Sequence[str] = ()) -> "ExpertPanel":
        """Complete panel from an (m, n, n) array; values are trusted to be valid."""
        rels = tuple(CompleteFPR(_frozen(a)) for a in stack)
        return cls(rels, tuple(alternatives), tuple(expert_ids))

    def with_relations(self, relations) -> "ExpertPanel":
        return ExpertPanel(tuple(relations), self.alternatives, self.expert_ids)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExpertPanel):
            return NotImplemented
        return (self.alternatives == other.alternatives
                and self.expert_ids == other.expert_ids
                and type(self.relations[0]) is type(other.relations[0])
                and self._stack.shape == other._stack.shape
                and np.array_equal(self._stack, other._stack, equal_nan=True))

    __hash__ = None
