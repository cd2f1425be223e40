"""Synthetic panels for property tests and experiments."""
from __future__ import annotations

import numpy as np

from .completion import is_completable
from .errors import InfeasibleMask, InvalidParams
from .io import PanelDocument


def consistent_relation(u: np.ndarray) -> np.ndarray:
    """p_ik = 0.5 + u_i - u_k, additively consistent when spread(u) <= 0.5."""
    return np.clip(0.5 + (u[:, None] - u[None, :]), 0.0, 1.0)


def blank_cells(known: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    """Remove ``count`` off-diagonal cells from ``known`` keeping it completable.

    Cells are tried in random order; a removal that would leave the relation
    impossible to complete is undone and the next cell is tried.
    """
    known = known.copy()
    n = known.shape[0]
    cells = [(i, k) for i in range(n) for k in range(n) if i != k]
    removed = 0
    for idx in rng.permutation(len(cells)):
        if removed == count:
            break
        i, k = cells[idx]
        known[i, k] = False
        if is_completable(known):
            removed += 1
        else:
            known[i, k] = True
    if removed < count:
        raise InfeasibleMask(f"could only blank {removed} of {count} cells")
    return known


def generate_panel(n: int, m: int, missing_fraction: float = 0.0, noise: float = 0.0,
                   seed: int = 0) -> PanelDocument:
    if n < 3 or m < 2:
        raise InvalidParams(f"need n >= 3 and m >= 2, got n={n}, m={m}")
    if not 0.0 <= missing_fraction < 1.0:
        raise InvalidParams(f"missing_fraction must lie in [0, 1), got {missing_fraction}")
    if noise < 0:
        raise InvalidParams(f"noise must be >= 0, got {noise}")
    rng = np.random.default_rng(seed)
    target = int(round(missing_fraction * n * (n - 1)))
    # values for every expert are drawn before any blanking, so the same seed
    # yields the same underlying relations whatever missing_fraction is
    values = []
    for _ in range(m):
        # u in [0, 0.5] keeps every 0.5 + u_i - u_k inside [0, 1] without clipping
        p = consistent_relation(rng.uniform(0.0, 0.5, size=n))
        if noise > 0:
            p = np.clip(p + rng.uniform(-noise, noise, size=(n, n)), 0.0, 1.0)
        np.fill_diagonal(p, 0.5)
        values.append(p)
    experts = []
    for h, p in enumerate(values):
        known = blank_cells(np.ones((n, n), dtype=bool), target, rng)
        grid = [[float(p[i, k]) if known[i, k] else None for k in range(n)] for i in range(n)]
        experts.append({"id": f"e{h + 1}", "matrix": grid})
    return PanelDocument(
        [f"x{i + 1}" for i in range(n)], experts,
        extra={"generator": {"n": n, "m": m, "missing_fraction": missing_fraction,
                             "noise": noise, "seed": seed}},
    )
