"""JSON panel documents.

A panel file looks like::

    {"alternatives": ["x1", "x2", "x3"],
     "experts": [{"id": "e1", "matrix": [[null, 0.7, null], ...]}, ...],
     "weights": {"delta": 0.65, "gamma": 0.89},
     "sa": {"tempfactor": 0.95, ...}}

Missing cells are JSON ``null``; the diagonal may be ``null`` or 0.5.
``weights`` and ``sa`` are optional.
"""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .errors import DimensionMismatch, FPRError
from .fpr import CompleteFPR, ExpertPanel, WeightConfig, validate_incomplete


class DocumentError(FPRError):
    pass


@dataclass
class PanelDocument:
    alternatives: list[str]
    experts: list[dict[str, Any]]
    weights: dict[str, float] | None = None
    sa: dict[str, Any] | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "PanelDocument":
        if not isinstance(data, dict):
            raise DocumentError("panel document must be a JSON object")
        try:
            alts = [str(a) for a in data["alternatives"]]
            experts = [{"id": str(e["id"]), "matrix": e["matrix"]} for e in data["experts"]]
        except (KeyError, TypeError) as exc:
            raise DocumentError(f"malformed panel document: {exc!r}") from exc
        n = len(alts)
        for e in experts:
            m = e["matrix"]
            if not isinstance(m, list) or len(m) != n or any(
                    not isinstance(r, list) or len(r) != n for r in m):
                raise DimensionMismatch(f"expert {e['id']!r}: matrix is not {n}x{n}")
        weights = data.get("weights")
        if weights is not None:
            WeightConfig(**weights)
        extra = {k: v for k, v in data.items()
                 if k not in ("alternatives", "experts", "weights", "sa")}
        return cls(alts, experts, weights, data.get("sa"), extra)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"alternatives": list(self.alternatives), "experts": self.experts}
        if self.weights is not None:
            out["weights"] = dict(self.weights)
        if self.sa is not None:
            out["sa"] = dict(self.sa)
        out.update(self.extra)
        return out

    def to_panel(self) -> ExpertPanel:
        """Validated panel; complete if no expert has missing cells."""
        rels = []
        for e in self.experts:
            try:
                rels.append(validate_incomplete(e["matrix"]))
            except FPRError as exc:
                raise type(exc)(f"expert {e['id']!r}: {exc}") from exc
        if all(r.is_complete for r in rels):
            rels = [CompleteFPR(r.cells) for r in rels]
        return ExpertPanel(tuple(rels), tuple(self.alternatives),
                           tuple(e["id"] for e in self.experts))

    @classmethod
    def from_panel(cls, panel: ExpertPanel, weights: WeightConfig | None = None,
                   sa: dict | None = None) -> "PanelDocument":
        experts = [{"id": eid, "matrix": rel.to_grid()}
                   for eid, rel in zip(panel.expert_ids, panel.relations)]
        w = None if weights is None else {"delta": weights.delta, "gamma": weights.gamma}
        return cls(list(panel.alternatives), experts, w, sa)


def bundled(name: str) -> Path:
    return Path(str(resources.files("fuzzyccl") / "data" / name))


def resolve_input(path: str | os.PathLike) -> Path:
    """``path`` itself, or the bundled fixture of that name when ``path`` is absent."""
    p = Path(path)
    if p.exists():
        return p
    b = bundled(p.name)
    if b.exists():
        return b
    raise FileNotFoundError(f"no such panel file: {path}")


def read_json(path) -> dict:
    with open(resolve_input(path), encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: invalid JSON ({exc})") from exc


def read_panel(path) -> PanelDocument:
    return PanelDocument.from_dict(read_json(path))


def _default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def dumps(data: dict) -> str:
    return json.dumps(data, indent=2, default=_default, allow_nan=False) + "\n"


def write_json(path, data: dict) -> None:
    """Atomic write: temp file in the target directory, then rename."""
    path = Path(path)
    text = dumps(data)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_panel(path, doc: PanelDocument) -> None:
    write_json(path, doc.to_dict())
