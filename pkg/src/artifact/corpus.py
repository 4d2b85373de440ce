"""Embedded corpus of example curves, keyed by label.

The corpus ships as ``corpus.csv`` (columns: label, a1, a2, a3, a4, a6,
note) and is resolved entirely offline.  Labels follow the usual
conductor-plus-class naming.  Where a note says "substitute", the stored
model is a curve verified to have the documented reduction invariants
(defect, conductor exponent, unit-part congruences) rather than a curve
confirmed to carry that exact label.
"""

from __future__ import annotations

import csv
from functools import lru_cache
from importlib import resources

from .weierstrass import WeierstrassModel

__all__ = ["corpus", "corpus_note", "resolve"]


@lru_cache(maxsize=1)
def _table() -> dict[str, tuple[tuple[int, int, int, int, int], str]]:
    out = {}
    with resources.files(__package__).joinpath("corpus.csv").open() as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            label, a1, a2, a3, a4, a6 = (c.strip() for c in row[:6])
            note = row[6].strip() if len(row) > 6 else ""
            out[label] = ((int(a1), int(a2), int(a3), int(a4), int(a6)), note)
    return out


def corpus() -> dict[str, tuple[int, int, int, int, int]]:
    """label -> a-invariants for every embedded curve."""
    return {k: v[0] for k, v in _table().items()}


def corpus_note(label: str) -> str:
    return _table()[label][1]


def resolve(spec: str) -> WeierstrassModel:
    """Turn a curve spec (corpus label or ``[a1,a2,a3,a4,a6]``) into a model."""
    spec = spec.strip()
    if spec.startswith("["):
        if not spec.endswith("]"):
            raise ValueError(f"malformed a-invariant list: {spec!r}")
        parts = spec[1:-1].split(",")
        if len(parts) != 5:
            raise ValueError("expected exactly five a-invariants")
        return WeierstrassModel(*(int(c.strip()) for c in parts))
    table = _table()
    if spec not in table:
        raise KeyError(f"unknown corpus label: {spec!r}")
    return WeierstrassModel(*table[spec][0])
