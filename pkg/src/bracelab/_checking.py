"""Chunked exhaustive and seeded-sample sweeps over index relations.

A relation is a callable taking broadcastable integer index arrays and
returning a boolean array that marks violations.  The same callable is used
for full cartesian sweeps (chunked along the first axis to bound memory)
and for random spot checks on tables too large to sweep.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

# Largest order swept exhaustively for cubic (triple) relations.
EXHAUSTIVE_LIMIT = 512
# Sampled mode draws SAMPLE_FACTOR * n**2 index tuples.
SAMPLE_FACTOR = 10
MAX_WITNESSES = 5
_CHUNK_ELEMS = 1 << 21

Relation = Callable[..., np.ndarray]


def default_seed() -> int:
    """The process-wide default RNG seed (0, overridable via BRACELAB_SEED)."""
    raw = os.environ.get("BRACELAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        return 0


@dataclass(frozen=True)
class RelationResult:
    """Outcome of sweeping one relation."""

    ok: bool
    sampled: bool
    checked: int
    violations: int
    witnesses: tuple[tuple[int, ...], ...]


def sweep_relation(
    n: int,
    arity: int,
    relation: Relation,
    *,
    exhaustive: bool | None = None,
    seed: int | None = None,
    max_witnesses: int = MAX_WITNESSES,
) -> RelationResult:
    """Sweep ``relation`` over index tuples from ``range(n) ** arity``.

    ``exhaustive=None`` picks the full sweep for ``n <= EXHAUSTIVE_LIMIT``.
    Relations of arity below 3 are always swept in full; they are at most
    quadratic and cheaper than the sampled alternative.
    """
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_LIMIT
    if exhaustive or arity < 3:
        return _sweep_exhaustive(n, arity, relation, max_witnesses)
    if seed is None:
        seed = default_seed()
    return _sweep_sampled(n, arity, relation, seed, max_witnesses)


def _sweep_exhaustive(n, arity, relation, max_witnesses):
    block = max(1, _CHUNK_ELEMS // max(1, n ** (arity - 1)))
    tail_shape = (n,) * (arity - 1)
    violations = 0
    witnesses: list[tuple[int, ...]] = []
    for start in range(0, n, block):
        first = np.arange(start, min(n, start + block), dtype=np.int64)
        idx = [first.reshape((-1,) + (1,) * (arity - 1))]
        for axis in range(1, arity):
            shape = [1] * arity
            shape[axis] = n
            idx.append(np.arange(n, dtype=np.int64).reshape(shape))
        viol = np.broadcast_to(relation(*idx), (first.size,) + tail_shape)
        if viol.any():
            violations += int(viol.sum())
            if len(witnesses) < max_witnesses:
                where = np.argwhere(viol)
                for row in where[: max_witnesses - len(witnesses)]:
                    witnesses.append((int(first[row[0]]), *(int(v) for v in row[1:])))
    return RelationResult(violations == 0, False, n**arity, violations, tuple(witnesses))


def _sweep_sampled(n, arity, relation, seed, max_witnesses):
    rng = np.random.default_rng(seed)
    total = SAMPLE_FACTOR * n * n
    chunk = max(1, _CHUNK_ELEMS // 4)
    violations = 0
    witnesses: list[tuple[int, ...]] = []
    done = 0
    while done < total:
        m = min(chunk, total - done)
        idx = rng.integers(0, n, size=(arity, m), dtype=np.int64)
        viol = np.broadcast_to(relation(*idx), (m,))
        if viol.any():
            violations += int(viol.sum())
            if len(witnesses) < max_witnesses:
                for j in np.flatnonzero(viol)[: max_witnesses - len(witnesses)]:
                    witnesses.append(tuple(int(idx[k, j]) for k in range(arity)))
        done += m
    return RelationResult(violations == 0, True, total, violations, tuple(witnesses))
