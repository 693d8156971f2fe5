"""Bundled group tables, counterexample instances, and the verification corpus.

Group fixtures are built from first principles (permutation composition,
presentation formulas, matrix closure) and validated on construction.  Names
follow a small grammar: ``cN`` cyclic, ``cNxM...`` direct products, ``dN``
dihedral of order 2N, ``qN`` dicyclic of order N, ``sN``/``aN`` symmetric and
alternating, ``sl25`` the 2x2 determinant-1 group over Z/5.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .braces import SkewBrace, lift_group_to_brace
from .constructions import build_counterexample, example1_brace
from .errors import BraceLabError
from .fplinalg import FpMatrix, MatrixGroup, matrix_group_closure
from .groups import GroupTable, group_from_table
from .grun import GrunReport


def data_path(name: str) -> Path:
    """Filesystem path of a bundled fixture file under bracelab/data."""
    return Path(str(resources.files("bracelab").joinpath("data", name)))


def _table_from_elements(elements, compose) -> GroupTable:
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    mul = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            mul[i, j] = index[compose(a, b)]
    return group_from_table(mul)


@lru_cache(maxsize=None)
def cyclic(n: int) -> GroupTable:
    ar = np.arange(n, dtype=np.int64)
    return group_from_table((ar[:, None] + ar[None, :]) % n)


@lru_cache(maxsize=None)
def direct_product(*orders: int) -> GroupTable:
    elements = list(itertools.product(*(range(k) for k in orders)))

    def compose(a, b):
        return tuple((x + y) % k for x, y, k in zip(a, b, orders))

    return _table_from_elements(elements, compose)


@lru_cache(maxsize=None)
def dihedral(n: int) -> GroupTable:
    """Symmetries of the n-gon, order 2n; elements are (rotation, flip)."""
    elements = [(r, s) for s in range(2) for r in range(n)]

    def compose(a, b):
        r1, s1 = a
        r2, s2 = b
        return ((r1 + (r2 if s1 == 0 else -r2)) % n, (s1 + s2) % 2)

    return _table_from_elements(elements, compose)


@lru_cache(maxsize=None)
def dicyclic(order: int) -> GroupTable:
    """Dicyclic group of the given order 4m (order 8 is the quaternions)."""
    if order % 4:
        raise BraceLabError(f"dicyclic order must be divisible by 4, got {order}")
    m = order // 4
    elements = [(i, j) for j in range(2) for i in range(2 * m)]

    def compose(a, b):
        i1, j1 = a
        i2, j2 = b
        if j1 == 0:
            return ((i1 + i2) % (2 * m), j2)
        if j2 == 0:
            return ((i1 - i2) % (2 * m), 1)
        return ((i1 - i2 + m) % (2 * m), 0)

    return _table_from_elements(elements, compose)


def _perm_compose(a, b):
    return tuple(a[b[i]] for i in range(len(a)))


def _perm_sign(perm) -> int:
    seen = [False] * len(perm)
    sign = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        cursor = start
        while not seen[cursor]:
            seen[cursor] = True
            cursor = perm[cursor]
            length += 1
        sign += length - 1
    return sign % 2


@lru_cache(maxsize=None)
def symmetric(k: int) -> GroupTable:
    elements = sorted(itertools.permutations(range(k)))
    return _table_from_elements(elements, _perm_compose)


@lru_cache(maxsize=None)
def alternating(k: int) -> GroupTable:
    elements = sorted(p for p in itertools.permutations(range(k)) if _perm_sign(p) == 0)
    return _table_from_elements(elements, _perm_compose)


@lru_cache(maxsize=None)
def sl25() -> GroupTable:
    """2x2 matrices over Z/5 of determinant 1, order 120, via closure."""
    gens = [FpMatrix.from_rows(5, [[1, 1], [0, 1]]), FpMatrix.from_rows(5, [[0, 4], [1, 0]])]
    return matrix_group_closure(gens).group_table


def group_by_name(name: str) -> GroupTable:
    """Resolve a fixture name from the grammar in the module docstring."""
    key = name.strip().lower()
    if key == "klein":
        key = "c2x2"
    if key == "sl25":
        return sl25()
    if key.startswith("s") and key[1:].isdigit():
        k = int(key[1:])
        if k > 5:
            raise BraceLabError("symmetric fixtures stop at s5")
        return symmetric(k)
    if key.startswith("a") and key[1:].isdigit():
        k = int(key[1:])
        if k > 5:
            raise BraceLabError("alternating fixtures stop at a5")
        return alternating(k)
    if key.startswith("d") and key[1:].isdigit():
        return dihedral(int(key[1:]))
    if key.startswith("q") and key[1:].isdigit():
        return dicyclic(int(key[1:]))
    if key.startswith("dic") and key[3:].isdigit():
        return dicyclic(4 * int(key[3:]))
    if key.startswith("c"):
        parts = key[1:].split("x")
        if all(part.isdigit() and int(part) >= 1 for part in parts):
            if len(parts) == 1:
                return cyclic(int(parts[0]))
            return direct_product(*(int(part) for part in parts))
    raise BraceLabError(f"unknown group fixture {name!r}")


# Every bundled group of order at most 16, used for corpus sweeps.
SMALL_GROUP_NAMES: tuple[str, ...] = (
    "c1", "c2", "c3", "c4", "c2x2", "c5", "c6", "s3", "c7",
    "c8", "c4x2", "c2x2x2", "d4", "q8",
    "c9", "c3x3", "c10", "d5", "c11",
    "c12", "c6x2", "d6", "a4", "dic3",
    "c13", "c14", "d7", "c15",
    "c16", "c8x2", "c4x4", "c4x2x2", "c2x2x2x2", "d8", "q16",
)


def prop1_generators(p: int = 2) -> list[FpMatrix]:
    """The single upper-triangular generator of the order-p image in dim 2."""
    return [FpMatrix.from_rows(p, [[1, 1], [0, 1]])]


def prop2_generators(p: int = 3) -> list[FpMatrix]:
    """The two 3x3 generators of the Z/p x Z/2 image (p odd)."""
    return [
        FpMatrix.from_rows(p, [[1, 0, 1], [0, 1, 0], [0, 0, 1]]),
        FpMatrix.from_rows(p, [[1, 1, 0], [0, -1, 0], [0, 0, 1]]),
    ]


def prop3_generators() -> list[FpMatrix]:
    """The four 4x4 generators over Z/2 whose closure is the order-24 image."""
    rows = [
        [[0, 1, 1, 1], [0, 1, 0, 0], [1, 0, 0, 1], [0, 1, 0, 1]],
        [[1, 1, 0, 0], [0, 1, 0, 0], [1, 1, 0, 1], [1, 0, 1, 0]],
        [[1, 0, 0, 0], [1, 1, 1, 1], [0, 0, 1, 0], [1, 1, 1, 0]],
        [[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 1, 0, 1]],
    ]
    return [FpMatrix.from_rows(2, m) for m in rows]


@lru_cache(maxsize=None)
def prop1_matrix_group(p: int = 2) -> MatrixGroup:
    return matrix_group_closure(prop1_generators(p))


@lru_cache(maxsize=None)
def prop3_matrix_group() -> MatrixGroup:
    return matrix_group_closure(prop3_generators())


@lru_cache(maxsize=None)
def example1() -> SkewBrace:
    return example1_brace()


@lru_cache(maxsize=None)
def prop1_instance() -> tuple[SkewBrace, GrunReport]:
    """Order 96: F_2^2 acted on by the order-2 image; not perfect, defect != 1."""
    return build_counterexample(example1(), prop1_matrix_group(2), (2, 2))


@lru_cache(maxsize=None)
def prop3_instance() -> tuple[SkewBrace, GrunReport]:
    """Order 384: F_2^4 acted on by the order-24 image; perfect, defect != 1."""
    return build_counterexample(example1(), prop3_matrix_group(), (2, 4))


def doctored_braces() -> list[tuple[str, np.ndarray, np.ndarray]]:
    """Three invalid (name, dot, circ) table pairs for rejection tests.

    One breaks the compatibility relation with two honest groups (cyclic
    order 8 against dihedral order 8), one has a corrupted circ row, and one
    has mismatched identities.
    """
    c8 = np.asarray(cyclic(8).mul, dtype=np.int64)
    d4 = np.asarray(dihedral(4).mul, dtype=np.int64)

    s3 = group_by_name("s3")
    dot_s3 = np.asarray(s3.mul, dtype=np.int64)
    circ_bad = dot_s3.T.copy()
    circ_bad[1, 2] = (circ_bad[1, 2] + 1) % s3.order

    shifted = np.asarray(cyclic(4).mul, dtype=np.int64)
    perm = np.array([1, 0, 2, 3])
    from .groups import relabel_table

    circ_shift = relabel_table(shifted, perm)  # identity lands at index 1

    return [
        ("z4-dot-klein-circ", z4, klein),
        ("s3-circ-corrupted", dot_s3, circ_bad),
        ("c4-identity-shift", z4, circ_shift),
    ]


def corpus_braces(*, include_large: bool = True) -> list[SkewBrace]:
    """The valid sweep corpus: lifted small groups plus the bundled instances."""
    braces: list[SkewBrace] = []
    for name in SMALL_GROUP_NAMES:
        group = group_by_name(name)
        braces.append(lift_group_to_brace(group, "trivial", name=f"{name}-trivial"))
        if not group.is_abelian:
            braces.append(
                lift_group_to_brace(group, "almost_trivial", name=f"{name}-almost-trivial")
            )
    braces.append(example1())
    if include_large:
        braces.append(prop1_instance()[0])
        braces.append(prop3_instance()[0])
    return braces
