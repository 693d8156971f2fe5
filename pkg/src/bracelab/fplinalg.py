"""Dense linear algebra over Z/p and matrix-group machinery.

Matrices carry a prime modulus and act on column vectors.  Subspaces are
kept in reduced row echelon form so equal spaces compare equal and reports
are deterministic.  Vectors are identified with element indices through
base-p little-endian digits (coordinate 0 is the least significant digit).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ClosureBudgetExceeded,
    DimensionMismatch,
    NonPrimeModulus,
    SingularGenerator,
)
from .groups import GroupTable, _trusted_table

# Supported scale: the bundled constructions use p in {2, 3} and n <= 4.
MAX_PRIME = 251
MAX_DIM = 16
CLOSURE_CAP = 100_000
# Group tables and order profiles are only materialized for closures up to
# this order; beyond it only the element list is available.
TABLE_CAP = 2048


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise NonPrimeModulus(f"modulus {p} is not prime")
    if p > MAX_PRIME:
        raise NonPrimeModulus(f"modulus {p} exceeds the supported bound {MAX_PRIME}")


@dataclass(frozen=True, eq=False)
class FpMatrix:
    """A matrix over Z/p with entries reduced to 0..p-1."""

    p: int
    entries: np.ndarray

    @classmethod
    def from_rows(cls, p: int, rows) -> "FpMatrix":
        _require_prime(p)
        arr = np.asarray(rows, dtype=np.int64) % p
        if arr.ndim != 2:
            raise DimensionMismatch("matrix entries must be two-dimensional")
        if max(arr.shape) > MAX_DIM and min(arr.shape) > MAX_DIM:
            raise DimensionMismatch(f"dimensions beyond {MAX_DIM} are unsupported")
        arr.setflags(write=False)
        return cls(p, arr)

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FpMatrix)
            and self.p == other.p
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.entries.shape, self.entries.tobytes()))

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.p != other.p or self.cols != other.rows:
            raise DimensionMismatch("matrix product shape or modulus mismatch")
        return FpMatrix.from_rows(self.p, (self.entries @ other.entries) % self.p)

    def key(self) -> bytes:
        return self.entries.tobytes()

    def minus_identity(self) -> "FpMatrix":
        if self.rows != self.cols:
            raise DimensionMismatch("square matrix required")
        return FpMatrix.from_rows(self.p, self.entries - np.eye(self.rows, dtype=np.int64))

    def apply(self, vector: Sequence[int]) -> np.ndarray:
        v = np.asarray(vector, dtype=np.int64) % self.p
        return (self.entries @ v) % self.p

    @cached_property
    def rank(self) -> int:
        return len(_rref(self.entries, self.p)[1])

    @property
    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank == self.rows

    def inverse(self) -> "FpMatrix":
        if not self.is_invertible:
            raise SingularGenerator("matrix is not invertible")
        n = self.rows
        aug = np.concatenate([self.entries, np.eye(n, dtype=np.int64)], axis=1)
        reduced, pivots = _rref(aug, self.p)
        return FpMatrix.from_rows(self.p, reduced[:, n:])


def identity_matrix(p: int, n: int) -> FpMatrix:
    return FpMatrix.from_rows(p, np.eye(n, dtype=np.int64))


def _rref(matrix: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p, plus the pivot column list."""
    m = np.array(matrix, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_rows = np.flatnonzero(m[r:, c]) + r
        if pivot_rows.size == 0:
            continue
        pr = int(pivot_rows[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        others = np.flatnonzero(m[:, c])
        others = others[others != r]
        if others.size:
            m[others] = (m[others] - np.outer(m[others, c], m[r])) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


@dataclass(frozen=True, eq=False)
class FpSubspace:
    """A subspace of (Z/p)^n, stored as a reduced-row-echelon basis."""

    p: int
    ambient: int
    basis: np.ndarray

    @classmethod
    def from_vectors(cls, p: int, ambient: int, vectors) -> "FpSubspace":
        _require_prime(p)
        arr = np.asarray(list(vectors), dtype=np.int64).reshape(-1, ambient) % p
        if arr.size == 0:
            basis = np.zeros((0, ambient), dtype=np.int64)
        else:
            reduced, pivots = _rref(arr, p)
            basis = reduced[: len(pivots)]
        basis = np.ascontiguousarray(basis)
        basis.setflags(write=False)
        return cls(p, ambient, basis)

    @classmethod
    def zero(cls, p: int, ambient: int) -> "FpSubspace":
        return cls.from_vectors(p, ambient, [])

    @classmethod
    def full(cls, p: int, ambient: int) -> "FpSubspace":
        return cls.from_vectors(p, ambient, np.eye(ambient, dtype=np.int64))

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FpSubspace)
            and (self.p, self.ambient) == (other.p, other.ambient)
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.ambient, self.basis.tobytes()))

    def __repr__(self) -> str:
        rows = [tuple(int(x) for x in row) for row in self.basis]
        return f"FpSubspace(p={self.p}, ambient={self.ambient}, basis={rows})"

    def contains(self, vector) -> bool:
        v = np.asarray(vector, dtype=np.int64) % self.p
        for row, c in zip(self.basis, _pivot_columns(self.basis)):
            coeff = int(v[c]) % self.p
            if coeff:
                v = (v - coeff * row) % self.p
        return not v.any()

    def contains_space(self, other: "FpSubspace") -> bool:
        return all(self.contains(row) for row in other.basis)

    def sum_with(self, other: "FpSubspace") -> "FpSubspace":
        stacked = np.concatenate([self.basis, other.basis], axis=0)
        return FpSubspace.from_vectors(self.p, self.ambient, stacked)

    def intersect(self, other: "FpSubspace") -> "FpSubspace":
        """Zassenhaus: rref of [[A A],[B 0]]; rows with zero left half give the meet."""
        if (self.p, self.ambient) != (other.p, other.ambient):
            raise DimensionMismatch("subspaces live in different ambient spaces")
        n = self.ambient
        top = np.concatenate([self.basis, self.basis], axis=1)
        bottom = np.concatenate([other.basis, np.zeros_like(other.basis)], axis=1)
        block = np.concatenate([top, bottom], axis=0)
        if block.shape[0] == 0:
            return FpSubspace.zero(self.p, n)
        reduced, pivots = _rref(block, self.p)
        rows = reduced[: len(pivots)]
        zero_left = ~rows[:, :n].any(axis=1)
        return FpSubspace.from_vectors(self.p, n, rows[zero_left][:, n:])

    def enumerate_vectors(self) -> Iterable[np.ndarray]:
        """All p**dim member vectors, coefficient tuples in lexicographic order."""
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            yield (np.asarray(coeffs, dtype=np.int64) @ self.basis) % self.p if self.dim else np.zeros(
                self.ambient, dtype=np.int64
            )


def _pivot_columns(basis: np.ndarray) -> list[int]:
    return [int(np.argmax(row != 0)) for row in basis]


def kernel_image(matrix: FpMatrix) -> tuple[FpSubspace, FpSubspace]:
    """Null space and column space via row reduction mod p."""
    p = matrix.p
    reduced, pivots = _rref(matrix.entries, p)
    cols = matrix.cols
    free = [c for c in range(cols) if c not in pivots]
    kernel_vectors = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-reduced[r, f]) % p
        kernel_vectors.append(v)
    kernel = FpSubspace.from_vectors(p, cols, kernel_vectors)
    image = FpSubspace.from_vectors(p, matrix.rows, matrix.entries.T)
    return kernel, image


def span_of_columns(matrices: Sequence[FpMatrix]) -> FpSubspace:
    """Column span of a family of matrices with a common shape."""
    p = matrices[0].p
    rows = matrices[0].rows
    stacked = np.concatenate([m.entries.T for m in matrices], axis=0)
    return FpSubspace.from_vectors(p, rows, stacked)


@dataclass(frozen=True, eq=False)
class MatrixGroup:
    """A finite group of invertible matrices, closed by deterministic BFS."""

    p: int
    dim: int
    generators: tuple[FpMatrix, ...]
    elements: tuple[FpMatrix, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_of(self, matrix: FpMatrix) -> int:
        return self._index[matrix.key()]

    @cached_property
    def _index(self) -> dict[bytes, int]:
        return {m.key(): i for i, m in enumerate(self.elements)}

    @cached_property
    def group_table(self) -> GroupTable:
        """The abstract multiplication table; element 0 is the identity."""
        if self.order > TABLE_CAP:
            raise ClosureBudgetExceeded(
                f"group table withheld for order {self.order} > {TABLE_CAP}"
            )
        stack = np.stack([m.entries for m in self.elements])
        index = self._index
        table = np.empty((self.order, self.order), dtype=np.int64)
        for i, m in enumerate(self.elements):
            prods = (m.entries[None, :, :] @ stack) % self.p
            for j in range(self.order):
                table[i, j] = index[np.ascontiguousarray(prods[j]).tobytes()]
        return _trusted_table(table)


def matrix_group_closure(gens: Sequence[FpMatrix], *, cap: int = CLOSURE_CAP) -> MatrixGroup:
    """BFS closure of invertible generators under product.

    Element 0 is the identity and the listing order is the BFS discovery
    order, so it is deterministic for a given generator list.
    """
    if not gens:
        raise DimensionMismatch("at least the dimension is needed; pass [identity]")
    p = gens[0].p
    dim = gens[0].rows
    for g in gens:
        if g.p != p or g.rows != dim or g.cols != dim:
            raise DimensionMismatch("generators must share modulus and dimension")
        if not g.is_invertible:
            raise SingularGenerator("generator is not invertible")
    ident = identity_matrix(p, dim)
    elements = [ident]
    index = {ident.key(): 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                prod = m @ g
                if prod.key() not in index:
                    index[prod.key()] = len(elements)
                    elements.append(prod)
                    nxt.append(prod)
                    if len(elements) > cap:
                        raise ClosureBudgetExceeded(
                            f"closure exceeded {cap} elements", partial=tuple(elements)
                        )
        frontier = nxt
    return MatrixGroup(p, dim, tuple(gens), tuple(elements))


def fixed_space(group: MatrixGroup, *, use_all_elements: bool = False) -> FpSubspace:
    """Common fixed vectors of the group: the meet of ker(g - I).

    Generators suffice; ``use_all_elements`` recomputes over the closure for
    cross-checking.
    """
    mats = group.elements if use_all_elements else group.generators
    space = FpSubspace.full(group.p, group.dim)
    for m in mats:
        kernel, _ = kernel_image(m.minus_identity())
        space = space.intersect(kernel)
    return space


@dataclass(frozen=True)
class RecipeCheck:
    """Outcome of the two counterexample conditions for a generator set."""

    cond1: bool
    cond2: bool
    fixed: FpSubspace
    witnesses_v: tuple[tuple[int, ...], ...]
    witnesses_complete: bool = True


# Witness vectors are enumerated only while the preimage space stays small.
_WITNESS_ENUM_CAP = 1 << 16


def recipe_check(gens: Sequence[FpMatrix]) -> RecipeCheck:
    """Evaluate the counterexample recipe on a set of invertible matrices.

    cond1: the columns of all g - I together span the full space.
    cond2: some v outside the common fixed space U lands in U under every
    g - I.  Witnesses list all such v up to scalar, lexicographically.
    """
    if not gens:
        raise DimensionMismatch("empty generator list")
    p = gens[0].p
    n = gens[0].rows
    for g in gens:
        if g.p != p or g.rows != n or g.cols != n:
            raise DimensionMismatch("generators must share modulus and dimension")
        if not g.is_invertible:
            raise SingularGenerator("generator is not invertible")
    deltas = [g.minus_identity() for g in gens]
    cond1 = span_of_columns(deltas).dim == n

    fixed = FpSubspace.full(p, n)
    for d in deltas:
        fixed = fixed.intersect(kernel_image(d)[0])

    # Functionals vanishing on U: kernel of the basis matrix read as a map.
    if fixed.dim:
        functionals = kernel_image(FpMatrix.from_rows(p, fixed.basis))[0].basis
    else:
        functionals = np.eye(n, dtype=np.int64)
    if functionals.shape[0]:
        stacked = np.concatenate(
            [(functionals @ d.entries) % p for d in deltas], axis=0
        )
        preimage = kernel_image(FpMatrix.from_rows(p, stacked))[0]
    else:
        preimage = FpSubspace.full(p, n)

    cond2 = preimage.dim > fixed.dim
    witnesses: set[tuple[int, ...]] = set()
    complete = p**preimage.dim <= _WITNESS_ENUM_CAP
    if complete:
        for v in preimage.enumerate_vectors():
            if not v.any() or fixed.contains(v):
                continue
            lead = int(v[np.argmax(v != 0)])
            monic = (v * pow(lead, -1, p)) % p
            witnesses.add(tuple(int(x) for x in monic))
    return RecipeCheck(cond1, cond2, fixed, tuple(sorted(witnesses)), complete)


@dataclass(frozen=True)
class RecipeCandidate:
    """A qualifying generator set with its conjugacy-invariant signature."""

    generators: tuple[FpMatrix, ...]
    closure_order: int
    fixed_dim: int
    order_profile: tuple[tuple[int, int], ...] | None

    @property
    def signature(self) -> tuple:
        return (self.closure_order, self.fixed_dim, self.order_profile)


@dataclass(frozen=True)
class RecipeSearchResult:
    candidates: tuple[RecipeCandidate, ...]
    nodes: int
    budget_exceeded: bool


def _enumerate_invertible(p: int, n: int) -> list[FpMatrix]:
    mats = []
    for entries in itertools.product(range(p), repeat=n * n):
        m = FpMatrix.from_rows(p, np.asarray(entries, dtype=np.int64).reshape(n, n))
        if m.is_invertible:
            mats.append(m)
    return mats


def _py_rank(rows: list[list[int]], p: int) -> int:
    """Row rank mod p by plain-integer elimination; fast for tiny matrices."""
    m = [row[:] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    for c in range(ncols):
        pivot = None
        for r in range(rank, nrows):
            if m[r][c] % p:
                pivot = r
                break
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][c] % p, -1, p)
        m[rank] = [(x * inv) % p for x in m[rank]]
        for r in range(nrows):
            if r != rank and m[r][c] % p:
                factor = m[r][c] % p
                m[r] = [(a - factor * b) % p for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def _fast_prefilter(deltas: list[list[list[int]]], n: int, p: int) -> bool:
    """Necessary conditions for the recipe, on plain integer matrices.

    cond1 needs the stacked transposed deltas to have full rank; cond2 needs
    a nonzero common fixed vector (otherwise the preimage space collapses
    onto the fixed space).
    """
    stacked = [row for d in deltas for row in d]
    if n - _py_rank(stacked, p) < 1:
        return False
    transposed = [[d[i][j] for i in range(n)] for d in deltas for j in range(n)]
    return _py_rank(transposed, p) == n


def _candidate_from_gens(gens: tuple[FpMatrix, ...], fixed_dim: int) -> RecipeCandidate:
    group = matrix_group_closure(gens)
    profile = group.group_table.order_profile if group.order <= TABLE_CAP else None
    return RecipeCandidate(gens, group.order, fixed_dim, profile)


def search_recipe(
    n: int,
    p: int,
    *,
    budget: int = 10_000_000,
    strategy: str = "exhaustive",
    seed: int = 0,
    max_gens: int = 4,
    max_sets: int = 4,
) -> RecipeSearchResult:
    """Search for generator sets satisfying both recipe conditions.

    ``exhaustive`` walks subsets of the invertible matrices in lexicographic
    order (sizes ascending); ``random`` draws seeded candidate sets until
    ``max_sets`` distinct signatures are collected or the node budget runs
    out.  One node is one candidate set examined.  Results are deduplicated
    by (closure order, fixed-space dimension, order profile).
    """
    _require_prime(p)
    if n < 1:
        raise DimensionMismatch("dimension must be at least 1")
    found: dict[tuple, RecipeCandidate] = {}
    nodes = 0
    exceeded = False

    if strategy == "exhaustive":
        if p ** (n * n) > 1 << 20:
            raise DimensionMismatch(
                f"exhaustive enumeration of {p}^{n * n} matrices is infeasible; "
                "use strategy='random'"
            )
        pool = _enumerate_invertible(p, n)
        done = False
        for size in range(1, max_gens + 1):
            if done:
                break
            for combo in itertools.combinations(pool, size):
                if nodes >= budget:
                    exceeded = True
                    done = True
                    break
                nodes += 1
                outcome = recipe_check(combo)
                if outcome.cond1 and outcome.cond2:
                    cand = _candidate_from_gens(tuple(combo), outcome.fixed.dim)
                    found.setdefault(cand.signature, cand)
    elif strategy == "random":
        rng = np.random.default_rng(seed)
        eye = [[int(i == j) for j in range(n)] for i in range(n)]
        while len(found) < max_sets and nodes < budget:
            nodes += 1
            size = int(rng.integers(2, max_gens + 1))
            raw: list[list[list[int]]] = []
            while len(raw) < size:
                m = rng.integers(0, p, size=(n, n)).tolist()
                if _py_rank(m, p) == n:
                    raw.append(m)
            deltas = [
                [[(x - e) % p for x, e in zip(row, erow)] for row, erow in zip(m, eye)]
                for m in raw
            ]
            if not _fast_prefilter(deltas, n, p):
                continue
            gens = [FpMatrix.from_rows(p, m) for m in raw]
            outcome = recipe_check(gens)
            if outcome.cond1 and outcome.cond2:
                cand = _candidate_from_gens(tuple(gens), outcome.fixed.dim)
                found.setdefault(cand.signature, cand)
        exceeded = nodes >= budget
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    ordered = tuple(
        sorted(
            found.values(),
            key=lambda c: (c.closure_order, c.fixed_dim, c.order_profile or ()),
        )
    )
    return RecipeSearchResult(ordered, nodes, exceeded)
