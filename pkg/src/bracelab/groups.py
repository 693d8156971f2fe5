"""Finite groups as dense multiplication tables over element indices.

Elements are the integers ``0 .. n-1`` with the identity normalized to
index 0.  All values are immutable after construction and every operation
is a pure function; witnesses are reported in lowest lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ._checking import RelationResult, sweep_relation
from .errors import BudgetExceeded, NotAGroup, NotNormal
from .reports import FAIL, VerificationReport, combine_results, failing

TABLE_DTYPE = np.int16

# Hard cutoff for isomorphism backtracking, counted in assignment attempts.
ISO_NODE_BUDGET = 10_000_000


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=TABLE_DTYPE)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class GroupTable:
    """A finite group of order ``n`` as an ``n x n`` table of element indices."""

    order: int
    mul: np.ndarray
    inv: np.ndarray

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupTable)
            and self.order == other.order
            and np.array_equal(self.mul, other.mul)
        )

    def __hash__(self) -> int:
        return hash((self.order, self.mul.tobytes()))

    def __repr__(self) -> str:
        return f"GroupTable(order={self.order})"

    def mult(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def invert(self, a: int) -> int:
        return int(self.inv[a])

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def element_orders(self) -> np.ndarray:
        """Order of every element, as a read-only length-n vector."""
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        g = np.arange(n)
        cur = g.copy()
        k = 1
        while (orders == 0).any():
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            cur = self.mul[cur, g]
            k += 1
        orders.setflags(write=False)
        return orders

    @cached_property
    def order_profile(self) -> tuple[tuple[int, int], ...]:
        """Sorted (element order, multiplicity) pairs; an isomorphism invariant."""
        values, counts = np.unique(np.asarray(self.element_orders), return_counts=True)
        return tuple((int(v), int(c)) for v, c in zip(values, counts))


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup of a parent group, stored as a strictly sorted index tuple."""

    parent: GroupTable
    members: tuple[int, ...]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.parent == other.parent
            and self.members == other.members
        )

    def __hash__(self) -> int:
        return hash((self.parent, self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in set(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def member_mask(self) -> np.ndarray:
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[list(self.members)] = True
        return mask


@dataclass(frozen=True, eq=False)
class GroupHom:
    """A homomorphism between group tables, as a length-n index map."""

    source: GroupTable
    target: GroupTable
    image_of: np.ndarray

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupHom)
            and self.source == other.source
            and self.target == other.target
            and np.array_equal(self.image_of, other.image_of)
        )

    def __call__(self, x: int) -> int:
        return int(self.image_of[x])

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and len(set(self.image_of.tolist())) == self.source.order


def hom_violation(hom: GroupHom) -> tuple[int, int] | None:
    """First (a, b) with f(a.b) != f(a).f(b), or None when f is a homomorphism."""
    f = np.asarray(hom.image_of, dtype=np.int64)
    if int(f[0]) != 0:
        return (0, 0)
    lhs = f[np.asarray(hom.source.mul, dtype=np.int64)]
    rhs = hom.target.mul[f[:, None], f[None, :]]
    bad = lhs != rhs
    if bad.any():
        a, b = np.argwhere(bad)[0]
        return (int(a), int(b))
    return None


def relabel_table(mul: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """Rename element i to perm[i]: out[p(a), p(b)] = p(mul[a, b])."""
    p = np.asarray(perm, dtype=np.int64)
    out = np.empty_like(np.asarray(mul))
    out[p[:, None], p[None, :]] = p[np.asarray(mul)]
    return out


def _trusted_table(mul: np.ndarray) -> GroupTable:
    """Wrap a table known to be a group by construction."""
    mul = _freeze(mul)
    inv = _freeze(np.argmax(mul == 0, axis=1))
    return GroupTable(order=mul.shape[0], mul=mul, inv=inv)


def check_group_table(
    raw, *, seed: int | None = None, exhaustive: bool | None = None
) -> tuple[GroupTable | None, VerificationReport]:
    """Validate a raw table; return the normalized group and the evidence.

    On success the group has its identity relabeled to index 0.  On failure
    the report lists the first few violations (bad row or column, missing
    identity, associativity triple, inverse failure).
    """
    check = "group-table"
    arr = np.asarray(raw)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        return None, failing(check, [(-1,)], details=[("shape", (-1,))])
    n = int(arr.shape[0])
    if not np.issubdtype(arr.dtype, np.integer):
        try:
            arr = arr.astype(np.int64)
        except (TypeError, ValueError):
            return None, failing(check, [(-1,)], details=[("entries", (-1,))])
    arr = arr.astype(np.int64)
    if arr.min() < 0 or arr.max() >= n:
        bad = np.argwhere((arr < 0) | (arr >= n))[0]
        w = (int(bad[0]), int(bad[1]))
        return None, failing(check, [w], details=[("entry-range", w)])

    witnesses: list[tuple[int, ...]] = []
    details: list[tuple[str, tuple[int, ...]]] = []
    ref = np.arange(n)
    row_perm = (np.sort(arr, axis=1) == ref).all(axis=1)
    col_perm = (np.sort(arr, axis=0) == ref[:, None]).all(axis=0)
    for r in np.flatnonzero(~row_perm)[:3]:
        witnesses.append((int(r),))
        details.append(("row-not-permutation", (int(r),)))
    for c in np.flatnonzero(~col_perm)[:3]:
        witnesses.append((int(c),))
        details.append(("column-not-permutation", (int(c),)))
    if witnesses:
        return None, failing(check, witnesses, details=details)

    is_left_id = (arr == ref[None, :]).all(axis=1)
    is_right_id = (arr == ref[:, None]).all(axis=0)
    both = np.flatnonzero(is_left_id & is_right_id)
    if both.size != 1:
        return None, failing(check, [(-1,)], details=[("missing-identity", (-1,))])
    e = int(both[0])
    if e != 0:
        perm = np.arange(n)
        perm[0], perm[e] = e, 0
        arr = relabel_table(arr, perm)

    mul = arr
    assoc = sweep_relation(
        n,
        3,
        lambda a, b, c: mul[mul[a, b], c] != mul[a, mul[b, c]],
        exhaustive=exhaustive,
        seed=seed,
    )
    inv = np.argmax(mul == 0, axis=1)
    inv_bad = mul[inv, np.arange(n)] != 0
    inv_res = RelationResult(
        not inv_bad.any(),
        False,
        n,
        int(inv_bad.sum()),
        tuple((int(x),) for x in np.flatnonzero(inv_bad)[:3]),
    )
    report = combine_results(check, [("associativity", assoc), ("inverses", inv_res)])
    if report.status == FAIL:
        return None, report
    table = GroupTable(order=n, mul=_freeze(mul), inv=_freeze(inv))
    return table, report


def validate_group_table(raw, *, seed: int | None = None) -> GroupTable | VerificationReport:
    """Normalized GroupTable on success, the failure report otherwise."""
    table, report = check_group_table(raw, seed=seed)
    return table if table is not None else report


def group_from_table(raw, *, seed: int | None = None) -> GroupTable:
    """Like validate_group_table but raising NotAGroup on failure."""
    table, report = check_group_table(raw, seed=seed)
    if table is None:
        raise NotAGroup(f"table failed validation: {report.details[:1]}", report)
    return table


def subgroup_closure(group: GroupTable, gens: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``gens``, as a sorted member list."""
    n = group.order
    gen_list = sorted({int(g) for g in gens})
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    if gen_list:
        gen_arr = np.asarray(gen_list, dtype=np.int64)
        frontier = np.asarray([0], dtype=np.int64)
        while frontier.size:
            prods = np.asarray(group.mul[np.ix_(frontier, gen_arr)], dtype=np.int64).ravel()
            fresh = np.unique(prods[~mask[prods]])
            mask[fresh] = True
            frontier = fresh
    return Subgroup(group, tuple(int(x) for x in np.flatnonzero(mask)))


def is_normal_subgroup(group: GroupTable, sub: Subgroup) -> tuple[bool, tuple[int, int] | None]:
    """Whether gSg^-1 = S for all g; on failure the lowest (g, s) witness."""
    mask = sub.member_mask()
    members = np.asarray(sub.members, dtype=np.int64)
    for g in range(group.order):
        conj = group.mul[np.asarray(group.mul[g, members], dtype=np.int64), group.inv[g]]
        bad = ~mask[np.asarray(conj, dtype=np.int64)]
        if bad.any():
            s = int(members[int(np.argmax(bad))])
            return False, (g, s)
    return True, None


def center(group: GroupTable) -> Subgroup:
    """Elements commuting with everything, sorted."""
    mask = (group.mul == group.mul.T).all(axis=1)
    return Subgroup(group, tuple(int(x) for x in np.flatnonzero(mask)))


def commutator_subgroup(group: GroupTable, xs: Iterable[int], ys: Iterable[int]) -> Subgroup:
    """Subgroup generated by the commutators [x, y] = x.y.x^-1.y^-1."""
    xa = np.asarray(sorted({int(x) for x in xs}), dtype=np.int64)
    ya = np.asarray(sorted({int(y) for y in ys}), dtype=np.int64)
    t = np.asarray(group.mul[np.ix_(xa, ya)], dtype=np.int64)
    t = np.asarray(group.mul[t, group.inv[xa][:, None]], dtype=np.int64)
    t = group.mul[t, group.inv[ya][None, :]]
    return subgroup_closure(group, np.unique(t).tolist())


def coset_projection(group: GroupTable, sub: Subgroup) -> tuple[np.ndarray, np.ndarray]:
    """(representative, coset index) arrays for the left cosets of ``sub``.

    Representatives are the minimal index in each coset; coset indices are
    assigned in increasing representative order, so the identity coset is 0.
    """
    members = np.asarray(sub.members, dtype=np.int64)
    rep = np.asarray(group.mul[:, members], dtype=np.int64).min(axis=1)
    reps = np.unique(rep)
    cid = np.zeros(group.order, dtype=np.int64)
    cid[reps] = np.arange(reps.size)
    return reps, cid[rep]


def quotient_group(group: GroupTable, sub: Subgroup) -> tuple[GroupTable, GroupHom]:
    """Coset group with minimal-index representatives plus the projection."""
    ok, witness = is_normal_subgroup(group, sub)
    if not ok:
        raise NotNormal(witness)
    reps, proj = coset_projection(group, sub)
    qmul = proj[np.asarray(group.mul[np.ix_(reps, reps)], dtype=np.int64)]
    quotient = _trusted_table(qmul)
    return quotient, GroupHom(group, quotient, _freeze(proj))


def conjugacy_classes(group: GroupTable) -> list[tuple[int, ...]]:
    """Conjugacy classes, each sorted, ordered by minimal element."""
    n = group.order
    seen = np.zeros(n, dtype=bool)
    inv_all = np.asarray(group.inv, dtype=np.int64)
    g = np.arange(n)
    classes = []
    for x in range(n):
        if seen[x]:
            continue
        orbit = np.unique(group.mul[np.asarray(group.mul[g, x], dtype=np.int64), inv_all[g]])
        seen[np.asarray(orbit, dtype=np.int64)] = True
        classes.append(tuple(int(v) for v in orbit))
    return classes


def normal_subgroups(group: GroupTable) -> list[Subgroup]:
    """All normal subgroups, as joins of normal closures of conjugacy classes.

    Intended for small orders; the lattice walk is exponential in pathological
    cases but cheap for the orders this library targets.
    """
    classes = conjugacy_classes(group)
    seeds = {subgroup_closure(group, cls).members for cls in classes}
    lattice = set(seeds)
    worklist = list(seeds)
    while worklist:
        current = worklist.pop()
        for other in list(lattice):
            joined = subgroup_closure(group, set(current) | set(other)).members
            if joined not in lattice:
                lattice.add(joined)
                worklist.append(joined)
    ordered = sorted(lattice, key=lambda m: (len(m), m))
    return [Subgroup(group, m) for m in ordered]


def enumerate_subgroups(group: GroupTable, max_gens: int = 3) -> list[Subgroup]:
    """Subgroups generated by at most ``max_gens`` elements, deduplicated.

    Complete for groups whose every subgroup is at most ``max_gens``-generated,
    which covers the bundled small fixtures.
    """
    from itertools import combinations

    n = group.order
    found = {(0,)}
    for k in range(1, max_gens + 1):
        for gens in combinations(range(1, n), k):
            found.add(subgroup_closure(group, gens).members)
    return [Subgroup(group, m) for m in sorted(found, key=lambda m: (len(m), m))]


def generating_set(group: GroupTable) -> list[int]:
    """A small deterministic generating set, grown greedily by index order."""
    gens: list[int] = []
    known = {0}
    for x in range(1, group.order):
        if x not in known:
            gens.append(x)
            known = set(subgroup_closure(group, gens).members)
            if len(known) == group.order:
                break
    return gens


class _IsoSearch:
    """Backtracking search for bijective homomorphisms between tables."""

    def __init__(self, source: GroupTable, target: GroupTable, budget: int):
        self.g = source
        self.h = target
        self.budget = budget
        self.nodes = 0
        self.gens = generating_set(source)
        orders_h = np.asarray(target.element_orders)
        self.candidates = {
            int(k): [int(y) for y in np.flatnonzero(orders_h == k)]
            for k in set(np.asarray(source.element_orders).tolist())
        }

    def run(self) -> np.ndarray | None:
        n = self.g.order
        img = np.full(n, -1, dtype=np.int64)
        img[0] = 0
        used = np.zeros(n, dtype=bool)
        used[0] = True
        return self._dfs(0, img, used, [0])

    def _dfs(self, i, img, used, known):
        if i == len(self.gens):
            return img if len(known) == self.g.order else None
        x = self.gens[i]
        order_x = int(self.g.element_orders[x])
        for y in self.candidates.get(order_x, ()):
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded(
                    f"isomorphism search exceeded {self.budget} nodes", partial=None
                )
            ext = self._extend(img, used, known, x, y)
            if ext is None:
                continue
            result = self._dfs(i + 1, *ext)
            if result is not None:
                return result
        return None

    def _extend(self, img, used, known, x, y):
        """Assign img[x] = y and close under products, checking consistency."""
        gm, hm = self.g.mul, self.h.mul
        img = img.copy()
        used = used.copy()
        known = list(known)
        queue = [(x, y)]
        while queue:
            a, b = queue.pop()
            if img[a] != -1:
                if img[a] != b:
                    return None
                continue
            if used[b]:
                return None
            img[a] = b
            used[b] = True
            for k in known:
                fk = img[k]
                p, fp = int(gm[a, k]), int(hm[b, fk])
                if img[p] != -1:
                    if img[p] != fp:
                        return None
                else:
                    queue.append((p, fp))
                p, fp = int(gm[k, a]), int(hm[fk, b])
                if img[p] != -1:
                    if img[p] != fp:
                        return None
                else:
                    queue.append((p, fp))
            p, fp = int(gm[a, a]), int(hm[b, b])
            if img[p] != -1:
                if img[p] != fp:
                    return None
            else:
                queue.append((p, fp))
            known.append(a)
        return img, used, known


def find_isomorphism(
    source: GroupTable, target: GroupTable, *, budget: int = ISO_NODE_BUDGET
) -> GroupHom | None:
    """A bijective homomorphism source -> target, or None when none exists.

    Backtracks over images of a generating set; candidate images are limited
    to elements of equal order.  Raises BudgetExceeded past ``budget``
    assignment attempts.
    """
    if source.order != target.order:
        return None
    if source.order_profile != target.order_profile:
        return None
    img = _IsoSearch(source, target, budget).run()
    if img is None:
        return None
    hom = GroupHom(source, target, _freeze(img))
    if hom_violation(hom) is not None:  # closure guarantees this; fail loud if not
        return None
    return hom


def find_surjection(
    source: GroupTable, target: GroupTable, *, budget: int = ISO_NODE_BUDGET
) -> GroupHom | None:
    """A surjective homomorphism source -> target, or None.

    Enumerates normal subgroups of the right index and tests whether the
    quotient is isomorphic to the target; the first hit in the deterministic
    search order is returned.
    """
    if target.order == 0 or source.order % target.order != 0:
        return None
    if target.order == 1:
        return GroupHom(source, target, _freeze(np.zeros(source.order, dtype=np.int64)))
    kernel_size = source.order // target.order
    for sub in normal_subgroups(source):
        if len(sub.members) != kernel_size:
            continue
        quotient, proj = quotient_group(source, sub)
        iso = find_isomorphism(quotient, target, budget=budget)
        if iso is not None:
            image = np.asarray(iso.image_of, dtype=np.int64)[
                np.asarray(proj.image_of, dtype=np.int64)
            ]
            return GroupHom(source, target, _freeze(image))
    return None
