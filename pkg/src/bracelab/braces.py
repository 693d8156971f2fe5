"""Skew braces on element indices, with their ideals and invariant series.

A skew brace is two group tables on the same index set, sharing identity 0
and satisfying the compatibility relation

    a o (b . c) = (a o b) . a^-1 . (a o c).

The difference operation a * b = a^-1 . (a o b) . b^-1 plays the role of a
commutator; the derived ideal, socle, annihilator and second annihilator
are all computed by brute force from the full star table.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._checking import sweep_relation
from .errors import InternalInconsistency, NotABrace, NotAnIdeal
from .reports import FAIL, VerificationReport, combine_results, failing
from .groups import (
    GroupHom,
    GroupTable,
    Subgroup,
    TABLE_DTYPE,
    _freeze,
    _trusted_table,
    center,
    check_group_table,
    coset_projection,
    relabel_table,
    subgroup_closure,
)


@dataclass(frozen=True, eq=False)
class SkewBrace:
    """Two compatible group structures (dot, circ) on one index set.

    ``circ_inv`` holds the circ-inverses; ``lam`` and ``star_table`` are the
    precomputed tables lam[a, x] = a^-1 . (a o x) and star[a, b] = a * b.
    """

    dot: GroupTable
    circ: GroupTable
    circ_inv: np.ndarray
    lam: np.ndarray
    star_table: np.ndarray
    name: str = ""

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SkewBrace)
            and self.dot == other.dot
            and self.circ == other.circ
        )

    def __hash__(self) -> int:
        return hash((self.dot, self.circ))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"SkewBrace(order={self.order}{label})"

    @property
    def order(self) -> int:
        return self.dot.order

    @cached_property
    def dot_center_mask(self) -> np.ndarray:
        mask = (self.dot.mul == self.dot.mul.T).all(axis=1)
        mask.setflags(write=False)
        return mask

    @cached_property
    def circ_center_mask(self) -> np.ndarray:
        mask = (self.circ.mul == self.circ.mul.T).all(axis=1)
        mask.setflags(write=False)
        return mask

    def renamed(self, name: str) -> "SkewBrace":
        return SkewBrace(self.dot, self.circ, self.circ_inv, self.lam, self.star_table, name)


@dataclass(frozen=True, eq=False)
class BraceIdeal:
    """An ideal of a skew brace: normal in both groups with a.I = a o I."""

    brace: SkewBrace
    members: tuple[int, ...]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BraceIdeal)
            and self.brace == other.brace
            and self.members == other.members
        )

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in set(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def as_subgroup(self) -> Subgroup:
        return Subgroup(self.brace.dot, self.members)


def assemble_brace(dot: GroupTable, circ: GroupTable, name: str = "") -> SkewBrace:
    """Wrap two tables as a SkewBrace without running the validation sweep.

    Derived tables are computed defensively so that corrupted inputs can
    still be probed by the verification operations.
    """
    n = dot.order
    circ_inv = np.argmax(circ.mul == 0, axis=1).astype(np.int64)
    lam = np.asarray(dot.mul, dtype=np.int64)[
        np.asarray(dot.inv, dtype=np.int64)[:, None], np.asarray(circ.mul, dtype=np.int64)
    ]
    star = np.asarray(dot.mul, dtype=np.int64)[lam, np.asarray(dot.inv, dtype=np.int64)[None, :]]
    return SkewBrace(dot, circ, _freeze(circ_inv), _freeze(lam), _freeze(star), name)


def check_skew_brace(
    dot_raw, circ_raw, *, seed: int | None = None, name: str = ""
) -> tuple[SkewBrace | None, VerificationReport]:
    """Validate a pair of raw tables as a skew brace.

    Both tables must be groups with the same identity (relabeled jointly to
    index 0 when needed) and satisfy the compatibility relation; the check
    is exhaustive up to order 512 and seeded-sampled above, with the sampled
    status recorded in the report.
    """
    check = "skew-brace"
    dot_arr = np.asarray(dot_raw if not isinstance(dot_raw, GroupTable) else dot_raw.mul)
    circ_arr = np.asarray(circ_raw if not isinstance(circ_raw, GroupTable) else circ_raw.mul)
    if dot_arr.shape != circ_arr.shape:
        return None, failing(check, [(-1,)], details=[("order-mismatch", (-1,))])
    n = int(dot_arr.shape[0])

    # Identify the identities before any relabeling so a mismatch is reported
    # as such rather than as a relation failure.
    ref = np.arange(n)
    ids = []
    for arr in (dot_arr, circ_arr):
        left = (arr == ref[None, :]).all(axis=1)
        right = (arr == ref[:, None]).all(axis=0)
        both = np.flatnonzero(left & right)
        ids.append(int(both[0]) if both.size == 1 else -1)
    if ids[0] != -1 and ids[1] != -1 and ids[0] != ids[1]:
        w = (ids[0], ids[1])
        return None, failing(check, [w], details=[("identity-mismatch", w)])
    if ids[0] not in (-1, 0):
        perm = np.arange(n)
        perm[0], perm[ids[0]] = ids[0], 0
        dot_arr = relabel_table(dot_arr, perm)
        circ_arr = relabel_table(circ_arr, perm)

    dot_table, dot_report = check_group_table(dot_arr, seed=seed)
    if dot_table is None:
        return None, VerificationReport(
            check,
            FAIL,
            dot_report.witnesses,
            dot_report.counts,
            tuple(("dot." + k, w) for k, w in dot_report.details),
        )
    circ_table, circ_report = check_group_table(circ_arr, seed=seed)
    if circ_table is None:
        return None, VerificationReport(
            check,
            FAIL,
            circ_report.witnesses,
            circ_report.counts,
            tuple(("circ." + k, w) for k, w in circ_report.details),
        )

    D = np.asarray(dot_table.mul, dtype=np.int64)
    C = np.asarray(circ_table.mul, dtype=np.int64)
    inv = np.asarray(dot_table.inv, dtype=np.int64)
    relation = sweep_relation(
        n,
        3,
        lambda a, b, c: C[a, D[b, c]] != D[D[C[a, b], inv[a]], C[a, c]],
        seed=seed,
    )
    parts = [
        ("dot.associativity", _as_result(dot_report, "associativity")),
        ("circ.associativity", _as_result(circ_report, "associativity")),
        ("left-brace-relation", relation),
    ]
    report = combine_results(check, [(k, r) for k, r in parts if r is not None])
    if report.status == FAIL:
        return None, report
    return assemble_brace(dot_table, circ_table, name), report


def _as_result(report: VerificationReport, prefix: str):
    from ._checking import RelationResult

    checked = report.count(f"{prefix}.checked")
    if checked is None:
        return None
    sampled = report.status == "sampled-pass"
    return RelationResult(True, sampled, checked, 0, ())


def validate_skew_brace(dot_raw, circ_raw, *, seed: int | None = None) -> SkewBrace | VerificationReport:
    """SkewBrace on success, the failure report otherwise."""
    brace, report = check_skew_brace(dot_raw, circ_raw, seed=seed)
    return brace if brace is not None else report


def brace_from_tables(dot_raw, circ_raw, *, name: str = "", seed: int | None = None) -> SkewBrace:
    """Like validate_skew_brace but raising NotABrace on failure."""
    brace, report = check_skew_brace(dot_raw, circ_raw, seed=seed, name=name)
    if brace is None:
        raise NotABrace(f"tables failed brace validation: {report.details[:1]}", report)
    return brace


def lift_group_to_brace(group: GroupTable, mode: str, name: str = "") -> SkewBrace:
    """The trivial (circ = dot) or almost-trivial (circ = opposite) brace on a group."""
    if mode == "trivial":
        circ = group.mul
    elif mode in ("almost_trivial", "almost-trivial"):
        circ = group.mul.T
    else:
        raise ValueError(f"unknown lift mode {mode!r}")
    return brace_from_tables(group.mul, circ, name=name or f"{mode}-order-{group.order}")


def lambda_perm(brace: SkewBrace, a: int) -> np.ndarray:
    """The permutation x -> a^-1 . (a o x); an automorphism of the dot group."""
    row = np.array(brace.lam[a], dtype=np.int64)
    row.setflags(write=False)
    return row


def star(brace: SkewBrace, a: int, b: int) -> int:
    """a * b = a^-1 . (a o b) . b^-1."""
    return int(brace.star_table[a, b])


def star_subgroup(brace: SkewBrace, xs, ys) -> Subgroup:
    """Subgroup of the dot group generated by {x * y : x in xs, y in ys}."""
    xa = np.asarray(sorted({int(x) for x in xs}), dtype=np.int64)
    ya = np.asarray(sorted({int(y) for y in ys}), dtype=np.int64)
    values = np.unique(np.asarray(brace.star_table, dtype=np.int64)[np.ix_(xa, ya)])
    return subgroup_closure(brace.dot, values.tolist())


def is_ideal(brace: SkewBrace, members) -> tuple[bool, VerificationReport]:
    """Check the ideal conditions for a subset, reporting the first failure.

    Conditions, in order: subgroup of (A, .), normal in (A, .), subgroup of
    (A, o), normal in (A, o), and a . I = a o I for every a.
    """
    check = "brace-ideal"
    m = sorted({int(x) for x in members})
    n = brace.order
    if not m or m[0] != 0 or m[-1] >= n:
        w = (m[0] if m else -1,)
        return False, failing(check, [w], details=[("contains-identity", w)])
    arr = np.asarray(m, dtype=np.int64)

    for label, table in (("dot", brace.dot), ("circ", brace.circ)):
        mask = np.zeros(n, dtype=bool)
        mask[arr] = True
        prods = np.asarray(table.mul, dtype=np.int64)[np.ix_(arr, arr)]
        bad = ~mask[prods]
        if bad.any():
            i, j = np.argwhere(bad)[0]
            w = (int(arr[i]), int(arr[j]))
            return False, failing(check, [w], details=[(f"{label}-subgroup", w)])
        sub = Subgroup(table, tuple(m))
        from .groups import is_normal_subgroup

        ok, witness = is_normal_subgroup(table, sub)
        if not ok:
            return False, failing(check, [witness], details=[(f"{label}-normal", witness)])

    dot_cosets = np.sort(np.asarray(brace.dot.mul, dtype=np.int64)[:, arr], axis=1)
    circ_cosets = np.sort(np.asarray(brace.circ.mul, dtype=np.int64)[:, arr], axis=1)
    bad_rows = (dot_cosets != circ_cosets).any(axis=1)
    if bad_rows.any():
        a = int(np.argmax(bad_rows))
        return False, failing(check, [(a,)], details=[("coset-match", (a,))])
    return True, VerificationReport(check, "pass", counts=(("members", len(m)),))


def _make_ideal(brace: SkewBrace, members) -> BraceIdeal:
    ok, report = is_ideal(brace, members)
    if not ok:
        raise InternalInconsistency(
            f"computed invariant is not an ideal: {report.details[:1]}"
        )
    return BraceIdeal(brace, tuple(sorted({int(x) for x in members})))


def derived_ideal(brace: SkewBrace) -> BraceIdeal:
    """The ideal generated by all star products (smallest with trivial quotient)."""
    sub = star_subgroup(brace, range(brace.order), range(brace.order))
    return _make_ideal(brace, sub.members)


def is_perfect(brace: SkewBrace) -> bool:
    """Whether the brace equals its derived ideal."""
    return derived_ideal(brace).order == brace.order


def socle(brace: SkewBrace) -> BraceIdeal:
    """Elements with a * x = 1 for all x, intersected with the dot center."""
    star_rows_trivial = (brace.star_table == 0).all(axis=1)
    mask = star_rows_trivial & brace.dot_center_mask
    return _make_ideal(brace, np.flatnonzero(mask).tolist())


def annihilator(brace: SkewBrace) -> BraceIdeal:
    """Socle elements that are also central for circ.

    Computed through both equivalent characterizations (socle intersected
    with the circ center, and two-sided star triviality inside the dot
    center) and cross-checked.
    """
    star_rows = (brace.star_table == 0).all(axis=1)
    star_cols = (brace.star_table == 0).all(axis=0)
    via_circ_center = star_rows & brace.dot_center_mask & brace.circ_center_mask
    via_two_sided_star = star_rows & star_cols & brace.dot_center_mask
    if not np.array_equal(via_circ_center, via_two_sided_star):
        raise InternalInconsistency("annihilator characterizations disagree")
    return _make_ideal(brace, np.flatnonzero(via_circ_center).tolist())


def quotient_brace(brace: SkewBrace, ideal) -> tuple[SkewBrace, GroupHom]:
    """Brace on the cosets of an ideal, plus the projection homomorphism.

    Representatives are minimal indices; the projection preserves both
    operations (the returned GroupHom is stated on the dot tables).
    """
    members = ideal.members if isinstance(ideal, (BraceIdeal, Subgroup)) else tuple(ideal)
    ok, report = is_ideal(brace, members)
    if not ok:
        raise NotAnIdeal(f"quotient by a non-ideal: {report.details[:1]}", report)
    sub = Subgroup(brace.dot, tuple(sorted({int(x) for x in members})))
    reps, proj = coset_projection(brace.dot, sub)
    qdot = proj[np.asarray(brace.dot.mul, dtype=np.int64)[np.ix_(reps, reps)]]
    qcirc = proj[np.asarray(brace.circ.mul, dtype=np.int64)[np.ix_(reps, reps)]]
    quotient = assemble_brace(
        _trusted_table(qdot), _trusted_table(qcirc), name=f"{brace.name}/I" if brace.name else ""
    )
    return quotient, GroupHom(brace.dot, quotient.dot, _freeze(proj))


def second_annihilator(brace: SkewBrace) -> BraceIdeal:
    """Preimage of the annihilator of the quotient by the annihilator."""
    ann = annihilator(brace)
    quotient, proj = quotient_brace(brace, ann)
    ann_q = annihilator(quotient)
    mask = np.zeros(quotient.order, dtype=bool)
    mask[list(ann_q.members)] = True
    members = np.flatnonzero(mask[np.asarray(proj.image_of, dtype=np.int64)])
    ideal = _make_ideal(brace, members.tolist())
    if not set(ann.members) <= set(ideal.members):
        raise InternalInconsistency("second annihilator does not contain the annihilator")
    return ideal


def is_two_sided(brace: SkewBrace, *, seed: int | None = None) -> tuple[bool, tuple[int, int, int] | None]:
    """Check the mirrored relation (b . c) o a = (b o a) . a^-1 . (c o a).

    Exhaustive up to order 512, seeded-sampled above; returns the first
    violating (a, b, c) on failure.
    """
    D = np.asarray(brace.dot.mul, dtype=np.int64)
    C = np.asarray(brace.circ.mul, dtype=np.int64)
    inv = np.asarray(brace.dot.inv, dtype=np.int64)
    res = sweep_relation(
        brace.order,
        3,
        lambda a, b, c: C[D[b, c], a] != D[D[C[b, a], inv[a]], C[c, a]],
        seed=seed,
    )
    witness = res.witnesses[0] if res.witnesses else None
    return res.ok, witness
