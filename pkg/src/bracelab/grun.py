"""Verification of the star-product identity suite and the annihilator theorems.

The library's documented theorems, checked here by brute force on every
brace it touches:

  T1. Ann2(A) * (A*A) = 1 and [Ann2(A), A*A] = 1 for every skew brace A.
  T2. (A*A) * Ann2(A) = 1 for every two-sided skew brace A.

T1 and T2 together recover the classical fact that a perfect group has a
centerless central quotient (take the almost-trivial brace on the group).
The defect subgroup (A*A) * Ann2(A) measures how far a brace is from T2;
it can be nontrivial for braces that are not two-sided.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._checking import sweep_relation
from .braces import (
    SkewBrace,
    annihilator,
    derived_ideal,
    is_two_sided,
    quotient_brace,
    second_annihilator,
    star_subgroup,
)
from .errors import EquivalenceViolation, TheoremViolation
from .groups import commutator_subgroup
from .reports import VerificationReport, combine_results


@dataclass(frozen=True)
class GrunReport:
    """Summary of the annihilator-series diagnostics for one brace."""

    brace_id: str
    order: int
    is_perfect: bool
    is_two_sided: bool
    ann_order: int
    ann2_order: int
    defect_set: tuple[int, ...]
    thm1_status: str
    cor_equivalence_status: str
    grun_holds: bool

    @property
    def defect_nontrivial(self) -> bool:
        return len(self.defect_set) > 1

    def to_dict(self) -> dict:
        return {
            "brace_id": self.brace_id,
            "order": self.order,
            "perfect": self.is_perfect,
            "two_sided": self.is_two_sided,
            "ann_order": self.ann_order,
            "ann2_order": self.ann2_order,
            "defect_order": len(self.defect_set),
            "defect_set": list(self.defect_set),
            "thm1_status": self.thm1_status,
            "cor_equivalence_status": self.cor_equivalence_status,
            "grun_holds": self.grun_holds,
        }


def _tables(brace: SkewBrace):
    D = np.asarray(brace.dot.mul, dtype=np.int64)
    C = np.asarray(brace.circ.mul, dtype=np.int64)
    inv = np.asarray(brace.dot.inv, dtype=np.int64)
    cinv = np.asarray(brace.circ_inv, dtype=np.int64)
    L = np.asarray(brace.lam, dtype=np.int64)
    S = np.asarray(brace.star_table, dtype=np.int64)
    return D, C, inv, cinv, L, S


def _commutator_table(brace: SkewBrace) -> np.ndarray:
    D = np.asarray(brace.dot.mul, dtype=np.int64)
    inv = np.asarray(brace.dot.inv, dtype=np.int64)
    t = D[D, inv[:, None]]
    return D[t, inv[None, :]]


def identity_suite(brace: SkewBrace, mode: str | None = None, *, seed: int | None = None) -> VerificationReport:
    """Sweep the star/lambda identity suite over all (or sampled) tuples.

    Every valid brace satisfies every identity; a violation points at a
    corrupted table.  ``mode`` forces "exhaustive" or "sampled" for the
    cubic identities; by default the size policy decides.
    """
    if mode not in (None, "exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    exhaustive = None if mode is None else (mode == "exhaustive")
    n = brace.order
    D, C, inv, cinv, L, S = _tables(brace)
    K = _commutator_table(brace)
    ar = np.arange(n, dtype=np.int64)

    pair_checks = [
        ("circ-from-lambda", lambda a, b: C[a, b] != D[a, L[a, b]]),
        ("dot-from-lambda", lambda a, b: D[a, b] != C[a, L[cinv[a], b]]),
        ("star-from-lambda", lambda a, b: S[a, b] != D[L[a, b], inv[b]]),
    ]
    triple_checks = [
        (
            "star-splits-dot-products",
            lambda a, x, y: S[a, D[x, y]] != D[D[D[S[a, x], x], S[a, y]], inv[x]],
        ),
        (
            "star-splits-circ-products",
            lambda a, x, y: S[C[x, y], a] != D[D[S[x, S[y, a]], S[y, a]], S[x, a]],
        ),
        (
            "lambda-twists-star",
            lambda a, x, y: L[a, S[x, y]] != S[C[C[a, x], cinv[a]], L[a, y]],
        ),
        (
            "commutator-splits-products",
            lambda a, x, y: K[a, D[x, y]] != D[D[D[K[a, x], x], K[a, y]], inv[x]],
        ),
    ]

    parts = []
    # circ-inverse identity: the circ inverse of a equals lam[circ_inv(a)](a^-1)
    parts.append(
        (
            "circ-inverse-from-lambda",
            sweep_relation(n, 1, lambda a: cinv[a] != L[cinv[a], inv[a]]),
        )
    )
    for name, rel in pair_checks:
        parts.append((name, sweep_relation(n, 2, rel)))
    for name, rel in triple_checks:
        parts.append((name, sweep_relation(n, 3, rel, exhaustive=exhaustive, seed=seed)))
    return combine_results("identity-suite", parts)


@dataclass(frozen=True)
class MapAnalysis:
    """Homomorphism/automorphism flags for the maps attached to one element.

    phi_a(x) = a * x, pi_a(x) = [a, x], psi_a(x) = x * a, and
    iota_a(x) = a o x o abar.  ``char2_relation_holds`` reports the identity
    iota_a(x) = a . lam_a(x) . a^-1 . psi_abar(x); it is only defined for
    elements of the second annihilator and is None otherwise.
    """

    element: int
    phi_dot_hom: bool
    pi_dot_hom: bool
    psi_circ_hom: bool
    psi_dot_hom: bool
    iota_dot_aut: bool
    char2_relation_holds: bool | None


def _phi_dot_hom(brace: SkewBrace, a: int) -> bool:
    D, _, _, _, _, S = _tables(brace)
    row = S[a]
    return bool((S[a, D] == D[row[:, None], row[None, :]]).all())


def _pi_dot_hom(brace: SkewBrace, a: int) -> bool:
    D = np.asarray(brace.dot.mul, dtype=np.int64)
    K = _commutator_table(brace)
    row = K[a]
    return bool((K[a, D] == D[row[:, None], row[None, :]]).all())


def _psi_hom(brace: SkewBrace, a: int, on_dot: bool) -> bool:
    D, C, _, _, _, S = _tables(brace)
    col = S[:, a]
    domain = D if on_dot else C
    return bool((col[domain] == D[col[:, None], col[None, :]]).all())


def _iota_map(brace: SkewBrace, a: int) -> np.ndarray:
    _, C, _, cinv, _, _ = _tables(brace)
    return C[C[a], cinv[a]]


def _iota_dot_aut(brace: SkewBrace, a: int) -> bool:
    D = np.asarray(brace.dot.mul, dtype=np.int64)
    iota = _iota_map(brace, a)
    return bool((iota[D] == D[iota[:, None], iota[None, :]]).all())


def map_analysis(brace: SkewBrace, a: int) -> MapAnalysis:
    """Exhaustively evaluate the six map properties for one element."""
    D, C, inv, cinv, L, S = _tables(brace)
    ann2 = set(second_annihilator(brace).members)
    char2: bool | None = None
    if a in ann2:
        iota = _iota_map(brace, a)
        rhs = D[D[D[a, L[a]], inv[a]], S[:, cinv[a]]]
        char2 = bool((iota == rhs).all())
    return MapAnalysis(
        element=a,
        phi_dot_hom=_phi_dot_hom(brace, a),
        pi_dot_hom=_pi_dot_hom(brace, a),
        psi_circ_hom=_psi_hom(brace, a, on_dot=False),
        psi_dot_hom=_psi_hom(brace, a, on_dot=True),
        iota_dot_aut=_iota_dot_aut(brace, a),
        char2_relation_holds=char2,
    )


def char_equivalences(brace: SkewBrace) -> VerificationReport:
    """Check, for every a in Ann2(A), the three-way criterion equivalence.

    [psi_abar is a homomorphism on (A, .)]  iff  [A*A is killed by psi_abar]
    iff  [iota_a is an automorphism of (A, .)], and the last is equivalent
    to the mirrored brace relation holding with right element abar.  These
    are provable for every brace, so a failure aborts as a library bug.
    """
    D, C, inv, cinv, L, S = _tables(brace)
    ann2 = second_annihilator(brace).members
    derived = derived_ideal(brace).members
    derived_arr = np.asarray(derived, dtype=np.int64)
    all_sides_false = 0
    for a in ann2:
        abar = int(cinv[a])
        side_hom = _psi_hom(brace, abar, on_dot=True)
        side_kernel = bool((S[derived_arr, abar] == 0).all())
        side_iota = _iota_dot_aut(brace, a)
        lhs = C[D, abar]
        rhs = D[D[C[:, abar][:, None], inv[abar]], C[:, abar][None, :]]
        side_mirror = bool((lhs == rhs).all())
        if not (side_hom == side_kernel == side_iota == side_mirror):
            raise EquivalenceViolation(
                f"criterion equivalence failed at element {a}: "
                f"hom={side_hom} kernel={side_kernel} iota={side_iota} mirror={side_mirror}"
            )
        if not side_hom:
            all_sides_false += 1
    return VerificationReport(
        "criterion-equivalences",
        "pass",
        counts=(
            ("elements-checked", len(ann2)),
            ("elements-with-all-sides-false", all_sides_false),
        ),
    )


def verify_theorem1(brace: SkewBrace) -> VerificationReport:
    """Check T1: Ann2(A) * (A*A) and [Ann2(A), A*A] are both trivial.

    Both subgroups must be the identity for every valid brace; a failure
    aborts with witnesses because it can only mean an implementation bug.
    """
    ann2 = second_annihilator(brace).members
    derived = derived_ideal(brace).members
    star_part = star_subgroup(brace, ann2, derived)
    comm_part = commutator_subgroup(brace.dot, ann2, derived)
    if star_part.members != (0,):
        raise TheoremViolation(
            f"Ann2 * derived is nontrivial: members {star_part.members[:8]}"
        )
    if comm_part.members != (0,):
        raise TheoremViolation(
            f"[Ann2, derived] is nontrivial: members {comm_part.members[:8]}"
        )
    return VerificationReport(
        "annihilator-theorem-1",
        "pass",
        counts=(("ann2-order", len(ann2)), ("derived-order", len(derived))),
    )


def grun_defect(brace: SkewBrace, *, brace_id: str | None = None, seed: int | None = None) -> GrunReport:
    """Full annihilator-series diagnostic for one brace.

    Computes the defect subgroup (A*A) * Ann2(A) and whether the quotient by
    the annihilator has trivial annihilator.  Also enforces the provable
    facts: two-sided braces have trivial defect, and (definitionally) the
    central quotient is annihilator-free exactly when Ann2 = Ann.
    """
    derived = derived_ideal(brace)
    ann = annihilator(brace)
    ann2 = second_annihilator(brace)
    defect = star_subgroup(brace, derived.members, ann2.members)
    perfect = derived.order == brace.order
    two_sided, _ = is_two_sided(brace, seed=seed)

    quotient, proj = quotient_brace(brace, ann)
    ann_of_quotient = annihilator(quotient)
    grun_holds = ann_of_quotient.order == 1

    thm1 = verify_theorem1(brace)
    cor = char_equivalences(brace)

    if two_sided and defect.members != (0,):
        raise TheoremViolation(
            f"two-sided brace has nontrivial defect: {defect.members[:8]}"
        )
    if grun_holds != (ann2.order == ann.order):
        raise TheoremViolation("second annihilator disagrees with the quotient annihilator")

    return GrunReport(
        brace_id=brace_id if brace_id is not None else (brace.name or f"order-{brace.order}"),
        order=brace.order,
        is_perfect=perfect,
        is_two_sided=two_sided,
        ann_order=ann.order,
        ann2_order=ann2.order,
        defect_set=defect.members,
        thm1_status=thm1.status,
        cor_equivalence_status=cor.status,
        grun_holds=grun_holds,
    )
