"""Semidirect products of skew braces and the bundled counterexample builders.

The flagship construction takes a trivial brace on a vector space (Z/p)^n,
a perfect skew brace C acting through matrices, and produces the semidirect
product brace.  With a suitable matrix image the result is perfect while the
annihilator of its central quotient stays nontrivial.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .braces import (
    SkewBrace,
    annihilator,
    brace_from_tables,
    derived_ideal,
    is_perfect,
)
from .errors import (
    ConstructionInvalid,
    DimensionMismatch,
    InvalidAction,
    NoSurjection,
    NotABrace,
    PreconditionFailed,
    SizeExceeded,
)
from .fplinalg import (
    FpMatrix,
    FpSubspace,
    MatrixGroup,
    fixed_space,
    kernel_image,
    _require_prime,
)
from .grun import GrunReport, grun_defect
from .groups import GroupHom, find_surjection

# Vector braces are kept small enough for exhaustive downstream checks.
MAX_VECTOR_ORDER = 4096


@dataclass(frozen=True)
class SemidirectElement:
    """A pair (b, c) and its flattened index b + |B| * c."""

    b: int
    c: int
    base_order: int

    @property
    def index(self) -> int:
        return self.b + self.base_order * self.c

    @classmethod
    def from_index(cls, index: int, base_order: int) -> "SemidirectElement":
        return cls(index % base_order, index // base_order, base_order)


def vector_index(p: int, coords) -> int:
    """Base-p little-endian encoding; coordinate 0 is the least significant."""
    return int(sum(int(c) % p * p**k for k, c in enumerate(coords)))


def vector_coords(p: int, n: int, index: int) -> tuple[int, ...]:
    return tuple((index // p**k) % p for k in range(n))


@dataclass(frozen=True, eq=False)
class BraceAction:
    """An action of (C, o) on a brace B by automorphisms of both operations.

    ``perms[c]`` is the permutation of B-indices by which c acts.
    """

    acting: SkewBrace
    target: SkewBrace
    perms: np.ndarray


def brace_action(acting: SkewBrace, target: SkewBrace, perms) -> BraceAction:
    """Validate and wrap an action table.

    Checks that c -> perms[c] is a homomorphism out of (C, o) and that every
    permutation is an automorphism of both operations of B.
    """
    perms = np.asarray(perms, dtype=np.int64)
    nc, nb = acting.order, target.order
    if perms.shape != (nc, nb):
        raise DimensionMismatch(f"action table must have shape ({nc}, {nb})")
    ref = np.arange(nb)
    for c in range(nc):
        sigma = perms[c]
        if not np.array_equal(np.sort(sigma), ref):
            raise InvalidAction(c, ("not-a-permutation",))
        if sigma[0] != 0:
            raise InvalidAction(c, ("identity-not-fixed",))
        for label, table in (("dot", target.dot), ("circ", target.circ)):
            tbl = np.asarray(table.mul, dtype=np.int64)
            bad = tbl[sigma[:, None], sigma[None, :]] != sigma[tbl]
            if bad.any():
                x, y = np.argwhere(bad)[0]
                raise InvalidAction(c, (f"not-{label}-automorphism", int(x), int(y)))
    circ_c = np.asarray(acting.circ.mul, dtype=np.int64)
    for c1 in range(nc):
        blended = perms[c1][perms]
        expected = perms[circ_c[c1]]
        bad = blended != expected
        if bad.any():
            c2 = int(np.argwhere(bad.any(axis=1))[0][0])
            raise InvalidAction(c1, ("not-a-homomorphism", c2))
    return BraceAction(acting, target, perms)


def trivial_action(acting: SkewBrace, target: SkewBrace) -> BraceAction:
    perms = np.tile(np.arange(target.order, dtype=np.int64), (acting.order, 1))
    return BraceAction(acting, target, perms)


def semidirect_product(
    base: SkewBrace, acting: SkewBrace, action: BraceAction, *, name: str = ""
) -> SkewBrace:
    """The skew brace on B x C with componentwise dot and twisted circ.

    (b1, c1) . (b2, c2) = (b1 . b2, c1 . c2)
    (b1, c1) o (b2, c2) = (b1 o phi_{c1}(b2), c1 o c2)

    The flattened index of (b, c) is b + |B| * c.  The output is validated
    as a skew brace (exhaustively up to order 512).
    """
    if action.acting is not acting and action.acting != acting:
        raise DimensionMismatch("action was built for a different acting brace")
    if action.target is not base and action.target != base:
        raise DimensionMismatch("action was built for a different base brace")
    nb, nc = base.order, acting.order
    n = nb * nc
    idx = np.arange(n, dtype=np.int64)
    bb, cc = idx % nb, idx // nb
    DB = np.asarray(base.dot.mul, dtype=np.int64)
    CB = np.asarray(base.circ.mul, dtype=np.int64)
    DC = np.asarray(acting.dot.mul, dtype=np.int64)
    CC = np.asarray(acting.circ.mul, dtype=np.int64)
    perms = np.asarray(action.perms, dtype=np.int64)

    b1, b2 = bb[:, None], bb[None, :]
    c1, c2 = cc[:, None], cc[None, :]
    dot = DB[b1, b2] + nb * DC[c1, c2]
    circ = CB[b1, perms[c1, b2]] + nb * CC[c1, c2]
    label = name or f"({base.name or nb}) x ({acting.name or nc})"
    brace = brace_from_tables(dot, circ, name=label)
    return brace


def vector_trivial_brace(p: int, n: int) -> SkewBrace:
    """The trivial brace on the additive group of (Z/p)^n.

    Element indices encode vectors in base-p little-endian digits; the zero
    vector is index 0.
    """
    _require_prime(p)
    if n < 1 or p**n > MAX_VECTOR_ORDER:
        raise SizeExceeded(f"vector space of order {p}**{n} is out of range")
    size = p**n
    weights = p ** np.arange(n, dtype=np.int64)
    digits = (np.arange(size, dtype=np.int64)[:, None] // weights[None, :]) % p
    table = np.empty((size, size), dtype=np.int64)
    block = max(1, (1 << 20) // size)
    for start in range(0, size, block):
        rows = digits[start : start + block]
        summed = (rows[:, None, :] + digits[None, :, :]) % p
        table[start : start + block] = summed @ weights
    return brace_from_tables(table, table, name=f"F{p}^{n}-trivial")


def matrix_action(
    acting: SkewBrace, rep: GroupHom, group: MatrixGroup, base: SkewBrace
) -> BraceAction:
    """Action of (C, o) on a vector trivial brace through a matrix image.

    ``rep`` maps the circ group of ``acting`` onto the abstract table of
    ``group``; each matrix acts on vector indices by left multiplication.
    """
    p, dim = group.p, group.dim
    if base.order != p**dim:
        raise DimensionMismatch(
            f"base order {base.order} does not match {p}**{dim}"
        )
    if base.dot != base.circ or not base.dot.is_abelian:
        raise DimensionMismatch("base must be a trivial brace on an abelian group")
    if rep.source != acting.circ:
        raise DimensionMismatch("representation domain is not the acting circ group")
    if rep.target != group.group_table:
        raise DimensionMismatch("representation target is not the given matrix group")

    weights = p ** np.arange(dim, dtype=np.int64)
    digits = (np.arange(base.order, dtype=np.int64)[:, None] // weights[None, :]) % p
    mats = np.stack([m.entries for m in group.elements])
    images = np.einsum("gij,bj->gbi", mats, digits) % p
    perm_of_matrix = images @ weights
    perms = perm_of_matrix[np.asarray(rep.image_of, dtype=np.int64)]
    return brace_action(acting, base, perms)


# The order-24 perfect brace with trivial annihilator: additive group
# F_3 x F_2^3, circ built from an explicit lambda map into the automorphisms
# (a sign on the F_3 part, a 3x3 matrix over F_2 on the rest).  Elements are
# indexed as v + 3*(x1 + 2*x2 + 4*x3).
_SHIFT3 = np.array([[0, 1, 0], [1, 1, 0], [0, 1, 1]])
_SWAP2 = np.array([[0, 1], [1, 0]])
_STEP2 = np.array([[0, 1], [1, 1]])


def _pow2(matrix: np.ndarray, k: int, order: int) -> np.ndarray:
    out = np.eye(matrix.shape[0], dtype=np.int64)
    for _ in range(k % order):
        out = (out @ matrix) % 2
    return out


def example1_brace() -> SkewBrace:
    """The bundled order-24 brace: perfect, trivial annihilator, circ group S4.

    Exponent conventions: the quadratic exponent x3 - x1*x2 is evaluated in Z
    and reduced mod 2 (mod 3 for the sign on the F_3 part); matrix powers are
    reduced mod the matrix order.  The shift matrix acts with exponent +v and
    the 2x2 step matrix inside the affine row with exponent -v; these opposite
    signs are what make the circ operation associative.
    """
    n = 24
    elems = [(v, x1, x2, x3) for x3 in range(2) for x2 in range(2) for x1 in range(2) for v in range(3)]
    dot = np.empty((n, n), dtype=np.int64)
    lam_tables = []
    for a_idx, (v, x1, x2, x3) in enumerate(elems):
        q = x3 - x1 * x2
        sign = 1 if q % 2 == 0 else 2
        top = _pow2(_SWAP2, q, 2)
        eps = (np.array([x1, x2]) @ _pow2(_STEP2, -v, 3) @ _pow2(_SWAP2, 1 + q, 2)) % 2
        block = np.zeros((3, 3), dtype=np.int64)
        block[:2, :2] = top
        block[2, :2] = eps
        block[2, 2] = 1
        matrix = (_pow2(_SHIFT3, v, 3) @ block) % 2
        lam_tables.append((sign, matrix))

    def encode(v, x):
        return v + 3 * (x[0] + 2 * x[1] + 4 * x[2])

    circ = np.empty((n, n), dtype=np.int64)
    for a_idx, (va, x1a, x2a, x3a) in enumerate(elems):
        sign, matrix = lam_tables[a_idx]
        for b_idx, (vb, x1b, x2b, x3b) in enumerate(elems):
            dot[a_idx, b_idx] = encode((va + vb) % 3, ((x1a + x1b) % 2, (x2a + x2b) % 2, (x3a + x3b) % 2))
            w = (sign * vb) % 3
            y = (matrix @ np.array([x1b, x2b, x3b])) % 2
            lam_b = encode(w, tuple(int(t) for t in y))
            vl, x1l, x2l, x3l = elems[lam_b]
            circ[a_idx, b_idx] = encode(
                (va + vl) % 3, ((x1a + x1l) % 2, (x2a + x2l) % 2, (x3a + x3l) % 2)
            )
    try:
        return brace_from_tables(dot, circ, name="example1")
    except NotABrace as exc:  # transcription bug; must not happen
        raise ConstructionInvalid(str(exc)) from exc


def build_counterexample(
    acting: SkewBrace, target: MatrixGroup, b_dims: tuple[int, int]
) -> tuple[SkewBrace, GrunReport]:
    """Assemble (Z/p)^n x| C for a matrix image and run the defect diagnostic.

    Requires C perfect with trivial annihilator and a surjection of its circ
    group onto the matrix group; the first surjection in the deterministic
    search order is used (only the image matters for the invariants).
    """
    p, n = b_dims
    if target.p != p or target.dim != n:
        raise DimensionMismatch("matrix group does not act on the requested space")
    if not is_perfect(acting):
        raise PreconditionFailed("acting brace is not perfect")
    if annihilator(acting).order != 1:
        raise PreconditionFailed("acting brace has nontrivial annihilator")
    rep = find_surjection(acting.circ, target.group_table)
    if rep is None:
        raise NoSurjection(
            f"no surjection from the circ group onto the order-{target.order} matrix group"
        )
    base = vector_trivial_brace(p, n)
    action = matrix_action(acting, rep, target, base)
    brace = semidirect_product(
        base, acting, action, name=f"F{p}^{n}:({acting.name or acting.order})"
    )
    report = grun_defect(brace)
    return brace, report


@dataclass(frozen=True)
class SemidirectPrediction:
    """Predicted invariants of B x| C read off the matrix image alone.

    The derived ideal is (span of the images of xi - id over the image) x C;
    the annihilator is Fix(B) x {1}.
    """

    derived_subspace: FpSubspace
    derived_includes_acting: bool
    ann_subspace: FpSubspace


def predict_semidirect_invariants(
    p: int,
    n: int,
    group: MatrixGroup,
    *,
    c_perfect: bool,
    ann_c_trivial: bool,
    kernel_trivial: bool,
) -> SemidirectPrediction:
    """Matrix-level predictions for the derived ideal and annihilator.

    Valid when the acting brace is perfect and either has trivial
    annihilator or acts faithfully.
    """
    if group.p != p or group.dim != n:
        raise DimensionMismatch("matrix group does not act on the requested space")
    if not (c_perfect and (ann_c_trivial or kernel_trivial)):
        raise PreconditionFailed(
            "predictions require a perfect acting brace with trivial annihilator "
            "or trivial action kernel"
        )
    derived = FpSubspace.zero(p, n)
    for element in group.elements:
        _, image = kernel_image(element.minus_identity())
        derived = derived.sum_with(image)
    return SemidirectPrediction(
        derived_subspace=derived,
        derived_includes_acting=True,
        ann_subspace=fixed_space(group),
    )


def check_semidirect_prediction(
    prediction: SemidirectPrediction, brace: SkewBrace, p: int, n: int, acting_order: int
) -> bool:
    """Compare predicted member sets against brute-force invariants."""
    nb = p**n
    if brace.order != nb * acting_order:
        raise DimensionMismatch("brace order does not match the prediction shape")
    derived_vec_indices = sorted(
        vector_index(p, v) for v in prediction.derived_subspace.enumerate_vectors()
    )
    predicted_derived = tuple(
        sorted(b + nb * c for b in derived_vec_indices for c in range(acting_order))
    )
    predicted_ann = tuple(
        sorted(vector_index(p, v) for v in prediction.ann_subspace.enumerate_vectors())
    )
    actual_derived = derived_ideal(brace).members
    actual_ann = annihilator(brace).members
    return predicted_derived == actual_derived and predicted_ann == actual_ann
