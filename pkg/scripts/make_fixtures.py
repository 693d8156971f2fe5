#!/usr/bin/env python3
"""Regenerate the bundled fixture files under src/bracelab/data/.

Writes the sample brace files (one valid, three deliberately broken) and
the matrix fixture files for the three counterexample images.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from bracelab import fixtures
from bracelab.braces import lift_group_to_brace
from bracelab.sbr import BraceDocument, serialize_brace, serialize_matrices

DATA = Path(__file__).resolve().parent.parent / "src" / "bracelab" / "data"


def raw_document(name: str, dot: np.ndarray, circ: np.ndarray) -> str:
    doc = BraceDocument(
        order=dot.shape[0],
        dot_rows=tuple(tuple(int(x) for x in row) for row in dot),
        circ_rows=tuple(tuple(int(x) for x in row) for row in circ),
        metadata=(("name", name),),
    )
    return doc.to_text()


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)

    s3 = fixtures.group_by_name("s3")
    brace = lift_group_to_brace(s3, "almost_trivial", name="s3-almost-trivial")
    (DATA / "s3_almost_trivial.sbr").write_text(serialize_brace(brace), encoding="utf-8")

    for name, dot, circ in fixtures.doctored_braces():
        path = DATA / f"{name.replace('-', '_')}.sbr"
        path.write_text(raw_document(name, dot, circ), encoding="utf-8")

    (DATA / "prop1.mat").write_text(
        serialize_matrices(fixtures.prop1_generators(2)), encoding="utf-8"
    )
    (DATA / "prop2.mat").write_text(
        serialize_matrices(fixtures.prop2_generators(3)), encoding="utf-8"
    )
    (DATA / "prop3.mat").write_text(
        serialize_matrices(fixtures.prop3_generators()), encoding="utf-8"
    )
    for path in sorted(DATA.iterdir()):
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
