"""Line-based text formats for braces and matrix fixtures.

Brace files::

    skewbrace v1 <n>
    # <key>: <value>          (optional metadata comments)
    <n dot rows, space-separated 0-based indices>
    circ
    <n circ rows>

``#`` begins a comment anywhere.  The identity must be index 0 in both
tables; a loader finding it elsewhere relabels jointly and records the
original index under the ``relabeled-identity`` metadata key.

Matrix files are a sequence of blocks ``matrix <p> <rows> <cols>`` followed
by row-major entries, whitespace-separated across any number of lines.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .braces import SkewBrace, check_skew_brace
from .errors import FormatError, NotABrace
from .fplinalg import FpMatrix
from .reports import VerificationReport

FORMAT_VERSION = "v1"


@dataclass(frozen=True)
class BraceDocument:
    """Parsed or to-be-serialized brace file contents."""

    order: int
    dot_rows: tuple[tuple[int, ...], ...]
    circ_rows: tuple[tuple[int, ...], ...]
    metadata: tuple[tuple[str, str], ...] = ()

    def metadata_dict(self) -> dict[str, str]:
        return dict(self.metadata)

    def to_text(self) -> str:
        lines = [f"skewbrace {FORMAT_VERSION} {self.order}"]
        for key, value in sorted(self.metadata):
            lines.append(f"# {key}: {value}")
        lines.extend(" ".join(str(x) for x in row) for row in self.dot_rows)
        lines.append("circ")
        lines.extend(" ".join(str(x) for x in row) for row in self.circ_rows)
        return "\n".join(lines) + "\n"

    def to_brace(self, *, seed: int | None = None) -> tuple[SkewBrace | None, VerificationReport]:
        name = self.metadata_dict().get("name", "")
        return check_skew_brace(self.dot_rows, self.circ_rows, seed=seed, name=name)


def document_from_brace(brace: SkewBrace, metadata: dict[str, str] | None = None) -> BraceDocument:
    meta = dict(metadata or {})
    if brace.name and "name" not in meta:
        meta["name"] = brace.name
    return BraceDocument(
        order=brace.order,
        dot_rows=tuple(tuple(int(x) for x in row) for row in brace.dot.mul),
        circ_rows=tuple(tuple(int(x) for x in row) for row in brace.circ.mul),
        metadata=tuple(sorted(meta.items())),
    )


def serialize_brace(brace: SkewBrace, metadata: dict[str, str] | None = None) -> str:
    """Canonical text form; equal braces with equal metadata serialize identically."""
    return document_from_brace(brace, metadata).to_text()


def parse_brace_document(text: str) -> BraceDocument:
    metadata: list[tuple[str, str]] = []
    header: tuple[int, int] | None = None  # (line number, order)
    rows: list[tuple[int, ...]] = []
    dot_rows: list[tuple[int, ...]] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if ":" in body:
                key, _, value = body.partition(":")
                metadata.append((key.strip(), value.strip()))
            continue
        if not stripped:
            continue
        if header is None:
            parts = stripped.split()
            if len(parts) != 3 or parts[0] != "skewbrace":
                raise FormatError(lineno, "expected header 'skewbrace v1 <n>'")
            if parts[1] != FORMAT_VERSION:
                raise FormatError(lineno, f"unsupported format version {parts[1]!r}")
            try:
                order = int(parts[2])
            except ValueError:
                raise FormatError(lineno, f"bad order {parts[2]!r}") from None
            if order < 1:
                raise FormatError(lineno, "order must be positive")
            header = (lineno, order)
            continue
        if stripped == "circ":
            if dot_rows is not None:
                raise FormatError(lineno, "duplicate 'circ' separator")
            if len(rows) != header[1]:
                raise FormatError(lineno, f"expected {header[1]} dot rows, got {len(rows)}")
            dot_rows = rows
            rows = []
            continue
        try:
            row = tuple(int(tok) for tok in stripped.split())
        except ValueError:
            raise FormatError(lineno, f"non-integer table entry in {stripped!r}") from None
        if len(row) != header[1]:
            raise FormatError(lineno, f"row has {len(row)} entries, expected {header[1]}")
        if any(x < 0 or x >= header[1] for x in row):
            raise FormatError(lineno, "table entry out of range")
        rows.append(row)
    if header is None:
        raise FormatError(None, "empty file")
    if dot_rows is None:
        raise FormatError(None, "missing 'circ' separator")
    if len(rows) != header[1]:
        raise FormatError(None, f"expected {header[1]} circ rows, got {len(rows)}")
    return BraceDocument(header[1], tuple(dot_rows), tuple(rows), tuple(metadata))


def _raw_identity_index(rows: tuple[tuple[int, ...], ...]) -> int | None:
    n = len(rows)
    arr = np.asarray(rows, dtype=np.int64)
    ref = np.arange(n)
    left = (arr == ref[None, :]).all(axis=1)
    right = (arr == ref[:, None]).all(axis=0)
    both = np.flatnonzero(left & right)
    return int(both[0]) if both.size == 1 else None


def load_brace_document(
    text: str, *, seed: int | None = None
) -> tuple[SkewBrace | None, BraceDocument, VerificationReport]:
    """Parse, validate, and record a joint identity relabeling in metadata."""
    doc = parse_brace_document(text)
    brace, report = doc.to_brace(seed=seed)
    raw_identity = _raw_identity_index(doc.dot_rows)
    if raw_identity not in (None, 0):
        meta = doc.metadata_dict()
        meta["relabeled-identity"] = str(raw_identity)
        doc = BraceDocument(doc.order, doc.dot_rows, doc.circ_rows, tuple(sorted(meta.items())))
    return brace, doc, report


def parse_brace_text(text: str, *, seed: int | None = None) -> SkewBrace:
    """Parse and validate; raises FormatError or NotABrace with the evidence."""
    brace, _, report = load_brace_document(text, seed=seed)
    if brace is None:
        raise NotABrace(f"brace file failed validation: {report.details[:1]}", report)
    return brace


def parse_brace_file(path, *, seed: int | None = None) -> SkewBrace:
    return parse_brace_text(Path(path).read_text(encoding="utf-8"), seed=seed)


def write_brace_file(path, brace: SkewBrace, metadata: dict[str, str] | None = None) -> None:
    Path(path).write_text(serialize_brace(brace, metadata), encoding="utf-8")


def serialize_matrices(matrices) -> str:
    blocks = []
    for m in matrices:
        lines = [f"matrix {m.p} {m.rows} {m.cols}"]
        lines.extend(" ".join(str(int(x)) for x in row) for row in m.entries)
        blocks.append("\n".join(lines))
    return "\n".join(blocks) + "\n"


def parse_matrix_text(text: str) -> list[FpMatrix]:
    matrices: list[FpMatrix] = []
    header: tuple[int, int, int] | None = None
    entries: list[int] = []

    def flush(lineno):
        nonlocal header, entries
        if header is None:
            return
        p, rows, cols = header
        if len(entries) != rows * cols:
            raise FormatError(lineno, f"matrix needs {rows * cols} entries, got {len(entries)}")
        matrices.append(
            FpMatrix.from_rows(p, np.asarray(entries, dtype=np.int64).reshape(rows, cols))
        )
        header, entries = None, []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("matrix"):
            flush(lineno)
            parts = stripped.split()
            if len(parts) != 4:
                raise FormatError(lineno, "expected 'matrix <p> <rows> <cols>'")
            try:
                header = (int(parts[1]), int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError(lineno, "non-integer matrix header field") from None
            continue
        if header is None:
            raise FormatError(lineno, "entries before any 'matrix' header")
        try:
            entries.extend(int(tok) for tok in stripped.split())
        except ValueError:
            raise FormatError(lineno, f"non-integer matrix entry in {stripped!r}") from None
    flush(None)
    if not matrices:
        raise FormatError(None, "no matrices in file")
    return matrices


def parse_matrix_file(path) -> list[FpMatrix]:
    return parse_matrix_text(Path(path).read_text(encoding="utf-8"))
