"""Structured pass/fail evidence for validation and verification sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ._checking import RelationResult

PASS = "pass"
FAIL = "fail"
SAMPLED_PASS = "sampled-pass"


@dataclass(frozen=True)
class VerificationReport:
    """Evidence for one named check.

    ``witnesses`` are element index tuples that re-verify as violations.
    ``counts`` and ``details`` are ordered key/value pairs so that reports
    serialize deterministically; ``details`` labels each witness with the
    sub-check it violated.
    """

    check: str
    status: str
    witnesses: tuple[tuple[int, ...], ...] = ()
    counts: tuple[tuple[str, int], ...] = ()
    details: tuple[tuple[str, tuple[int, ...]], ...] = ()

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def count(self, key: str) -> int | None:
        for name, value in self.counts:
            if name == key:
                return value
        return None

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "status": self.status,
            "witnesses": [list(w) for w in self.witnesses],
            "counts": dict(self.counts),
            "details": [[name, list(w)] for name, w in self.details],
        }


def passing(check: str, counts: Sequence[tuple[str, int]] = (), sampled: bool = False) -> VerificationReport:
    return VerificationReport(check, SAMPLED_PASS if sampled else PASS, counts=tuple(counts))


def failing(
    check: str,
    witnesses: Sequence[tuple[int, ...]],
    counts: Sequence[tuple[str, int]] = (),
    details: Sequence[tuple[str, tuple[int, ...]]] = (),
) -> VerificationReport:
    return VerificationReport(check, FAIL, tuple(witnesses), tuple(counts), tuple(details))


def combine_results(check: str, parts: Sequence[tuple[str, RelationResult]]) -> VerificationReport:
    """Merge named relation sweeps into one report.

    The merged status is ``fail`` if any part failed, else ``sampled-pass``
    if any part was sampled, else ``pass``.
    """
    counts: list[tuple[str, int]] = []
    witnesses: list[tuple[int, ...]] = []
    details: list[tuple[str, tuple[int, ...]]] = []
    any_fail = False
    any_sampled = False
    for name, res in parts:
        counts.append((f"{name}.checked", res.checked))
        if res.violations:
            counts.append((f"{name}.violations", res.violations))
        any_fail = any_fail or not res.ok
        any_sampled = any_sampled or res.sampled
        for w in res.witnesses:
            witnesses.append(w)
            details.append((name, w))
    status = FAIL if any_fail else (SAMPLED_PASS if any_sampled else PASS)
    return VerificationReport(check, status, tuple(witnesses), tuple(counts), tuple(details))
