#!/usr/bin/env python3
"""Sweep the bundled corpus and tabulate the annihilator-series diagnostics.

For every corpus brace this runs the identity suite, the two always-true
product checks, the criterion equivalences, and the defect diagnostic, then
prints one row per brace.  The doctored braces are validated last to show
their rejection witnesses.

Usage: python scripts/corpus_sweep.py [--skip-large]
"""

from __future__ import annotations

import argparse
import time

from bracelab import check_skew_brace
from bracelab.fixtures import corpus_braces, doctored_braces
from bracelab.grun import grun_defect, identity_suite


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--skip-large", action="store_true", help="skip the order 96/384 instances")
    args = parser.parse_args()

    start = time.time()
    header = f"{'brace':34} {'n':>4} {'|Ann|':>5} {'|Ann2|':>6} {'|A*A|':>5} {'perf':>4} {'2sided':>6} {'defect':>6} {'grun':>5} {'ids':>12}"
    print(header)
    print("-" * len(header))
    for brace in corpus_braces(include_large=not args.skip_large):
        ids = identity_suite(brace)
        report = grun_defect(brace)
        print(
            f"{report.brace_id:34} {report.order:>4} {report.ann_order:>5} "
            f"{report.ann2_order:>6} {report.order if report.is_perfect else '<':>5} "
            f"{str(report.is_perfect):>4} {str(report.is_two_sided):>6} "
            f"{len(report.defect_set):>6} {str(report.grun_holds):>5} {ids.status:>12}"
        )

    print()
    for name, dot, circ in doctored_braces():
        brace, report = check_skew_brace(dot, circ)
        assert brace is None
        kind, witness = report.details[0]
        print(f"rejected {name}: {kind} witness {witness}")
    print(f"\nswept in {time.time() - start:.1f}s")


if __name__ == "__main__":
    main()
