#!/usr/bin/env python3
"""Corpus sweep: decide every small formula two ways and report stats.

Runs the prover and the bounded semantic search over the exhaustive
three-atom corpus (canonical representatives) and prints agreement
counts, timing, and the distribution of countermodel sizes.
"""

import sys
import time
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from strategies import enumerate_int_formulas  # noqa: E402

from counterplay.calculus import int_prove  # noqa: E402
from counterplay.formula import Atom, IntImp, int_subformulas  # noqa: E402
from counterplay.kripke import bounded_countermodel_search  # noqa: E402


def canon(f):
    mapping = {}

    def walk(g):
        if isinstance(g, Atom):
            if g.name not in mapping:
                mapping[g.name] = f"A{len(mapping)}"
            return Atom(mapping[g.name])
        return IntImp(g.kind, walk(g.left), walk(g.right))

    return walk(f)


def main() -> int:
    corpus = enumerate_int_formulas(3, 5)
    unique = {}
    for f in corpus:
        unique.setdefault(canon(f), None)
    print(f"{len(corpus)} formulas, {len(unique)} canonical representatives")
    t0 = time.time()
    sizes = Counter()
    proved = 0
    mismatches = 0
    for f in unique:
        is_proved = int_prove(f).is_proved
        model = bounded_countermodel_search(f, len(int_subformulas(f)))
        if is_proved != (model is None):
            mismatches += 1
        if is_proved:
            proved += 1
        else:
            sizes[len(model.worlds)] += 1
    dt = time.time() - t0
    print(f"decided both ways in {dt:.1f}s ({dt / len(unique) * 1000:.2f} ms each)")
    print(f"proved: {proved}  refuted: {len(unique) - proved}  mismatches: {mismatches}")
    print("countermodel sizes:", dict(sorted(sizes.items())))
    return 0 if mismatches == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
