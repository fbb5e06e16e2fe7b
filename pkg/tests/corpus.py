"""Shared formula corpora for the acceptance suite.

The exhaustive tier covers every implicative formula over three atoms
with at most five implications; the random tier adds larger seeded
samples.  The curated refuted tier drives the end-to-end play pipeline,
so it is kept at a size where a full sweep with eight adversaries stays
within desk-scale budgets.
"""

from __future__ import annotations

import random

from counterplay.calculus import int_prove
from counterplay.formula import Atom, ImpKind, IntImp, parse_int

from strategies import enumerate_int_formulas, random_int_formula, random_larger_corpus

PEIRCE = "((P -o Q) -o P) -o P"
S_FORMULA = "(P -o (Q -o R)) -o ((P -o Q) -o (P -o R))"
CLASSICS_REFUTED = [
    PEIRCE,
    "P",
    "(P -o Q) -o Q",
    "((P -o Q) -o Q) -o P",
    "(P -o Q) -o (Q -o P)",
]
CLASSICS_PROVED = [
    S_FORMULA,
    "P -o P",
    "P -o (Q -o P)",
    "Q -o ((Q -o R) -o R)",
]


def canon(f):
    """Canonical atom renaming; decisions are invariant under it."""
    mapping: dict[str, str] = {}

    def walk(g):
        if isinstance(g, Atom):
            if g.name not in mapping:
                mapping[g.name] = f"A{len(mapping)}"
            return Atom(mapping[g.name])
        return IntImp(g.kind, walk(g.left), walk(g.right))

    return walk(f)


def a1_corpus():
    return enumerate_int_formulas(3, 5) + random_larger_corpus(500)


def a1_unique():
    unique = {}
    for f in a1_corpus():
        unique.setdefault(canon(f), f)
    return list(unique)


_CURATED_CACHE: list | None = None


def curated_refuted(kind=ImpKind.BIMP):
    """Refuted formulas for the play pipeline: every two-atom formula with
    up to three implications, the refuted classics, and a seeded sample of
    larger ones."""
    global _CURATED_CACHE
    if kind is ImpKind.BIMP and _CURATED_CACHE is not None:
        return _CURATED_CACHE
    out = []
    seen = set()
    for f in enumerate_int_formulas(2, 3, kind):
        cf = canon(f)
        if cf in seen:
            continue
        seen.add(cf)
        if not int_prove(f).is_proved:
            out.append(f)
    for text in CLASSICS_REFUTED:
        f = parse_int(text.replace("-o", kind.op), kind)
        if canon(f) not in seen:
            seen.add(canon(f))
            out.append(f)
    rng = random.Random(7)
    atoms = [Atom(x) for x in ("P", "Q", "R")]
    added = 0
    while added < 30:
        f = random_int_formula(rng, rng.randint(4, 5), atoms, kind)
        cf = canon(f)
        if cf in seen:
            continue
        seen.add(cf)
        if not int_prove(f).is_proved:
            out.append(f)
            added += 1
    if kind is ImpKind.BIMP:
        _CURATED_CACHE = out
    return out
