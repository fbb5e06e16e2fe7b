"""Shared hypothesis strategies and corpus generators."""

from __future__ import annotations

import itertools
import random

from hypothesis import strategies as st

from counterplay.formula import (
    Atom,
    BRecur,
    CoBRecur,
    CoPRecur,
    ImpKind,
    IntImp,
    Limp,
    Neg,
    ParConj,
    ParDisj,
    PRecur,
)

ATOMS = [Atom(n) for n in ("P", "Q", "R")]


def int_formulas(kind=ImpKind.BIMP, max_leaves: int = 8, atoms=None):
    base = st.sampled_from(atoms or ATOMS)
    return st.recursive(
        base,
        lambda sub: st.builds(lambda a, b: IntImp(kind, a, b), sub, sub),
        max_leaves=max_leaves,
    )


def affine_formulas(max_leaves: int = 8, atoms=None):
    base = st.sampled_from(atoms or ATOMS)

    def extend(sub):
        unary = st.one_of(
            st.builds(Neg, sub),
            st.builds(BRecur, sub),
            st.builds(CoBRecur, sub),
            st.builds(PRecur, sub),
            st.builds(CoPRecur, sub),
        )
        nary = st.lists(sub, min_size=2, max_size=3).map(tuple)
        return st.one_of(
            unary,
            st.builds(ParConj, nary),
            st.builds(ParDisj, nary),
            st.builds(Limp, sub, sub),
        )

    return st.recursive(base, extend, max_leaves=max_leaves)


def enumerate_int_formulas(num_atoms: int, max_imps: int, kind=ImpKind.BIMP):
    """Every formula over the first ``num_atoms`` atoms with <= max_imps implications."""
    atoms = [Atom(n) for n in ("P", "Q", "R", "S", "T")[:num_atoms]]
    by_size: list[list] = [list(atoms)]
    for size in range(1, max_imps + 1):
        layer = []
        for lsize in range(size):
            rsize = size - 1 - lsize
            for left in by_size[lsize]:
                for right in by_size[rsize]:
                    layer.append(IntImp(kind, left, right))
        by_size.append(layer)
    return list(itertools.chain.from_iterable(by_size))


def random_int_formula(rng: random.Random, imps: int, atoms, kind=ImpKind.BIMP):
    if imps == 0:
        return rng.choice(atoms)
    lsize = rng.randrange(imps)
    return IntImp(
        kind,
        random_int_formula(rng, lsize, atoms, kind),
        random_int_formula(rng, imps - 1 - lsize, atoms, kind),
    )


def random_larger_corpus(n: int = 500, seed: int = 2024, kind=ImpKind.BIMP):
    """Random formulas a notch larger than the exhaustive sweep."""
    rng = random.Random(seed)
    atoms = [Atom(x) for x in ("P", "Q", "R", "S")]
    out = []
    for _ in range(n):
        out.append(random_int_formula(rng, rng.randint(6, 7), atoms, kind))
    return out
