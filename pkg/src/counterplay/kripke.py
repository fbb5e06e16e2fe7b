"""Kripke models: forcing, validation, countermodel search and extraction.

The bounded countermodel search is the semantic oracle for the prover.
It enumerates tree shapes by world count and monotone valuations in
canonical atom order, returning the first model whose root refutes the
formula.  Exhausting that enumeration for provable formulas is hopeless
at any interesting bound, so the search first decides refutability
outright with a fixpoint over semantic types (the sets of subformulas a
world of any finite tree model can force); when the fixpoint certifies
that no finite tree model refutes the formula the search reports none
immediately, otherwise the enumeration is guaranteed to terminate at the
smallest countermodel.  The certificate is purely semantic and shares
nothing with the proof search.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterator

import numpy as np

from counterplay.calculus.prover import RefutationTrace
from counterplay.formula import (
    Atom,
    IntFormula,
    IntImp,
    IntSequent,
    canonical_order,
    int_subformulas,
)


@dataclass
class KripkeModel:
    worlds: tuple[str, ...]
    access: frozenset[tuple[str, str]]
    val: dict[str, frozenset[str]]

    @property
    def root(self) -> str:
        return self.worlds[0]

    def accessible(self, p: str) -> tuple[str, ...]:
        return tuple(q for q in self.worlds if (p, q) in self.access)

    def to_json(self) -> dict[str, Any]:
        return {
            "worlds": list(self.worlds),
            "access": sorted([p, q] for p, q in self.access),
            "val": {w: sorted(self.val.get(w, ())) for w in self.worlds},
        }

    @staticmethod
    def from_json(data: dict[str, Any]) -> "KripkeModel":
        return KripkeModel(
            worlds=tuple(data["worlds"]),
            access=frozenset((p, q) for p, q in data["access"]),
            val={w: frozenset(a) for w, a in data["val"].items()},
        )


def validate(m: KripkeModel) -> list[str]:
    """Empty iff the access relation is reflexive and transitive and the
    valuation is monotone along it; each violation names the offending pair."""
    out = []
    for p in m.worlds:
        if (p, p) not in m.access:
            out.append(f"reflexivity: ({p}, {p}) missing")
    for p, q in m.access:
        for q2, r in m.access:
            if q2 == q and (p, r) not in m.access:
                out.append(f"transitivity: ({p}, {q}), ({q}, {r}) but not ({p}, {r})")
    for p, q in m.access:
        if not m.val.get(p, frozenset()) <= m.val.get(q, frozenset()):
            out.append(f"monotonicity: val({p}) not within val({q})")
    return out


def force(m: KripkeModel, p: str, f: IntFormula | IntSequent) -> bool:
    if p not in m.worlds:
        raise ValueError(f"unknown world {p!r}")
    memo: dict[tuple[str, IntFormula], bool] = {}

    def go(w: str, g: IntFormula) -> bool:
        key = (w, g)
        if key in memo:
            return memo[key]
        if isinstance(g, Atom):
            result = g.name in m.val.get(w, frozenset())
        else:
            result = all(
                go(q, g.right) for q in m.accessible(w) if go(q, g.left)
            )
        memo[key] = result
        return result

    if isinstance(f, IntSequent):
        return all(
            go(q, f.succedent)
            for q in m.accessible(p)
            if all(go(q, g) for g in f.antecedent)
        )
    return go(p, f)


# ---------------------------------------------------------------------------
# Refutability certificate: realizable semantic types
# ---------------------------------------------------------------------------

_MAX_TYPE_BITS = 22


def _type_spec(f: IntFormula):
    subs = canonical_order(int_subformulas(f))
    idx = {g: i for i, g in enumerate(subs)}
    imps = [(idx[g], idx[g.left], idx[g.right]) for g in subs if isinstance(g, IntImp)]
    return subs, idx, imps


def tree_refutable(f: IntFormula) -> bool:
    """True iff some world of some finite tree model refutes ``f``.

    A subset T of subformulas is realizable when it is the set of
    subformulas forced at some world: leaves satisfy the pointwise
    implication biconditional; an inner world forces an implication iff
    it holds locally and at every child, children being realizable
    supersets.  The least fixpoint of that rule is computed over bitmask
    vectors; ``f`` is refutable iff some realizable type misses it.
    """
    subs, idx, imps = _type_spec(f)
    k = len(subs)
    if k > _MAX_TYPE_BITS:
        raise ValueError(f"formula too large for the semantic oracle ({k} subformulas)")
    n = 1 << k
    masks = np.arange(n, dtype=np.int64)

    def bit(i: int) -> np.ndarray:
        return ((masks >> i) & 1).astype(bool)

    bits = [bit(i) for i in range(k)]
    local_true = [~(bits[ib] & ~bits[ic]) for (_, ib, ic) in imps]
    leaf_ok = np.ones(n, dtype=bool)
    pos_ok = np.ones(n, dtype=bool)
    for (i, _, _), lt in zip(imps, local_true):
        leaf_ok &= bits[i] == lt
        pos_ok &= ~bits[i] | lt
    realizable = leaf_ok.copy()
    while True:
        cond = pos_ok & ~realizable
        if not cond.any():
            break
        for (i, ib, ic), lt in zip(imps, local_true):
            need_witness = ~bits[i] & lt
            avail = realizable & ~bits[i]
            for j in range(k):
                avail = avail | avail[masks | (1 << j)]
            cond &= ~need_witness | avail
        if not cond.any():
            break
        realizable |= cond
    root_bit = bits[idx[f]]
    return bool((realizable & ~root_bit).any())


# ---------------------------------------------------------------------------
# Bounded enumerative search
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def rooted_trees(n: int) -> tuple:
    """All rooted unordered trees on n nodes, as canonically sorted child tuples."""
    if n == 1:
        return ((),)
    out = set()
    for size in range(1, n):
        for rest in rooted_trees(n - size):
            for child in rooted_trees(size):
                out.add(tuple(sorted(rest + (child,))))
    return tuple(sorted(out))


def _preorder(tree, start=0) -> tuple[list[list[int]], int]:
    """Adjacency (children by preorder index) of a nested-tuple tree."""
    children: list[list[int]] = [[]]
    counter = [start]

    def build(node, my_id):
        for sub in node:
            counter[0] += 1
            cid = counter[0]
            children.append([])
            children[my_id - start].append(cid)
            build(sub, cid)

    build(tree, start)
    return children, counter[0] - start + 1


def _monotone_valuations(children: list[list[int]], num_atoms: int) -> Iterator[list[int]]:
    """All valuations (mask per preorder node), supersets along edges.

    Masks enumerate in ascending numeric order at each node, parent first.
    """
    n = len(children)
    masks = [0] * n

    def supersets(base: int) -> list[int]:
        free = [b for b in range(num_atoms) if not base & (1 << b)]
        out = []
        for pick in range(1 << len(free)):
            m = base
            for t, b in enumerate(free):
                if pick & (1 << t):
                    m |= 1 << b
            out.append(m)
        return sorted(out)

    def assign(i: int, order: list[int]) -> Iterator[list[int]]:
        if i == len(order):
            yield list(masks)
            return
        node = order[i]
        parent_mask = masks[node]
        for m in supersets(parent_mask):
            old = masks[node]
            masks[node] = m
            for c in children[node]:
                masks[c] = m  # lower bound for the children
            yield from assign(i + 1, order)
            masks[node] = old

    order = list(range(n))
    return assign(0, order)


def _refutes(children: list[list[int]], masks: list[int], atoms: list[str], f: IntFormula) -> bool:
    n = len(children)
    desc: list[list[int]] = [[] for _ in range(n)]

    def collect(i: int) -> list[int]:
        acc = [i]
        for c in children[i]:
            acc.extend(collect(c))
        desc[i] = acc
        return acc

    collect(0)
    atom_bit = {a: 1 << i for i, a in enumerate(atoms)}
    memo: dict[tuple[int, IntFormula], bool] = {}

    def go(w: int, g: IntFormula) -> bool:
        key = (w, g)
        if key in memo:
            return memo[key]
        if isinstance(g, Atom):
            r = bool(masks[w] & atom_bit.get(g.name, 0))
        else:
            r = all(go(q, g.right) for q in desc[w] if go(q, g.left))
        memo[key] = r
        return r

    return not go(0, f)


def bounded_countermodel_search(f: IntFormula, max_worlds: int) -> KripkeModel | None:
    """Smallest tree model whose root refutes ``f`` within the world bound.

    Deterministic: shapes are enumerated by world count and canonical
    shape order, valuations in canonical atom order.  Returns None when
    no tree model of at most ``max_worlds`` worlds refutes the formula.
    """
    if max_worlds < 1:
        raise ValueError("world bound must be positive")
    if not tree_refutable(f):
        return None
    atoms = sorted({g.name for g in int_subformulas(f) if isinstance(g, Atom)})
    for n in range(1, max_worlds + 1):
        for shape in rooted_trees(n):
            children, count = _preorder(shape)
            for masks in _monotone_valuations(children, len(atoms)):
                if _refutes(children, masks, atoms, f):
                    return _build_model(children, masks, atoms)
    return None


def _build_model(children: list[list[int]], masks: list[int], atoms: list[str]) -> KripkeModel:
    n = len(children)
    names = tuple(f"w{i}" for i in range(n))
    access = set()

    def collect(i: int) -> list[int]:
        acc = [i]
        for c in children[i]:
            acc.extend(collect(c))
        return acc

    for i in range(n):
        for j in collect(i):
            access.add((names[i], names[j]))
    val = {
        names[i]: frozenset(a for b, a in enumerate(atoms) if masks[i] & (1 << b))
        for i in range(n)
    }
    return KripkeModel(worlds=names, access=frozenset(access), val=val)


# ---------------------------------------------------------------------------
# Countermodel extraction from a failed proof search
# ---------------------------------------------------------------------------


def countermodel_from_trace(trace: RefutationTrace) -> KripkeModel:
    """Model over the failed saturated states; validated before returning.

    Each failed state becomes a world whose valuation is the atoms of its
    antecedent; access is the reflexive-transitive closure of the spawn
    links.  The result is checked to be a legal model that forces the
    antecedent of the refuted sequent at the root and refutes the
    succedent; extraction never trusts the construction.
    """
    order = _bfs_order(trace)
    names = {nid: f"w{i}" for i, nid in enumerate(order)}
    worlds = tuple(names[nid] for nid in order)
    edges = {
        names[nid]: [names[child] for (_, child) in trace.edges[nid]] for nid in order
    }
    access = set()
    for w in worlds:
        seen = {w}
        stack = [w]
        while stack:
            cur = stack.pop()
            for nxt in edges[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        for q in seen:
            access.add((w, q))
    val = {
        names[nid]: frozenset(g.name for g in trace.nodes[nid][0] if isinstance(g, Atom))
        for nid in order
    }
    model = KripkeModel(worlds=worlds, access=frozenset(access), val=val)
    problems = validate(model)
    if problems:
        raise ValueError(f"extracted model is not legal: {problems[:3]}")
    root = model.root
    for g in trace.sequent.antecedent:
        if not force(model, root, g):
            raise ValueError("extracted model does not force the antecedent at the root")
    if force(model, root, trace.sequent.succedent):
        raise ValueError("extracted model does not refute the succedent at the root")
    return model


def _bfs_order(trace: RefutationTrace) -> list[int]:
    seen = [trace.root]
    seen_set = {trace.root}
    i = 0
    while i < len(seen):
        for (_, child) in trace.edges[seen[i]]:
            if child not in seen_set:
                seen_set.add(child)
                seen.append(child)
        i += 1
    return seen
