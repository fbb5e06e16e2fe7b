"""Decision procedure for the implicative sequent calculi.

Backward search over set-based sequent states.  A state is a pair
``(antecedent set, atomic goal)``; the goal of a sequent is reduced by
absorbing the implication spine of the succedent into the antecedent
(the right rule is invertible).  A state holds when its goal belongs to
the antecedent, or when some antecedent implication ``B -o C`` with a
missing right-hand side has both the state with goal ``B`` and the state
extended by ``C`` provable.

Two devices keep the search exact and finite.  Implications whose
antecedent is literally present release their right-hand side without
search (the justifying premise is an axiom up to weakening), so states
are normalized under that free closure.  For the remaining branching
releases, repeated states along a search path are pruned; a minimal
derivation never repeats a state along a branch, so nothing provable is
lost.

On success the prover rebuilds a literal proof object with explicit
structural steps, guided by minimal derivation heights so the
construction is well founded.  On failure it returns the saturated
failed states with their spawn links, from which the semantic module
extracts countermodels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from counterplay.calculus.proofs import IntProofNode, IntRule
from counterplay.formula import (
    Atom,
    ImpKind,
    IntFormula,
    IntImp,
    IntSequent,
    canonical_key,
    int_formula_kind,
)

State = tuple[frozenset[IntFormula], Atom]

_INF = float("inf")


def split_spine(f: IntFormula) -> tuple[tuple[IntFormula, ...], Atom]:
    """Decompose ``F1 -o (F2 -o ... -o a)`` into its antecedents and head atom."""
    ants: list[IntFormula] = []
    while isinstance(f, IntImp):
        ants.append(f.left)
        f = f.right
    return tuple(ants), f


def sequent_state(s: IntSequent) -> State:
    ants, head = split_spine(s.succedent)
    return (frozenset(s.antecedent) | frozenset(ants), head)


@dataclass(frozen=True)
class RefutationTrace:
    """Failed saturated states with their spawn links.

    ``nodes`` maps a state id to ``(antecedent frozenset, goal atom)``;
    ``edges`` maps a state id to the (implication, child id) pairs whose
    release test failed during saturation; ``root`` is the id of the
    state of the input sequent.
    """

    root: int
    nodes: dict[int, State]
    edges: dict[int, tuple[tuple[IntFormula, int], ...]]
    sequent: IntSequent


@dataclass(frozen=True)
class SearchOutcome:
    proved: IntProofNode | None = None
    refuted: RefutationTrace | None = None

    @property
    def is_proved(self) -> bool:
        return self.proved is not None


def _sorted_formulas(fs: Iterable[IntFormula]) -> list[IntFormula]:
    return sorted(fs, key=canonical_key)


class _Prover:
    def __init__(self) -> None:
        self.memo: dict[State, bool] = {}
        self._norm_memo: dict[frozenset[IntFormula], frozenset[IntFormula]] = {}
        self._eager_memo: dict[frozenset[IntFormula], frozenset[IntFormula]] = {}
        self._options_memo: dict[State, list[tuple[IntImp, State, State]]] = {}

    # -- normalization -----------------------------------------------------

    def normalize(self, ants: frozenset[IntFormula]) -> frozenset[IntFormula]:
        """Free closure: release C whenever ``B -o C`` and B are both present."""
        cached = self._norm_memo.get(ants)
        if cached is not None:
            return cached
        cur = set(ants)
        changed = True
        while changed:
            changed = False
            for f in list(cur):
                if isinstance(f, IntImp) and f.right not in cur and f.left in cur:
                    cur.add(f.right)
                    changed = True
        result = frozenset(cur)
        self._norm_memo[ants] = result
        return result

    def _options(self, state: State) -> list[tuple[IntImp, State, State]]:
        """Branching moves at a normalized state: (implication, goal-state, release-state)."""
        cached = self._options_memo.get(state)
        if cached is not None:
            return cached
        ants, goal = state
        out = []
        for f in _sorted_formulas(ants):
            if not isinstance(f, IntImp) or f.right in ants or f.left in ants:
                continue
            sub_ants, sub_goal = split_spine(f.left)
            out.append(
                (f, (ants | frozenset(sub_ants), sub_goal), (ants | {f.right}, goal))
            )
        self._options_memo[state] = out
        return out

    # -- decision ----------------------------------------------------------
    #
    # The yes/no question is answered by a terminating contraction-free
    # rule set: atomic-antecedent implications are resolved eagerly (the
    # justifying premise is an axiom), and a nested implication
    # (E -o F) -o C branches into the two weight-decreasing premises
    # ``base, F -o C, E => F`` and ``base, C => goal``.  Every recursive
    # state is strictly lighter, so no loop checking is needed and all
    # results memoize unconditionally.  This decides the same sequents as
    # the literal calculus; the reconstruction below rebuilds literal
    # proofs independently.

    def provable(self, state: State) -> bool:
        ants, goal = state
        ants = self._eager(ants)
        key = (ants, goal)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        if goal in ants:
            self.memo[key] = True
            return True
        result = False
        for f in _sorted_formulas(ants):
            if not isinstance(f, IntImp) or isinstance(f.left, Atom):
                continue
            base = ants - {f}
            inner = f.left
            kind = f.kind
            sub_ants, sub_goal = split_spine(inner.right)
            p1 = (
                base
                | {IntImp(kind, inner.right, f.right), inner.left}
                | frozenset(sub_ants),
                sub_goal,
            )
            if not self.provable(p1):
                continue
            if self.provable((base | {f.right}, goal)):
                result = True
                break
        self.memo[key] = result
        return result

    def _eager(self, ants: frozenset[IntFormula]) -> frozenset[IntFormula]:
        """Resolve implications with present atomic antecedents, dropping them."""
        cached = self._eager_memo.get(ants)
        if cached is not None:
            return cached
        cur = set(ants)
        changed = True
        while changed:
            changed = False
            for f in list(cur):
                if isinstance(f, IntImp) and isinstance(f.left, Atom) and f.left in cur:
                    cur.remove(f)
                    cur.add(f.right)
                    changed = True
        result = frozenset(cur)
        self._eager_memo[ants] = result
        return result

    # -- saturation with the exact oracle ---------------------------------

    def saturate(self, ants: frozenset[IntFormula]) -> frozenset[IntFormula]:
        """Closure of the antecedent under provable implication release."""
        current = set(self.normalize(ants))
        changed = True
        while changed:
            changed = False
            for f in _sorted_formulas(current):
                if not isinstance(f, IntImp) or f.right in current:
                    continue
                sub_ants, sub_goal = split_spine(f.left)
                if self.provable((frozenset(current) | frozenset(sub_ants), sub_goal)):
                    current.add(f.right)
                    changed = True
        return frozenset(current)

    # -- refutation trace --------------------------------------------------

    def trace(self, s: IntSequent) -> RefutationTrace:
        ids: dict[State, int] = {}
        nodes: dict[int, State] = {}
        edges: dict[int, tuple[tuple[IntFormula, int], ...]] = {}

        def world(ants: frozenset[IntFormula], goal: Atom) -> int:
            sat = self.saturate(ants)
            state = (sat, goal)
            if state in ids:
                return ids[state]
            wid = len(ids)
            ids[state] = wid
            nodes[wid] = state
            out: list[tuple[IntFormula, int]] = []
            for f in _sorted_formulas(sat):
                if not isinstance(f, IntImp) or f.right in sat:
                    continue
                sub_ants, sub_goal = split_spine(f.left)
                out.append((f, world(sat | frozenset(sub_ants), sub_goal)))
            edges[wid] = tuple(out)
            return wid

        ants, goal = sequent_state(s)
        root = world(ants, goal)
        return RefutationTrace(root=root, nodes=nodes, edges=edges, sequent=s)

    # -- literal proof reconstruction --------------------------------------

    def reconstruct(self, s: IntSequent, kind: ImpKind) -> IntProofNode:
        state = sequent_state(s)
        ranks, moves = self._ranks(state)
        built: dict[State, IntProofNode] = {}
        proof = self._build(state, ranks, moves, built, kind)
        spine, _ = split_spine(s.succedent)
        target = tuple(s.antecedent) + spine
        proof = _massage(proof, target)
        for _ in spine:
            proof = _right_step(proof, kind)
        return proof

    def _ranks(self, root: State):
        """Minimal derivation heights over the normalized provable states
        reachable from ``root`` through provable branching moves."""
        moves: dict[State, list[tuple[IntImp, State, State]]] = {}
        start = (self.normalize(root[0]), root[1])
        stack = [start]
        while stack:
            state = stack.pop()
            if state in moves:
                continue
            ants, goal = state
            if goal in ants:
                moves[state] = []
                continue
            opts = [
                (f, sub, rel)
                for (f, sub, rel) in self._options(state)
                if self.provable(sub) and self.provable(rel)
            ]
            moves[state] = opts
            for _, sub, rel in opts:
                stack.append((self.normalize(sub[0]), sub[1]))
                stack.append((self.normalize(rel[0]), rel[1]))
        rank: dict[State, float] = {st: (0 if st[1] in st[0] else _INF) for st in moves}
        changed = True
        while changed:
            changed = False
            for st, opts in moves.items():
                for _, sub, rel in opts:
                    nsub = (self.normalize(sub[0]), sub[1])
                    nrel = (self.normalize(rel[0]), rel[1])
                    cand = 1 + max(rank[nsub], rank[nrel])
                    if cand < rank[st]:
                        rank[st] = cand
                        changed = True
        if rank[start] == _INF:
            raise ValueError("state is not provable")
        return rank, moves

    def _build(
        self,
        state: State,
        rank: dict[State, float],
        moves: dict[State, list[tuple[IntImp, State, State]]],
        built: dict[State, IntProofNode],
        kind: ImpKind,
    ) -> IntProofNode:
        if state in built:
            return built[state]
        ants, goal = state
        gctx = tuple(_sorted_formulas(ants))
        if goal in ants:
            proof = _massage(IntProofNode(IntSequent((goal,), goal), IntRule.AXIOM), gctx)
            built[state] = proof
            return proof
        free = [
            f
            for f in gctx
            if isinstance(f, IntImp) and f.right not in ants and f.left in ants
        ]
        if free:
            impf = free[0]
            p1 = _massage(
                self._build((ants | {impf.right}, goal), rank, moves, built, kind),
                gctx + (impf.right,),
            )
            p2 = _massage(IntProofNode(IntSequent((impf.left,), impf.left), IntRule.AXIOM), gctx)
            proof = _finish_left(p1, p2, impf, gctx, goal)
            built[state] = proof
            return proof
        best = min(
            (
                opt
                for opt in moves[state]
                if 1
                + max(
                    rank[(self.normalize(opt[1][0]), opt[1][1])],
                    rank[(self.normalize(opt[2][0]), opt[2][1])],
                )
                == rank[state]
            ),
            key=lambda opt: canonical_key(opt[0]),
        )
        impf, sub_state, release_state = best
        p1 = _massage(
            self._build(release_state, rank, moves, built, kind), gctx + (impf.right,)
        )
        sub_ants, _ = split_spine(impf.left)
        p2 = _massage(self._build(sub_state, rank, moves, built, kind), gctx + sub_ants)
        for _ in sub_ants:
            p2 = _right_step(p2, kind)
        proof = _finish_left(p1, p2, impf, gctx, goal)
        built[state] = proof
        return proof


def _finish_left(p1: IntProofNode, p2: IntProofNode, impf: IntImp, gctx, goal) -> IntProofNode:
    conclusion = IntSequent(gctx + gctx + (impf,), goal)
    node = IntProofNode(conclusion, IntRule.LEFT_IMP, (p1, p2), (len(gctx),))
    return _massage(node, gctx)


def _right_step(proof: IntProofNode, kind: ImpKind) -> IntProofNode:
    """Right implication: move the final antecedent formula into the succedent."""
    seq = proof.conclusion
    if not seq.antecedent:
        raise ValueError("no antecedent formula to absorb")
    new = IntSequent(seq.antecedent[:-1], IntImp(kind, seq.antecedent[-1], seq.succedent))
    return IntProofNode(new, IntRule.RIGHT_IMP, (proof,))


def _infer_kind(seq: IntSequent) -> ImpKind | None:
    for f in seq.antecedent + (seq.succedent,):
        k = int_formula_kind(f)
        if k is not None:
            return k
    return None


def _massage(proof: IntProofNode, target: tuple[IntFormula, ...]) -> IntProofNode:
    """Rebuild ``proof`` so its conclusion antecedent is exactly ``target``.

    Requires set(current antecedent) to be included in set(target); uses
    explicit Weakening, Contraction and Exchange steps only.
    """
    current = list(proof.conclusion.antecedent)
    succ = proof.conclusion.succedent

    def exchange(p: IntProofNode, i: int) -> IntProofNode:
        ants = list(p.conclusion.antecedent)
        ants[i], ants[i + 1] = ants[i + 1], ants[i]
        return IntProofNode(IntSequent(tuple(ants), succ), IntRule.EXCHANGE, (p,), (i,))

    def bubble_to_end(p: IntProofNode, i: int) -> IntProofNode:
        for j in range(i, len(p.conclusion.antecedent) - 1):
            p = exchange(p, j)
        return p

    want: dict[IntFormula, int] = {}
    for f in target:
        want[f] = want.get(f, 0) + 1
    have: dict[IntFormula, int] = {}
    for f in current:
        have[f] = have.get(f, 0) + 1
    if any(f not in want for f in have):
        missing = [f for f in have if f not in want]
        raise ValueError(f"cannot massage: {missing} not in target")

    p = proof
    # add missing copies
    for f in target:
        if have.get(f, 0) < want[f]:
            p = IntProofNode(
                IntSequent(p.conclusion.antecedent + (f,), succ), IntRule.WEAKENING, (p,)
            )
            have[f] = have.get(f, 0) + 1
    # drop surplus copies: bring two equal copies to the end and contract
    for f in list(have):
        while have[f] > want[f]:
            ants = list(p.conclusion.antecedent)
            i1 = ants.index(f)
            p = bubble_to_end(p, i1)
            ants = list(p.conclusion.antecedent)
            i2 = ants.index(f)
            p = bubble_to_end(p, i2)
            p = IntProofNode(
                IntSequent(p.conclusion.antecedent[:-1], succ), IntRule.CONTRACTION, (p,)
            )
            have[f] -= 1
    # permute into target order (selection sort with adjacent swaps)
    for i in range(len(target)):
        ants = list(p.conclusion.antecedent)
        j = next(k for k in range(i, len(ants)) if ants[k] == target[i])
        for k in range(j, i, -1):
            p = exchange(p, k - 1)
    assert p.conclusion.antecedent == target, (p.conclusion.antecedent, target)
    return p


def int_prove(s: IntSequent | IntFormula) -> SearchOutcome:
    """Decide an intuitionistic sequent; total, deterministic, terminating."""
    if not isinstance(s, IntSequent):
        s = IntSequent((), s)
    kind = _infer_kind(s) or ImpKind.BIMP
    prover = _Prover()
    if prover.provable(sequent_state(s)):
        return SearchOutcome(proved=prover.reconstruct(s, kind))
    return SearchOutcome(refuted=prover.trace(s))
