"""Affine proof construction: embedding, monotone replacement, templates.

All construction here is forward: small combinators wrap proof nodes in
single rule applications, so every output validates under the
independent checker.  Formulas are kept in the implication-free affine
language (``->`` is emitted through its negation-disjunction reading)
with negation allowed on compound formulas; ``recast`` exchanges the
final formula of a sequent for any expansion-equal one through a single
cut against an axiom.
"""

from __future__ import annotations

from typing import Sequence

from counterplay.calculus.proofs import (
    AffineProofNode,
    AffineRule,
    IntProofNode,
    IntRule,
    check_affine,
    check_int,
)
from counterplay.formula import (
    AffineFormula,
    Atom,
    BRecur,
    CoBRecur,
    CoPRecur,
    ImpKind,
    IntFormula,
    IntImp,
    IntSequent,
    Limp,
    Neg,
    ParConj,
    ParDisj,
    Path,
    PRecur,
    children,
    expand,
    fmt_affine,
    polarity,
    Polarity,
    replace_at,
    subformula_at,
)


# ---------------------------------------------------------------------------
# Forward combinators
# ---------------------------------------------------------------------------


def ax(e: AffineFormula) -> AffineProofNode:
    return AffineProofNode((Neg(e), e), AffineRule.AXIOM)


def exch(p: AffineProofNode, i: int) -> AffineProofNode:
    seq = list(p.conclusion)
    seq[i], seq[i + 1] = seq[i + 1], seq[i]
    return AffineProofNode(tuple(seq), AffineRule.EXCHANGE, (p,), (i,))


def weak(p: AffineProofNode, e: AffineFormula) -> AffineProofNode:
    return AffineProofNode(p.conclusion + (e,), AffineRule.WEAKENING, (p,))


def pardisj_intro(p: AffineProofNode, n: int) -> AffineProofNode:
    seq = p.conclusion
    disj = ParDisj(seq[len(seq) - n :])
    return AffineProofNode(seq[: len(seq) - n] + (disj,), AffineRule.PARDISJ_INTRO, (p,))


def parconj_intro(premises: Sequence[AffineProofNode]) -> AffineProofNode:
    items = tuple(p.conclusion[-1] for p in premises)
    ctx: tuple[AffineFormula, ...] = ()
    sizes: list[int] = []
    for p in premises:
        ctx += p.conclusion[:-1]
        sizes.append(len(p.conclusion) - 1)
    return AffineProofNode(
        ctx + (ParConj(items),), AffineRule.PARCONJ_INTRO, tuple(premises), tuple(sizes)
    )


def ucontr(p: AffineProofNode) -> AffineProofNode:
    return AffineProofNode(p.conclusion[:-1], AffineRule.UC_CONTR, (p,))


def wcontr(p: AffineProofNode) -> AffineProofNode:
    return AffineProofNode(p.conclusion[:-1], AffineRule.WC_CONTR, (p,))


def uintro(p: AffineProofNode) -> AffineProofNode:
    seq = p.conclusion
    return AffineProofNode(seq[:-1] + (CoPRecur(seq[-1]),), AffineRule.UC_INTRO, (p,))


def wintro(p: AffineProofNode) -> AffineProofNode:
    seq = p.conclusion
    return AffineProofNode(seq[:-1] + (CoBRecur(seq[-1]),), AffineRule.WC_INTRO, (p,))


def pintro(p: AffineProofNode) -> AffineProofNode:
    seq = p.conclusion
    return AffineProofNode(seq[:-1] + (PRecur(seq[-1]),), AffineRule.PRECUR_INTRO, (p,))


def bintro(p: AffineProofNode) -> AffineProofNode:
    seq = p.conclusion
    return AffineProofNode(seq[:-1] + (BRecur(seq[-1]),), AffineRule.BRECUR_INTRO, (p,))


def cut(p1: AffineProofNode, p2: AffineProofNode, e: AffineFormula) -> AffineProofNode:
    if p1.conclusion[-1] != e:
        raise ValueError(f"first cut premise must end with {fmt_affine(e)}")
    conclusion = p1.conclusion[:-1] + p2.conclusion[1:]
    return AffineProofNode(
        conclusion, AffineRule.CUT, (p1, p2), (len(p1.conclusion) - 1,), cut_formula=e
    )


def arrange(p: AffineProofNode, target: tuple[AffineFormula, ...]) -> AffineProofNode:
    """Permute the sequent into ``target`` order with adjacent exchanges."""
    if sorted(map(fmt_affine, p.conclusion)) != sorted(map(fmt_affine, target)):
        raise ValueError(
            f"arrange needs equal multisets: <{', '.join(map(fmt_affine, p.conclusion))}>"
            f" vs <{', '.join(map(fmt_affine, target))}>"
        )
    for i in range(len(target)):
        seq = p.conclusion
        j = next(k for k in range(i, len(seq)) if seq[k] == target[i])
        for k in range(j, i, -1):
            p = exch(p, k - 1)
    return p


def move_last(p: AffineProofNode, i: int) -> AffineProofNode:
    for j in range(i, len(p.conclusion) - 1):
        p = exch(p, j)
    return p


def recast(p: AffineProofNode, target: AffineFormula) -> AffineProofNode:
    """Replace the final formula by an expansion-equal one (single cut)."""
    current = p.conclusion[-1]
    if current == target:
        return p
    if expand(current) != expand(target):
        raise ValueError(
            f"recast: {fmt_affine(current)} and {fmt_affine(target)} differ after expansion"
        )
    return cut(p, ax(target), current)


def imp(a: AffineFormula, b: AffineFormula) -> AffineFormula:
    """The implication ``a -> b`` in its emitted reading."""
    return ParDisj((Neg(a), b))


def _imp_sides(f: AffineFormula) -> tuple[AffineFormula, AffineFormula]:
    if not (isinstance(f, ParDisj) and len(f.items) == 2 and isinstance(f.items[0], Neg)):
        raise ValueError(f"not an implication-shaped formula: {fmt_affine(f)}")
    return f.items[0].body, f.items[1]


# ---------------------------------------------------------------------------
# Derived proof schemes
# ---------------------------------------------------------------------------


def modus_ponens(p_imp: AffineProofNode, p_a: AffineProofNode) -> AffineProofNode:
    """From proofs ending in <a -> b> and <a>, a proof of <b> (two cuts)."""
    f = p_imp.conclusion[-1]
    a, b = _imp_sides(f)
    if p_a.conclusion[-1] != a:
        p_a = recast(p_a, a)
    conj = ParConj((a, Neg(b)))
    t = parconj_intro([ax(a), exch(ax(b), 0)])  # (Neg a, b, conj)
    t = arrange(t, (conj, Neg(a), b))
    step = cut(p_imp, t, f)  # ctx + (Neg a, b)
    ctx = step.conclusion[:-2]
    step = arrange(step, (Neg(a),) + ctx + (b,))
    return cut(p_a, step, a)


def transitivity(p_ab: AffineProofNode, p_bc: AffineProofNode) -> AffineProofNode:
    """From proofs of <a -> b> and <b -> c>, a proof of <a -> c>."""
    fab, fbc = p_ab.conclusion[-1], p_bc.conclusion[-1]
    a, b = _imp_sides(fab)
    b2, c = _imp_sides(fbc)
    if b != b2:
        raise ValueError("middle formulas differ")
    conj1 = ParConj((a, Neg(b)))
    conj2 = ParConj((b, Neg(c)))
    t = parconj_intro([ax(a), exch(ax(b), 0)])  # (Neg a, b, conj1)
    t = move_last(t, 1)  # (Neg a, conj1, b)
    t = parconj_intro([t, exch(ax(c), 0)])  # (Neg a, conj1, c, conj2)
    t = arrange(t, (conj1, conj2, Neg(a), c))
    t = pardisj_intro(t, 2)  # (conj1, conj2, a -> c)
    step = cut(p_ab, t, fab)  # (conj2, a -> c)
    return cut(p_bc, step, fbc)


def seq_to_imp(p: AffineProofNode, antecedent: AffineFormula) -> AffineProofNode:
    """From <D, b> with D expansion-equal to ~antecedent, conclude <antecedent -> b>."""
    if len(p.conclusion) != 2:
        raise ValueError("need a two-formula sequent")
    d, b = p.conclusion
    p = arrange(p, (b, d))
    p = recast(p, Neg(antecedent))
    p = exch(p, 0)
    return pardisj_intro(p, 2)


# ---------------------------------------------------------------------------
# Embedding of intuitionistic proofs
# ---------------------------------------------------------------------------


def _wrap_neg(kind: ImpKind, f: AffineFormula) -> AffineFormula:
    return CoBRecur(Neg(f)) if kind is ImpKind.BIMP else CoPRecur(Neg(f))


def _promote(kind: ImpKind, p: AffineProofNode) -> AffineProofNode:
    return bintro(p) if kind is ImpKind.BIMP else pintro(p)


def _recur(kind: ImpKind, f: AffineFormula) -> AffineFormula:
    return BRecur(f) if kind is ImpKind.BIMP else PRecur(f)


def _co_contract(kind: ImpKind, p: AffineProofNode) -> AffineProofNode:
    return wcontr(p) if kind is ImpKind.BIMP else ucontr(p)


def _co_intro(kind: ImpKind, p: AffineProofNode) -> AffineProofNode:
    return wintro(p) if kind is ImpKind.BIMP else uintro(p)


def translate_formula(f: IntFormula, kind: ImpKind) -> AffineFormula:
    """Reduction implication as a recurrence-guarded implication."""
    if isinstance(f, Atom):
        return f
    return ParDisj(
        (_wrap_neg(kind, translate_formula(f.left, kind)), translate_formula(f.right, kind))
    )


def translate_sequent(s: IntSequent, kind: ImpKind) -> tuple[AffineFormula, ...]:
    return tuple(_wrap_neg(kind, translate_formula(g, kind)) for g in s.antecedent) + (
        translate_formula(s.succedent, kind),
    )


def embed(proof: IntProofNode, kind: ImpKind | None = None) -> AffineProofNode:
    """Translate a checked intuitionistic proof into a checkable affine proof.

    The conclusion is the one-sided translation of the input's conclusion:
    each antecedent formula moves across as a negation guarded by the dual
    recurrence, the succedent is translated in place.
    """
    if not check_int(proof):
        raise ValueError("embed requires a proof accepted by the checker")
    if kind is None:
        kind = _proof_kind(proof) or ImpKind.BIMP
    return _embed(proof, kind)


def _proof_kind(proof: IntProofNode) -> ImpKind | None:
    from counterplay.formula import int_formula_kind

    for f in proof.conclusion.antecedent + (proof.conclusion.succedent,):
        k = int_formula_kind(f)
        if k is not None:
            return k
    for p in proof.premises:
        k = _proof_kind(p)
        if k is not None:
            return k
    return None


def _embed(root: IntProofNode, kind: ImpKind) -> AffineProofNode:
    from counterplay.calculus.proofs import _postorder

    memo: dict[int, AffineProofNode] = {}
    for node in _postorder(root):
        memo[id(node)] = _embed_node(node, [memo[id(q)] for q in node.premises], kind)
    return memo[id(root)]


def _embed_node(
    n: IntProofNode, embedded: list[AffineProofNode], kind: ImpKind
) -> AffineProofNode:
    c = n.conclusion
    if n.rule is IntRule.AXIOM:
        k = translate_formula(c.succedent, kind)
        p = _co_intro(kind, exch(ax(k), 0))  # (k, ?Neg k)
        return exch(p, 0)

    if n.rule is IntRule.EXCHANGE:
        return exch(embedded[0], n.indices[0])

    if n.rule is IntRule.WEAKENING:
        p = embedded[0]
        p = weak(p, _wrap_neg(kind, translate_formula(c.antecedent[-1], kind)))
        return exch(p, len(p.conclusion) - 2)

    if n.rule is IntRule.CONTRACTION:
        p = embedded[0]
        m = len(p.conclusion)
        p = exch(p, m - 2)
        p = exch(p, m - 3)  # (..., K', tF, tF)
        p = _co_contract(kind, p)
        return exch(p, len(p.conclusion) - 2)

    if n.rule is IntRule.RIGHT_IMP:
        return pardisj_intro(embedded[0], 2)

    # LEFT_IMP
    impf = c.antecedent[-1]
    g = n.indices[0]
    p1 = embedded[0]  # (tG..., tF, K1')
    p2 = embedded[1]  # (tH..., K2')
    ft = translate_formula(impf.right, kind)
    impt = translate_formula(impf, kind)
    tf_guard = _wrap_neg(kind, ft)
    p2 = _promote(kind, p2)  # (tH..., !K2')
    conj = ParConj((p2.conclusion[-1], Neg(ft)))
    p2 = parconj_intro([p2, exch(ax(ft), 0)])  # (tH..., ft, conj)
    p2 = cut(p2, exch(ax(impt), 0), conj)  # (tH..., ft, Neg impt)
    p2 = _co_intro(kind, p2)  # (tH..., ft, tImpl)
    p2 = move_last(p2, len(p2.conclusion) - 2)  # (tH..., tImpl, ft)
    p2 = _promote(kind, p2)  # (tH..., tImpl, !ft)
    p2 = _to_front(p2)  # (!ft, tH..., tImpl)
    i = len(p1.conclusion) - 2
    if p1.conclusion[i] != tf_guard:
        raise AssertionError("translated premise lost its guard")
    p1 = move_last(p1, i)  # (tG..., K1', tf_guard)
    joined = cut(p1, p2, tf_guard)  # (tG..., K1', tH..., tImpl)
    gpart = joined.conclusion[:g]
    k1t = joined.conclusion[g]
    rest = joined.conclusion[g + 1 :]
    return arrange(joined, gpart + rest + (k1t,))


def _to_front(p: AffineProofNode) -> AffineProofNode:
    for j in range(len(p.conclusion) - 1, 0, -1):
        p = exch(p, j - 1)
    return p


# ---------------------------------------------------------------------------
# Monotone replacement (positive and negative occurrences)
# ---------------------------------------------------------------------------


def no_limp(f: AffineFormula) -> AffineFormula:
    """Rewrite every ``->`` into its negation-disjunction reading."""
    if isinstance(f, Atom):
        return f
    if isinstance(f, Limp):
        return ParDisj((Neg(no_limp(f.left)), no_limp(f.right)))
    kids = tuple(no_limp(k) for k in children(f))
    if isinstance(f, (ParConj, ParDisj)):
        return type(f)(kids)
    return type(f)(kids[0])


def no_limp_path(f: AffineFormula, path: Path) -> Path:
    """Translate a path in ``f`` to the corresponding path in ``no_limp(f)``."""
    if not path:
        return ()
    step, rest = path[0], path[1:]
    kids = children(f)
    if not 0 <= step < len(kids):
        raise ValueError(f"invalid path {path} in {fmt_affine(f)}")
    tail = no_limp_path(kids[step], rest)
    if isinstance(f, Limp):
        return ((0, 0) + tail) if step == 0 else ((1,) + tail)
    return (step,) + tail


def contrapose(p: AffineProofNode) -> AffineProofNode:
    """From <u -> v> derive <~v -> ~u>."""
    f = p.conclusion[-1]
    u, v = _imp_sides(f)
    conj = ParConj((u, Neg(v)))
    t = parconj_intro([ax(u), exch(ax(v), 0)])  # (Neg u, v, conj)
    t = move_last(t, 1)  # (Neg u, conj, v)
    t = recast(t, Neg(Neg(v)))
    t = arrange(t, (conj, Neg(Neg(v)), Neg(u)))
    t = pardisj_intro(t, 2)  # (conj, ~v -> ~u)
    return cut(p, t, f)


def recur_mono(p: AffineProofNode, kind: ImpKind) -> AffineProofNode:
    """From <u -> v> derive <!u -> !v> for the kind's recurrence."""
    wrap = BRecur if kind is ImpKind.BIMP else PRecur
    f = p.conclusion[-1]
    u, v = _imp_sides(f)
    boxed = _promote(kind, p)  # (!(u -> v),)
    conj = ParConj((u, Neg(v)))
    t = parconj_intro([ax(u), exch(ax(v), 0)])  # (Neg u, v, conj)
    t = _co_intro(kind, t)  # (Neg u, v, ?conj)
    t = move_last(t, 0)  # (v, ?conj, Neg u)
    t = _co_intro(kind, t)  # (v, ?conj, ?Neg u)
    t = move_last(t, 0)  # (?conj, ?Neg u, v)
    t = _promote(kind, t)  # (?conj, ?Neg u, !v)
    t = exch(t, 1)  # (?conj, !v, ?Neg u)
    t = recast(t, Neg(wrap(u)))
    t = exch(t, 1)  # (?conj, Neg !u, !v)
    t = pardisj_intro(t, 2)  # (?conj, !u -> !v)
    return cut(boxed, t, boxed.conclusion[-1])


def co_recur_mono(p: AffineProofNode, kind: ImpKind) -> AffineProofNode:
    """From <u -> v> derive <?u -> ?v> for the kind's dual recurrence."""
    cowrap = CoBRecur if kind is ImpKind.BIMP else CoPRecur
    u, v = _imp_sides(p.conclusion[-1])
    s = contrapose(p)  # <~v -> ~u>
    s = recur_mono(s, kind)  # <!~v -> !~u>
    s = contrapose(s)  # <~!~u -> ~!~v>
    return recast(s, imp(cowrap(u), cowrap(v)))


def conj_mono(p: AffineProofNode, items: tuple[AffineFormula, ...], i: int) -> AffineProofNode:
    """From <u -> v> with u = items[i] derive <&items -> &items[i := v]>."""
    f = p.conclusion[-1]
    u, v = _imp_sides(f)
    if items[i] != u:
        raise ValueError("conjunct does not match the implication antecedent")
    new_items = items[:i] + (v,) + items[i + 1 :]
    conj1 = ParConj((u, Neg(v)))
    conj2 = ParConj(new_items)
    premises = [ax(it) for it in items[:i]] + [ax(v)] + [ax(it) for it in items[i + 1 :]]
    t = parconj_intro(premises)  # (Neg it_0, ..., Neg v @ i, ..., conj2)
    t = move_last(t, i)  # (other negs..., conj2, Neg v)
    t = parconj_intro([ax(u), t])  # (Neg u, other negs..., conj2, conj1)
    negs = tuple(Neg(it) for it in items)
    t = arrange(t, (conj1, conj2) + negs)
    t = pardisj_intro(t, len(items))
    t = recast(t, Neg(ParConj(items)))
    t = exch(t, 1)
    t = pardisj_intro(t, 2)  # (conj1, &items -> &new)
    return cut(p, t, f)


def disj_mono(p: AffineProofNode, items: tuple[AffineFormula, ...], i: int) -> AffineProofNode:
    """From <u -> v> with u = items[i] derive <|items -> |items[i := v]>."""
    f = p.conclusion[-1]
    u, v = _imp_sides(f)
    if items[i] != u:
        raise ValueError("disjunct does not match the implication antecedent")
    new_items = items[:i] + (v,) + items[i + 1 :]
    conj1 = ParConj((u, Neg(v)))
    t = parconj_intro([exch(ax(it), 0) for it in items])  # (it_0, ..., it_n-1, &negs)
    t = recast(t, Neg(ParDisj(items)))
    t = move_last(t, i)  # (others..., Neg |items, u)
    t = parconj_intro([t, exch(ax(v), 0)])  # (others..., Neg |items, v, conj1)
    t = arrange(t, (conj1, Neg(ParDisj(items))) + new_items)
    t = pardisj_intro(t, len(items))  # (conj1, Neg |items, |new)
    t = pardisj_intro(t, 2)
    return cut(p, t, f)


def replace_proof(
    g1: AffineFormula,
    g2: AffineFormula,
    pf: AffineProofNode,
    host1: AffineFormula,
    path: Path,
) -> AffineProofNode:
    """Lift a proof of <g1 -> g2> through a host formula occurrence.

    For a positive occurrence the result proves <host1 -> host2>, for a
    negative occurrence <host2 -> host1>, where host2 replaces the
    occurrence of g1 at ``path`` by g2.  Hosts may use ``->``; the
    conclusion is stated in the implication-free emitted language.
    """
    if not check_affine(pf):
        raise ValueError("replacement premise fails the checker")
    g1n, g2n = no_limp(g1), no_limp(g2)
    hostn = no_limp(host1)
    pathn = no_limp_path(host1, path)
    if subformula_at(hostn, pathn) != g1n:
        raise ValueError("path does not address an occurrence of the replaced formula")
    want = imp(g1n, g2n)
    if pf.conclusion != (want,):
        if len(pf.conclusion) == 1 and expand(pf.conclusion[0]) == expand(want):
            pf = recast(pf, want)
        else:
            raise ValueError("premise proof must conclude the stated implication")
    proof = _lift(pf, hostn, pathn, g2n)
    host2n = replace_at(hostn, pathn, g2n)
    expected = (
        imp(hostn, host2n)
        if polarity(hostn, pathn) is Polarity.POSITIVE
        else imp(host2n, hostn)
    )
    if proof.conclusion != (expected,):
        raise AssertionError("replacement produced an unexpected conclusion")
    return proof


def _lift(pf: AffineProofNode, node: AffineFormula, path: Path, replacement: AffineFormula) -> AffineProofNode:
    if not path:
        return pf
    step, rest = path[0], path[1:]
    kids = children(node)
    sub = _lift(pf, kids[step], rest, replacement)
    if isinstance(node, Neg):
        return contrapose(sub)
    if isinstance(node, BRecur):
        return recur_mono(sub, ImpKind.BIMP)
    if isinstance(node, PRecur):
        return recur_mono(sub, ImpKind.PIMP)
    if isinstance(node, CoBRecur):
        return co_recur_mono(sub, ImpKind.BIMP)
    if isinstance(node, CoPRecur):
        return co_recur_mono(sub, ImpKind.PIMP)
    if isinstance(node, ParConj):
        return _branch_mono(sub, kids, step, conj_mono)
    if isinstance(node, ParDisj):
        return _branch_mono(sub, kids, step, disj_mono)
    raise ValueError(f"path enters an atom at {fmt_affine(node)}")


def _branch_mono(sub: AffineProofNode, kids, step, mono) -> AffineProofNode:
    u, v = _imp_sides(sub.conclusion[-1])
    if kids[step] == u:
        return mono(sub, kids, step)
    # inner direction is flipped: the old subformula sits on the right
    flipped = mono(sub, kids[:step] + (u,) + kids[step + 1 :], step)
    return flipped


# ---------------------------------------------------------------------------
# Bridge templates for the desequentization pipeline
# ---------------------------------------------------------------------------


def curry_template(a: AffineFormula, b: AffineFormula, c: AffineFormula) -> AffineProofNode:
    """Proof of <(a & b -> c) -> (a -> (b -> c))>."""
    t1 = imp(ParConj((a, b)), c)
    t2 = imp(a, imp(b, c))
    t1d = ParConj((ParConj((a, b)), Neg(c)))
    t = parconj_intro([ax(a), ax(b)])  # (Neg a, Neg b, a & b)
    t = parconj_intro([t, exch(ax(c), 0)])  # (Neg a, Neg b, c, t1d)
    t = arrange(t, (t1d, Neg(a), Neg(b), c))
    t = pardisj_intro(t, 2)  # (t1d, Neg a, b -> c)
    t = pardisj_intro(t, 2)  # (t1d, t2)
    return seq_to_imp(t, t1)


def uncurry_template(a: AffineFormula, b: AffineFormula, c: AffineFormula) -> AffineProofNode:
    """Proof of <(a -> (b -> c)) -> (a & b -> c)>."""
    t1 = imp(a, imp(b, c))
    t2 = imp(ParConj((a, b)), c)
    t1d = ParConj((a, ParConj((b, Neg(c)))))
    inner = parconj_intro([ax(b), exch(ax(c), 0)])  # (Neg b, c, &(b, Neg c))
    t = parconj_intro([ax(a), inner])  # (Neg a, Neg b, c, t1d)
    t = arrange(t, (t1d, c, Neg(a), Neg(b)))
    t = pardisj_intro(t, 2)  # (t1d, c, |(Neg a, Neg b))
    t = recast(t, Neg(ParConj((a, b))))
    t = exch(t, 1)  # (t1d, Neg(a & b), c)
    t = pardisj_intro(t, 2)  # (t1d, t2)
    return seq_to_imp(t, t1)


def recur_weaken_template(e: AffineFormula, kind: ImpKind = ImpKind.BIMP) -> AffineProofNode:
    """Proof of <!e -> e> for the kind's recurrence."""
    wrap = BRecur if kind is ImpKind.BIMP else PRecur
    p = _co_intro(kind, exch(ax(e), 0))  # (e, ?Neg e)
    p = recast(p, Neg(wrap(e)))  # (e, Neg !e)
    p = exch(p, 0)
    return pardisj_intro(p, 2)


def iso_imp(g1: AffineFormula, g2: AffineFormula) -> AffineProofNode:
    """Proof of <g1 -> g2> for expansion-equal formulas (one cut)."""
    if expand(g1) != expand(g2):
        raise ValueError("iso_imp needs expansion-equal formulas")
    p = recast(ax(g1), g2)  # (Neg g1, g2)
    return pardisj_intro(p, 2)


def co_intro_template(e: AffineFormula, kind: ImpKind = ImpKind.BIMP) -> AffineProofNode:
    """Proof of <e -> ?e> for the kind's dual recurrence."""
    p = _co_intro(kind, ax(e))  # (Neg e, ?e)
    return pardisj_intro(p, 2)


def formula_finalize(pf: AffineProofNode) -> AffineProofNode:
    """Collapse a translated-sequent proof into its single-formula reading."""
    while len(pf.conclusion) > 1:
        pf = pardisj_intro(pf, 2)
    return pf


def desequent_bridge_proof(
    k: IntFormula, gs: Sequence[IntFormula], w: Atom, kind: ImpKind = ImpKind.BIMP
) -> AffineProofNode:
    """Two-formula sequent linking the curried tower to the guarded form.

    Conclusion: ``< Neg(T), !k' -> (!g1' & ... & !gn' -> w) >`` where T is
    the translation of ``k -o (g1 -o (... -o w))`` and ``!`` is the kind's
    recurrence.  With an empty ``gs`` the second formula is ``!k' -> w``.
    """
    tk = translate_formula(k, kind)
    tgs = [translate_formula(g, kind) for g in gs]
    spine: IntFormula = w
    for g in reversed(list(gs)):
        spine = IntImp(kind, g, spine)
    spine = IntImp(kind, k, spine)
    t_formula = translate_formula(spine, kind)

    def piece(x: AffineFormula) -> AffineProofNode:
        q = _co_intro(kind, exch(ax(x), 0))  # (x, ?Neg x)
        q = exch(q, 0)  # (?Neg x, x)
        return _promote(kind, q)  # (?Neg x, !x)

    cur = exch(ax(w), 0)  # (w, Neg w)
    tower: AffineFormula = Neg(w)
    for tg in reversed(tgs):
        cur = parconj_intro([piece(tg), cur])
        tower = ParConj((_recur(kind, tg), tower))
    cur = parconj_intro([piece(tk), cur])
    tower = ParConj((_recur(kind, tk), tower))

    guards = tuple(_wrap_neg(kind, tg) for tg in tgs)
    guard_k = _wrap_neg(kind, tk)
    if tgs:
        cur = arrange(cur, (tower, guard_k, w) + guards)
        cur = pardisj_intro(cur, len(tgs))  # |(?Neg tg...)
        cur = recast(cur, Neg(ParConj(tuple(_recur(kind, tg) for tg in tgs))))
        cur = exch(cur, 2)  # (tower, guard_k, Neg(&!tg...), w)
        cur = pardisj_intro(cur, 2)  # inner implication
    else:
        cur = arrange(cur, (tower, guard_k, w))
    # replace the guard by the literal negation of the boxed antecedent
    cur = move_last(cur, 1)  # (tower, ..., guard_k)
    cur = recast(cur, Neg(_recur(kind, tk)))
    cur = exch(cur, len(cur.conclusion) - 2)
    cur = pardisj_intro(cur, 2)  # (tower, F)
    cur = move_last(cur, 0)  # (F, tower)
    joined = cut(cur, exch(ax(t_formula), 0), tower)
    return exch(joined, 0)


def guarded_reduction_proof(k: IntFormula, kind: ImpKind | None = None) -> AffineProofNode:
    """Checkable proof of <!k' -> D'> where D is the guarded one-formula
    reading of the standardization of ``k``.

    Composition: the augmented sequent ``k, rows => name(k)`` is always
    derivable; its embedding, finalized to a single formula and cut
    against the bridge template, yields the curried guarded implication.
    A chain of monotone replacements then reshapes each antecedent
    conjunct (currying the two-atom bodies, dropping the recurrences the
    guarded reading omits) into the exact desequentization.
    """
    from counterplay.calculus.prover import int_prove
    from counterplay.transform import desequentize, standardize

    std, _ = standardize(k, kind)
    kind = std.kind
    seq = std.to_sequent()
    gs = list(seq.antecedent)
    w = seq.succedent
    augmented = IntSequent((k,) + tuple(gs), w)
    outcome = int_prove(augmented)
    if not outcome.is_proved:
        raise AssertionError("the augmented standard sequent must be derivable")
    fp = formula_finalize(embed(outcome.proved, kind))
    bridge = desequent_bridge_proof(k, gs, w, kind)
    f_proof = cut(fp, bridge, fp.conclusion[-1])  # <F>
    host = f_proof.conclusion[0]
    s = std.s
    chain: AffineProofNode | None = None

    def conj_path(i: int) -> Path:
        # F = | ( ~!k' , | ( ~&(conjuncts) , w ) )
        return (1, 0, 0, i - 1)

    def step(path: Path, g2: AffineFormula, pf: AffineProofNode, positive: bool) -> None:
        nonlocal host, chain
        g1 = subformula_at(host, path)
        if positive:
            piece = replace_proof(g1, g2, pf, host, path)
            host = replace_at(host, path, g2)
        else:
            host2 = replace_at(host, path, g2)
            piece = replace_proof(g2, g1, pf, host2, path)
            host = host2
        chain = piece if chain is None else transitivity(chain, piece)

    if s:
        rows = std.rows
        for j in range(1, s + 1):
            # curry the two-atom body of the first-family conjunct
            row = rows[j - 1]
            a, b, c = _recur(kind, Atom(row.X)), _recur(kind, Atom(row.Y)), Atom(row.Z)
            g1 = translate_formula(gs[j - 1], kind)
            g2 = imp(ParConj((a, b)), c)
            pf = recast(curry_template(a, b, c), imp(g2, g1))
            step(conj_path(j) + (0,), g2, pf, positive=False)
        for j in range(1, s + 1):
            # drop the guard recurrence on the nested antecedent
            inner = translate_formula(gs[s + j - 1].left, kind)
            pf = recast(co_intro_template(Neg(inner), kind), imp(Neg(inner), _wrap_neg(kind, inner)))
            step(conj_path(s + j) + (0, 0), Neg(inner), pf, positive=False)
        for j in range(1, s + 1):
            # drop the operand recurrences the guarded reading omits
            row = rows[j - 1]
            for idx, atom_name in enumerate((row.X, row.Y)):
                pf = recur_weaken_template(Atom(atom_name), kind)
                step(conj_path(j) + (0, 0, 0, idx), Atom(atom_name), pf, positive=True)
        for j in range(1, s + 1):
            # align the inner recurrence spelling with the emitted reading
            row = rows[j - 1]
            g1 = _wrap_neg(kind, Atom(row.P))
            g2 = Neg(_recur(kind, Atom(row.P)))
            step(conj_path(s + j) + (0, 0, 0, 0), g2, iso_imp(g1, g2), positive=True)
        final = modus_ponens(chain, f_proof)
    else:
        final = f_proof
    target = imp(_recur(kind, translate_formula(k, kind)), no_limp(desequentize(std)))
    return recast(final, target)
