"""Proof objects and independent checkers for both calculi.

Intuitionistic proofs are trees over two-sided sequents with the six rules
AXIOM, EXCHANGE, WEAKENING, CONTRACTION, RIGHT_IMP, LEFT_IMP.  Affine
proofs are trees over one-sided sequents (tuples of affine formulas).
Both checkers validate every node against its rule schema and nothing
else; they share no code with the procedures that build proofs.

Affine sequents may contain negation applied to compound formulas and are
compared structurally; only the axiom and cut schemata compare the two
sides of a negation pair, and they do so up to expansion (``->``
eliminated, negation pushed to atoms).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

from counterplay.formula import (
    AffineFormula,
    AffineSequent,
    BRecur,
    CoBRecur,
    CoPRecur,
    ImpKind,
    IntImp,
    IntSequent,
    ParConj,
    ParDisj,
    PRecur,
    dual_match,
    fmt_affine,
    fmt_int_sequent,
    parse_affine,
    parse_int,
)


class IntRule(str, Enum):
    AXIOM = "axiom"
    EXCHANGE = "exchange"
    WEAKENING = "weakening"
    CONTRACTION = "contraction"
    RIGHT_IMP = "right_imp"
    LEFT_IMP = "left_imp"


@dataclass(frozen=True)
class IntProofNode:
    conclusion: IntSequent
    rule: IntRule
    premises: tuple["IntProofNode", ...] = ()
    indices: tuple[int, ...] = ()

    def size(self) -> int:
        return _dag_size(self)


def _dag_size(root) -> int:
    """Number of distinct nodes (proofs may share subtrees)."""
    seen: set[int] = set()
    stack = [root]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.extend(node.premises)
    return len(seen)


def _iter_nodes(root):
    """Every distinct node of a proof, iteratively."""
    seen: set[int] = set()
    stack = [root]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        yield node
        stack.extend(node.premises)


def _node_violations(n: IntProofNode) -> list[str]:
    c = n.conclusion
    out: list[str] = []

    def bad(msg: str) -> None:
        out.append(f"{n.rule.value} at {fmt_int_sequent(c)}: {msg}")

    if n.rule is IntRule.AXIOM:
        if n.premises:
            bad("axiom with premises")
        if len(c.antecedent) != 1 or c.antecedent[0] != c.succedent:
            bad("axiom must have the shape K => K")
        return out

    if n.rule is IntRule.LEFT_IMP:
        if len(n.premises) != 2:
            bad("needs two premises")
            return out
        if len(n.indices) != 1:
            bad("needs the context split index")
            return out
        g = n.indices[0]
        if not (0 <= g <= len(c.antecedent) - 1):
            bad("split index out of range")
            return out
        if not c.antecedent or not isinstance(c.antecedent[-1], IntImp):
            bad("last antecedent formula must be an implication")
            return out
        impf = c.antecedent[-1]
        gpart = c.antecedent[:g]
        hpart = c.antecedent[g:-1]
        p1, p2 = n.premises
        if p1.conclusion != IntSequent(gpart + (impf.right,), c.succedent):
            bad("first premise does not match G, F => K1")
        if p2.conclusion != IntSequent(hpart, impf.left):
            bad("second premise does not match H => K2")
        return out

    if len(n.premises) != 1:
        bad("needs exactly one premise")
        return out
    p = n.premises[0].conclusion

    if n.rule is IntRule.EXCHANGE:
        if len(n.indices) != 1:
            bad("needs a swap position")
            return out
        i = n.indices[0]
        if not (0 <= i <= len(c.antecedent) - 2):
            bad("swap position out of range")
            return out
        swapped = list(c.antecedent)
        swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
        if p != IntSequent(tuple(swapped), c.succedent):
            bad("premise is not the adjacent swap of the conclusion")
    elif n.rule is IntRule.WEAKENING:
        if not c.antecedent or p != IntSequent(c.antecedent[:-1], c.succedent):
            bad("conclusion must append one formula to the premise antecedent")
    elif n.rule is IntRule.CONTRACTION:
        if not c.antecedent or p != IntSequent(c.antecedent + (c.antecedent[-1],), c.succedent):
            bad("premise must duplicate the final antecedent formula")
    elif n.rule is IntRule.RIGHT_IMP:
        if not isinstance(c.succedent, IntImp):
            bad("succedent must be an implication")
        elif p != IntSequent(c.antecedent + (c.succedent.left,), c.succedent.right):
            bad("premise does not match G, F => K")
    else:  # pragma: no cover
        bad("unknown rule")
    return out


def check_int_detailed(proof: IntProofNode) -> list[str]:
    out: list[str] = []
    for node in _iter_nodes(proof):
        out.extend(_node_violations(node))
    return out


def check_int(proof: IntProofNode) -> bool:
    return not check_int_detailed(proof)


# ---------------------------------------------------------------------------
# Affine proofs
# ---------------------------------------------------------------------------


class AffineRule(str, Enum):
    AXIOM = "axiom"
    EXCHANGE = "exchange"
    WEAKENING = "weakening"
    UC_CONTR = "uc_contr"  # contraction on a ?p-prefixed formula
    WC_CONTR = "wc_contr"  # contraction on a ?b-prefixed formula
    PARDISJ_INTRO = "pardisj_intro"
    PARCONJ_INTRO = "parconj_intro"
    UC_INTRO = "uc_intro"  # wrap the last formula in ?p
    WC_INTRO = "wc_intro"  # wrap the last formula in ?b
    PRECUR_INTRO = "precur_intro"  # !p on the last formula, context all ?p
    BRECUR_INTRO = "brecur_intro"  # !b on the last formula, context all ?b
    CUT = "cut"


@dataclass(frozen=True)
class AffineProofNode:
    conclusion: AffineSequent
    rule: AffineRule
    premises: tuple["AffineProofNode", ...] = ()
    indices: tuple[int, ...] = ()
    cut_formula: AffineFormula | None = None

    def size(self) -> int:
        return _dag_size(self)


def _affine_node_violations(n: AffineProofNode) -> list[str]:
    c = n.conclusion
    out: list[str] = []

    def bad(msg: str) -> None:
        out.append(f"{n.rule.value} at <{', '.join(fmt_affine(f) for f in c)}>: {msg}")

    if n.rule is AffineRule.AXIOM:
        if n.premises:
            bad("axiom with premises")
        if len(c) != 2 or not dual_match(c[1], c[0]):
            bad("axiom must be a negation pair")
        return out

    if n.rule is AffineRule.PARCONJ_INTRO:
        if not c or not isinstance(c[-1], ParConj):
            bad("conclusion must end with a conjunction")
            return out
        items = c[-1].items
        if len(n.premises) != len(items) or len(n.indices) != len(items):
            bad("one premise and one context size per conjunct")
            return out
        if sum(n.indices) != len(c) - 1:
            bad("context sizes must cover the conclusion")
            return out
        pos = 0
        for prem, size, item in zip(n.premises, n.indices, items):
            if prem.conclusion != c[pos : pos + size] + (item,):
                bad(f"premise for conjunct {fmt_affine(item)} does not match its context slice")
            pos += size
        return out

    if n.rule is AffineRule.CUT:
        if len(n.premises) != 2 or len(n.indices) != 1 or n.cut_formula is None:
            bad("cut needs two premises, a split index, and the cut formula")
            return out
        g = n.indices[0]
        if not (0 <= g <= len(c)):
            bad("split index out of range")
            return out
        p1, p2 = n.premises
        if p1.conclusion != c[:g] + (n.cut_formula,):
            bad("first premise must be the left context plus the cut formula")
        if len(p2.conclusion) != len(c) - g + 1 or p2.conclusion[1:] != c[g:]:
            bad("second premise must be the dual formula plus the right context")
        elif not dual_match(n.cut_formula, p2.conclusion[0]):
            bad("second premise does not start with the dual of the cut formula")
        return out

    if len(n.premises) != 1:
        bad("needs exactly one premise")
        return out
    p = n.premises[0].conclusion

    if n.rule is AffineRule.EXCHANGE:
        if len(n.indices) != 1:
            bad("needs a swap position")
            return out
        i = n.indices[0]
        if not (0 <= i <= len(c) - 2):
            bad("swap position out of range")
            return out
        swapped = list(c)
        swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
        if p != tuple(swapped):
            bad("premise is not the adjacent swap of the conclusion")
    elif n.rule is AffineRule.WEAKENING:
        if not c or p != c[:-1]:
            bad("conclusion must append one formula to the premise")
    elif n.rule in (AffineRule.UC_CONTR, AffineRule.WC_CONTR):
        want = CoPRecur if n.rule is AffineRule.UC_CONTR else CoBRecur
        if not c or not isinstance(c[-1], want):
            bad("contracted formula must carry the matching recurrence dual")
        elif p != c + (c[-1],):
            bad("premise must duplicate the final formula")
    elif n.rule is AffineRule.PARDISJ_INTRO:
        if not c or not isinstance(c[-1], ParDisj):
            bad("conclusion must end with a disjunction")
        elif p != c[:-1] + c[-1].items:
            bad("premise must list the disjuncts in place")
    elif n.rule in (AffineRule.UC_INTRO, AffineRule.WC_INTRO):
        want = CoPRecur if n.rule is AffineRule.UC_INTRO else CoBRecur
        if not c or not isinstance(c[-1], want):
            bad("conclusion must end with the introduced dual recurrence")
        elif p != c[:-1] + (c[-1].body,):
            bad("premise must end with the unwrapped formula")
    elif n.rule in (AffineRule.PRECUR_INTRO, AffineRule.BRECUR_INTRO):
        wrap = PRecur if n.rule is AffineRule.PRECUR_INTRO else BRecur
        ctx = CoPRecur if n.rule is AffineRule.PRECUR_INTRO else CoBRecur
        if not c or not isinstance(c[-1], wrap):
            bad("conclusion must end with the introduced recurrence")
            return out
        if any(not isinstance(f, ctx) for f in c[:-1]):
            bad("context must consist of dual-recurrence formulas")
        if p != c[:-1] + (c[-1].body,):
            bad("premise must end with the unwrapped formula")
    else:  # pragma: no cover
        bad("unknown rule")
    return out


def check_affine_detailed(proof: AffineProofNode) -> list[str]:
    out: list[str] = []
    for node in _iter_nodes(proof):
        out.extend(_affine_node_violations(node))
    return out


def check_affine(proof: AffineProofNode) -> bool:
    return not check_affine_detailed(proof)


# ---------------------------------------------------------------------------
# Serialization (bit-exact round trips)
# ---------------------------------------------------------------------------


def _postorder(root):
    """Distinct nodes, premises before conclusions, iteratively."""
    seen: set[int] = set()
    order = []
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for q in node.premises:
            stack.append((q, False))
    return order


def int_proof_to_json(p: IntProofNode) -> dict[str, Any]:
    memo: dict[int, dict[str, Any]] = {}
    for node in _postorder(p):
        memo[id(node)] = {
            "conclusion": fmt_int_sequent(node.conclusion),
            "rule": node.rule.value,
            "indices": list(node.indices),
            "premises": [memo[id(q)] for q in node.premises],
        }
    return memo[id(p)]


def int_proof_from_json(data: dict[str, Any], kind: ImpKind) -> IntProofNode:
    def build(d: dict[str, Any]) -> IntProofNode:
        stack = [(d, False)]
        memo: dict[int, IntProofNode] = {}
        while stack:
            item, expanded = stack.pop()
            if expanded:
                seq = parse_int(item["conclusion"], kind, allow_reserved=True)
                if not isinstance(seq, IntSequent):
                    seq = IntSequent((), seq)
                memo[id(item)] = IntProofNode(
                    conclusion=seq,
                    rule=IntRule(item["rule"]),
                    premises=tuple(memo[id(q)] for q in item["premises"]),
                    indices=tuple(item["indices"]),
                )
                continue
            if id(item) in memo:
                continue
            stack.append((item, True))
            for q in item["premises"]:
                stack.append((q, False))
        return memo[id(d)]

    return build(data)


def affine_proof_to_json(p: AffineProofNode) -> dict[str, Any]:
    memo: dict[int, dict[str, Any]] = {}
    for node in _postorder(p):
        out: dict[str, Any] = {
            "conclusion": [fmt_affine(f) for f in node.conclusion],
            "rule": node.rule.value,
            "indices": list(node.indices),
            "premises": [memo[id(q)] for q in node.premises],
        }
        if node.cut_formula is not None:
            out["cut_formula"] = fmt_affine(node.cut_formula)
        memo[id(node)] = out
    return memo[id(p)]


def affine_proof_from_json(data: dict[str, Any]) -> AffineProofNode:
    stack = [(data, False)]
    memo: dict[int, AffineProofNode] = {}
    while stack:
        item, expanded = stack.pop()
        if expanded:
            memo[id(item)] = AffineProofNode(
                conclusion=tuple(
                    parse_affine(s, allow_reserved=True) for s in item["conclusion"]
                ),
                rule=AffineRule(item["rule"]),
                premises=tuple(memo[id(q)] for q in item["premises"]),
                indices=tuple(item["indices"]),
                cut_formula=(
                    parse_affine(item["cut_formula"], allow_reserved=True)
                    if "cut_formula" in item
                    else None
                ),
            )
            continue
        if id(item) in memo:
            continue
        stack.append((item, True))
        for q in item["premises"]:
            stack.append((q, False))
    return memo[id(data)]
