"""Formula ASTs for the intuitionistic and affine languages.

Two surface languages share one tokenizer:

* intuitionistic formulas: atoms plus a single binary implication, either
  ``-o`` (branching-recurrence reduction) or ``->>`` (parallel-recurrence
  reduction); sequents join formulas with ``,`` and ``=>``.
* affine formulas: prefix operators ``~`` (negation), ``!b``/``?b``
  (branching recurrence and its dual), ``!p``/``?p`` (parallel recurrence
  and its dual), n-ary ``&`` and ``|``, and binary right-associative ``->``.

Atom names starting with ``_w`` are reserved for engine-generated fresh
atoms and are rejected by the parser.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator, Union

RESERVED_PREFIX = "_w"

_NAME_RE = re.compile(r"[A-Za-z0-9_]+")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int) -> None:
        super().__init__(f"{message} (at position {pos})")
        self.message = message
        self.pos = pos


class ImpKind(str, Enum):
    BIMP = "bimp"
    PIMP = "pimp"

    @property
    def op(self) -> str:
        return "-o" if self is ImpKind.BIMP else "->>"


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self) -> None:
        if not self.name or not _NAME_RE.fullmatch(self.name):
            raise ValueError(f"bad atom name: {self.name!r}")


@dataclass(frozen=True)
class IntImp:
    kind: ImpKind
    left: "IntFormula"
    right: "IntFormula"


IntFormula = Union[Atom, IntImp]


@dataclass(frozen=True)
class IntSequent:
    antecedent: tuple[IntFormula, ...]
    succedent: IntFormula


# ---------------------------------------------------------------------------
# Affine language
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Neg:
    body: "AffineFormula"


@dataclass(frozen=True)
class ParConj:
    items: tuple["AffineFormula", ...]

    def __post_init__(self) -> None:
        if len(self.items) < 2:
            raise ValueError("conjunction arity must be >= 2")


@dataclass(frozen=True)
class ParDisj:
    items: tuple["AffineFormula", ...]

    def __post_init__(self) -> None:
        if len(self.items) < 2:
            raise ValueError("disjunction arity must be >= 2")


@dataclass(frozen=True)
class Limp:
    left: "AffineFormula"
    right: "AffineFormula"


@dataclass(frozen=True)
class BRecur:
    body: "AffineFormula"


@dataclass(frozen=True)
class CoBRecur:
    body: "AffineFormula"


@dataclass(frozen=True)
class PRecur:
    body: "AffineFormula"


@dataclass(frozen=True)
class CoPRecur:
    body: "AffineFormula"


AffineFormula = Union[Atom, Neg, ParConj, ParDisj, Limp, BRecur, CoBRecur, PRecur, CoPRecur]

AffineSequent = tuple[AffineFormula, ...]

_PREFIX_SYMBOL = {Neg: "~", BRecur: "!b", CoBRecur: "?b", PRecur: "!p", CoPRecur: "?p"}
_PREFIX_CTOR = {"~": Neg, "!b": BRecur, "?b": CoBRecur, "!p": PRecur, "?p": CoPRecur}


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_MULTI = ("->>", "->", "-o", "=>", "!b", "?b", "!p", "?p")
_SINGLE = "(),~&|"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Returns (kind, text, pos) triples; kind is 'name' or 'op'."""
    toks: list[tuple[str, str, int]] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        hit = next((m for m in _MULTI if text.startswith(m, i)), None)
        if hit is not None:
            toks.append(("op", hit, i))
            i += len(hit)
            continue
        if c in _SINGLE:
            toks.append(("op", c, i))
            i += 1
            continue
        m = _NAME_RE.match(text, i)
        if m:
            toks.append(("name", m.group(), i))
            i = m.end()
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    toks.append(("end", "", n))
    return toks


class _Cursor:
    def __init__(self, toks: list[tuple[str, str, int]]) -> None:
        self.toks = toks
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def next(self) -> tuple[str, str, int]:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str) -> None:
        kind, text, pos = self.next()
        if text != value:
            raise ParseError(f"expected {value!r}, found {text or 'end of input'!r}", pos)


def _atom_from(cur: _Cursor, allow_reserved: bool) -> Atom:
    kind, text, pos = cur.next()
    if kind != "name":
        raise ParseError(f"expected a formula, found {text or 'end of input'!r}", pos)
    if not allow_reserved and text.startswith(RESERVED_PREFIX):
        raise ParseError(f"atom name {text!r} uses the reserved {RESERVED_PREFIX!r} prefix", pos)
    return Atom(text)


# ---------------------------------------------------------------------------
# Intuitionistic parsing
# ---------------------------------------------------------------------------


def _parse_int_formula(cur: _Cursor, kind: ImpKind, allow_reserved: bool) -> IntFormula:
    left = _parse_int_primary(cur, kind, allow_reserved)
    if cur.peek()[1] == kind.op:
        cur.next()
        right = _parse_int_formula(cur, kind, allow_reserved)
        return IntImp(kind, left, right)
    return left


def _parse_int_primary(cur: _Cursor, kind: ImpKind, allow_reserved: bool) -> IntFormula:
    k, text, pos = cur.peek()
    if text == "(":
        cur.next()
        f = _parse_int_formula(cur, kind, allow_reserved)
        cur.expect(")")
        return f
    return _atom_from(cur, allow_reserved)


def parse_int(text: str, kind: ImpKind, allow_reserved: bool = False) -> IntFormula | IntSequent:
    """Parse an intuitionistic formula or sequent in the given implication kind.

    A sequent is ``F1, ..., Fn => G`` (the antecedent may be empty:
    ``=> G``). Anything without ``=>`` parses as a single formula.
    """
    cur = _Cursor(_tokenize(text))
    if cur.peek()[1] == "=>":
        cur.next()
        succ = _parse_int_formula(cur, kind, allow_reserved)
        _expect_end(cur)
        return IntSequent((), succ)
    first = _parse_int_formula(cur, kind, allow_reserved)
    if cur.peek()[1] not in (",", "=>"):
        _expect_end(cur)
        return first
    formulas = [first]
    while cur.peek()[1] == ",":
        cur.next()
        formulas.append(_parse_int_formula(cur, kind, allow_reserved))
    cur.expect("=>")
    succ = _parse_int_formula(cur, kind, allow_reserved)
    _expect_end(cur)
    return IntSequent(tuple(formulas), succ)


def _expect_end(cur: _Cursor) -> None:
    k, text, pos = cur.peek()
    if k != "end":
        raise ParseError(f"unexpected {text!r}", pos)


# ---------------------------------------------------------------------------
# Affine parsing
# ---------------------------------------------------------------------------

_PREC_IMP = 10
_PREC_OR = 20
_PREC_AND = 30


def _parse_aff(cur: _Cursor, min_prec: int, allow_reserved: bool) -> AffineFormula:
    node = _parse_aff_prefix(cur, allow_reserved)
    while True:
        text = cur.peek()[1]
        if text == "&" and min_prec <= _PREC_AND:
            items = [node]
            while cur.peek()[1] == "&":
                cur.next()
                items.append(_parse_aff(cur, _PREC_AND + 1, allow_reserved))
            node = ParConj(tuple(items))
        elif text == "|" and min_prec <= _PREC_OR:
            items = [node]
            while cur.peek()[1] == "|":
                cur.next()
                items.append(_parse_aff(cur, _PREC_OR + 1, allow_reserved))
            node = ParDisj(tuple(items))
        elif text == "->" and min_prec <= _PREC_IMP:
            cur.next()
            node = Limp(node, _parse_aff(cur, _PREC_IMP, allow_reserved))
        else:
            return node


def _parse_aff_prefix(cur: _Cursor, allow_reserved: bool) -> AffineFormula:
    k, text, pos = cur.peek()
    if text in _PREFIX_CTOR:
        cur.next()
        return _PREFIX_CTOR[text](_parse_aff_prefix(cur, allow_reserved))
    if text == "(":
        cur.next()
        f = _parse_aff(cur, 0, allow_reserved)
        cur.expect(")")
        return f
    return _atom_from(cur, allow_reserved)


def parse_affine(text: str, allow_reserved: bool = False) -> AffineFormula:
    cur = _Cursor(_tokenize(text))
    f = _parse_aff(cur, 0, allow_reserved)
    _expect_end(cur)
    return f


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------


@lru_cache(maxsize=65536)
def fmt_int(f: IntFormula) -> str:
    if isinstance(f, Atom):
        return f.name
    left = fmt_int(f.left)
    if isinstance(f.left, IntImp):
        left = f"({left})"
    return f"{left} {f.kind.op} {fmt_int(f.right)}"


def fmt_int_sequent(s: IntSequent) -> str:
    ant = ", ".join(fmt_int(f) for f in s.antecedent)
    return f"{ant} => {fmt_int(s.succedent)}" if ant else f"=> {fmt_int(s.succedent)}"


def _aff_prec(f: AffineFormula) -> int:
    if isinstance(f, Atom):
        return 100
    if isinstance(f, (Neg, BRecur, CoBRecur, PRecur, CoPRecur)):
        return 40
    if isinstance(f, ParConj):
        return _PREC_AND
    if isinstance(f, ParDisj):
        return _PREC_OR
    return _PREC_IMP


@lru_cache(maxsize=65536)
def fmt_affine(f: AffineFormula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, (Neg, BRecur, CoBRecur, PRecur, CoPRecur)):
        body = fmt_affine(f.body)
        if _aff_prec(f.body) < 40:
            body = f"({body})"
        return f"{_PREFIX_SYMBOL[type(f)]}{body}"
    if isinstance(f, ParConj):
        parts = [
            f"({fmt_affine(i)})" if _aff_prec(i) < _PREC_AND or isinstance(i, ParConj) else fmt_affine(i)
            for i in f.items
        ]
        return " & ".join(parts)
    if isinstance(f, ParDisj):
        parts = [
            f"({fmt_affine(i)})" if _aff_prec(i) < _PREC_OR or isinstance(i, ParDisj) else fmt_affine(i)
            for i in f.items
        ]
        return " | ".join(parts)
    left = fmt_affine(f.left)
    if isinstance(f.left, Limp):
        left = f"({left})"
    return f"{left} -> {fmt_affine(f.right)}"


def fmt_affine_sequent(s: AffineSequent) -> str:
    return ", ".join(fmt_affine(f) for f in s)


# ---------------------------------------------------------------------------
# Structural helpers
# ---------------------------------------------------------------------------


def children(f: AffineFormula) -> tuple[AffineFormula, ...]:
    if isinstance(f, Atom):
        return ()
    if isinstance(f, (Neg, BRecur, CoBRecur, PRecur, CoPRecur)):
        return (f.body,)
    if isinstance(f, (ParConj, ParDisj)):
        return f.items
    return (f.left, f.right)


def rebuild(f: AffineFormula, new_children: tuple[AffineFormula, ...]) -> AffineFormula:
    if isinstance(f, Atom):
        return f
    if isinstance(f, (Neg, BRecur, CoBRecur, PRecur, CoPRecur)):
        return type(f)(new_children[0])
    if isinstance(f, (ParConj, ParDisj)):
        return type(f)(new_children)
    return Limp(new_children[0], new_children[1])


Path = tuple[int, ...]


def subformula_at(host: AffineFormula, path: Path) -> AffineFormula:
    node = host
    for step in path:
        kids = children(node)
        if not 0 <= step < len(kids):
            raise ValueError(f"invalid path {path} in {fmt_affine(host)}")
        node = kids[step]
    return node


def replace_at(host: AffineFormula, path: Path, replacement: AffineFormula) -> AffineFormula:
    if not path:
        return replacement
    kids = list(children(host))
    if not 0 <= path[0] < len(kids):
        raise ValueError(f"invalid path {path} in {fmt_affine(host)}")
    kids[path[0]] = replace_at(kids[path[0]], path[1:], replacement)
    return rebuild(host, tuple(kids))


class Polarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


def polarity(host: AffineFormula, path: Path) -> Polarity:
    """Polarity of the occurrence addressed by ``path``.

    Counts enclosing negations; the left side of each ``->`` counts as one
    negation (the implication is read through its negation-disjunction
    expansion for parity).
    """
    node = host
    negs = 0
    for step in path:
        kids = children(node)
        if not 0 <= step < len(kids):
            raise ValueError(f"invalid path {path} in {fmt_affine(host)}")
        if isinstance(node, Neg) or (isinstance(node, Limp) and step == 0):
            negs += 1
        node = kids[step]
    return Polarity.NEGATIVE if negs % 2 else Polarity.POSITIVE


def occurrences(host: AffineFormula, target: AffineFormula) -> list[Path]:
    """All paths in ``host`` addressing subformulas equal to ``target``."""
    found: list[Path] = []

    def walk(node: AffineFormula, path: Path) -> None:
        if node == target:
            found.append(path)
        for i, kid in enumerate(children(node)):
            walk(kid, path + (i,))

    walk(host, ())
    return found


# ---------------------------------------------------------------------------
# Expansion (negation normal form over the affine operators)
# ---------------------------------------------------------------------------


def expand(f: AffineFormula) -> AffineFormula:
    """Eliminate ``->`` and push negation to atoms.

    Idempotent; the result contains Limp nowhere and Neg only on atoms.
    """
    if isinstance(f, Atom):
        return f
    if isinstance(f, Neg):
        return _expand_neg(f.body)
    if isinstance(f, ParConj):
        return ParConj(tuple(expand(i) for i in f.items))
    if isinstance(f, ParDisj):
        return ParDisj(tuple(expand(i) for i in f.items))
    if isinstance(f, Limp):
        return ParDisj((_expand_neg(f.left), expand(f.right)))
    return type(f)(expand(f.body))


def _expand_neg(f: AffineFormula) -> AffineFormula:
    if isinstance(f, Atom):
        return Neg(f)
    if isinstance(f, Neg):
        return expand(f.body)
    if isinstance(f, ParConj):
        return ParDisj(tuple(_expand_neg(i) for i in f.items))
    if isinstance(f, ParDisj):
        return ParConj(tuple(_expand_neg(i) for i in f.items))
    if isinstance(f, Limp):
        return ParConj((expand(f.left), _expand_neg(f.right)))
    if isinstance(f, BRecur):
        return CoBRecur(_expand_neg(f.body))
    if isinstance(f, CoBRecur):
        return BRecur(_expand_neg(f.body))
    if isinstance(f, PRecur):
        return CoPRecur(_expand_neg(f.body))
    return PRecur(_expand_neg(f.body))


def nneg(f: AffineFormula) -> AffineFormula:
    """Expanded negation: the normal form of ``~f``."""
    return _expand_neg(f)


def dual_match(e: AffineFormula, f: AffineFormula) -> bool:
    """True when ``f`` is the negation of ``e`` up to expansion."""
    return expand(Neg(e)) == expand(f)


def atom_names(f: AffineFormula) -> list[str]:
    """Atom name of every leaf, left to right (multiset preserved by expand)."""
    if isinstance(f, Atom):
        return [f.name]
    out: list[str] = []
    for kid in children(f):
        out.extend(atom_names(kid))
    return out


# ---------------------------------------------------------------------------
# Canonical ordering and subformula enumeration
# ---------------------------------------------------------------------------


def canonical_key(f: IntFormula) -> tuple[int, str]:
    s = fmt_int(f)
    return (len(s), s)


def canonical_order(formulas: Iterable[IntFormula]) -> list[IntFormula]:
    """Deterministic total order: by printed length, then byte order."""
    return sorted(set(formulas), key=canonical_key)


def int_subformulas(f: IntFormula) -> set[IntFormula]:
    out: set[IntFormula] = set()

    def walk(node: IntFormula) -> None:
        out.add(node)
        if isinstance(node, IntImp):
            walk(node.left)
            walk(node.right)

    walk(f)
    return out


def int_atoms(f: IntFormula) -> set[str]:
    return {g.name for g in int_subformulas(f) if isinstance(g, Atom)}


def int_formula_kind(f: IntFormula) -> ImpKind | None:
    """The uniform implication kind of ``f``, or None for a bare atom."""
    kinds = {g.kind for g in int_subformulas(f) if isinstance(g, IntImp)}
    if len(kinds) > 1:
        raise ValueError("mixed implication kinds in one formula")
    return kinds.pop() if kinds else None


def iter_int_nodes(f: IntFormula) -> Iterator[IntFormula]:
    yield f
    if isinstance(f, IntImp):
        yield from iter_int_nodes(f.left)
        yield from iter_int_nodes(f.right)
