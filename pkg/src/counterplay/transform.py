"""Flattening of implicative formulas into the canonical game form.

``standardize`` rewrites a formula into a standard sequent: every
non-atomic subformula receives a fresh atomic name (prefix ``_w``), and
two implication rows per named subformula state that the name and the
subformula it abbreviates are interchangeable.  ``desequentize`` turns a
standard sequent into a single recurrence-guarded affine formula, and
``elementarize`` replaces each atom with its choice-quantified atom game,
yielding the playable game form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from counterplay.formula import (
    AffineFormula,
    Atom,
    BRecur,
    ImpKind,
    IntFormula,
    IntImp,
    IntSequent,
    Limp,
    ParConj,
    PRecur,
    canonical_order,
    fmt_int,
    int_subformulas,
)


@dataclass(frozen=True)
class Row:
    """Atom slots of one row pair of a standard sequent.

    Rendered, row j contributes ``X -o (Y -o Z)`` to the first family and
    ``(P -o Q) -o R`` to the second.
    """

    X: str
    Y: str
    Z: str
    P: str
    Q: str
    R: str


@dataclass(frozen=True)
class StandardSequent:
    kind: ImpKind
    rows: tuple[Row, ...]
    succedent: str

    @property
    def s(self) -> int:
        return len(self.rows)

    def to_sequent(self) -> IntSequent:
        k = self.kind
        first = tuple(
            IntImp(k, Atom(r.X), IntImp(k, Atom(r.Y), Atom(r.Z))) for r in self.rows
        )
        second = tuple(
            IntImp(k, IntImp(k, Atom(r.P), Atom(r.Q)), Atom(r.R)) for r in self.rows
        )
        return IntSequent(first + second, Atom(self.succedent))


@dataclass(frozen=True)
class NameTable:
    """Injective map from non-atomic subformulas (by canonical print) to
    fresh atoms; identity on atoms."""

    names: tuple[tuple[str, str], ...]  # (canonical formula text, fresh atom name)

    def lookup(self, f: IntFormula) -> str:
        if isinstance(f, Atom):
            return f.name
        text = fmt_int(f)
        for k, v in self.names:
            if k == text:
                return v
        raise KeyError(text)

    def as_dict(self) -> dict[str, str]:
        return dict(self.names)


def standardize(k: IntFormula, kind: ImpKind | None = None) -> tuple[StandardSequent, NameTable]:
    """Standard sequent of ``k`` with deterministic fresh names ``_w1...``.

    The implication kind is read off the formula; for a bare atom it is
    indeterminate and the ``kind`` argument (default the branching one)
    decides.
    """
    kind = _formula_kind(k) or kind or ImpKind.BIMP
    nonatomic = canonical_order(g for g in int_subformulas(k) if isinstance(g, IntImp))
    names = tuple((fmt_int(g), f"_w{i + 1}") for i, g in enumerate(nonatomic))
    table = NameTable(names)
    rows = tuple(
        Row(
            X=table.lookup(g),
            Y=table.lookup(g.left),
            Z=table.lookup(g.right),
            P=table.lookup(g.left),
            Q=table.lookup(g.right),
            R=table.lookup(g),
        )
        for g in nonatomic
    )
    return StandardSequent(kind=kind, rows=rows, succedent=table.lookup(k)), table


def _formula_kind(k: IntFormula) -> ImpKind | None:
    from counterplay.formula import int_formula_kind

    return int_formula_kind(k)


def desequentize(s: StandardSequent) -> AffineFormula:
    """The guarded one-formula reading of a standard sequent.

    ``!(X1 & Y1 -> Z1) & ... & !((!P1 -> Q1) -> R1) & ... -> W`` with the
    recurrence selected by the sequent's implication kind; an empty row
    list yields the bare succedent atom.
    """
    recur = BRecur if s.kind is ImpKind.BIMP else PRecur
    if not s.rows:
        return Atom(s.succedent)
    first = [
        recur(Limp(ParConj((Atom(r.X), Atom(r.Y))), Atom(r.Z))) for r in s.rows
    ]
    second = [
        recur(Limp(Limp(recur(Atom(r.P)), Atom(r.Q)), Atom(r.R))) for r in s.rows
    ]
    conjuncts = first + second
    body = conjuncts[0] if len(conjuncts) == 1 else ParConj(tuple(conjuncts))
    return Limp(body, Atom(s.succedent))


def strengthen(d: AffineFormula) -> AffineFormula:
    """Insert the missing recurrence before every left-hand operand.

    The guarded reading deliberately omits a recurrence on the X and Y
    conjuncts and on the inner implication of the second family; adding
    them produces the stronger intended-meaning formula, used only for
    structural comparison.
    """
    if isinstance(d, Atom):
        return d
    recur = _recur_of(d)
    if not isinstance(d, Limp):
        raise ValueError("not a desequentization shape")
    body, w = d.left, d.right
    conjuncts = list(body.items) if isinstance(body, ParConj) else [body]
    out = []
    for c in conjuncts:
        inner = c.body
        if isinstance(inner.left, ParConj):
            x, y = inner.left.items
            out.append(recur(Limp(ParConj((recur(x), recur(y))), inner.right)))
        else:
            out.append(recur(Limp(recur(inner.left), inner.right)))
    new_body = out[0] if len(out) == 1 else ParConj(tuple(out))
    return Limp(new_body, w)


def _recur_of(d: AffineFormula):
    probe = d.left if isinstance(d, Limp) else d
    if isinstance(probe, ParConj):
        probe = probe.items[0]
    return type(probe)


@dataclass(frozen=True)
class GameForm:
    """Playable shape: a standard sequent with atoms read as atom games.

    Each atom A is paired with a unique elementary letter and the atom
    game that asks for one constant under that letter; distinct atoms get
    distinct letters, equal atoms share one.
    """

    kind: ImpKind
    rows: tuple[Row, ...]
    succedent: str
    letters: tuple[tuple[str, str], ...]  # (atom name, elementary letter)

    @property
    def s(self) -> int:
        return len(self.rows)

    def letter(self, atom_name: str) -> str:
        for a, l in self.letters:
            if a == atom_name:
                return l
        raise KeyError(atom_name)

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "s": self.s,
            "rows": [
                {"X": r.X, "Y": r.Y, "Z": r.Z, "P": r.P, "Q": r.Q, "R": r.R}
                for r in self.rows
            ],
            "W": self.succedent,
            "letters": dict(self.letters),
        }

    @staticmethod
    def from_json(data: dict[str, Any]) -> "GameForm":
        return GameForm(
            kind=ImpKind(data["kind"]),
            rows=tuple(Row(**r) for r in data["rows"]),
            succedent=data["W"],
            letters=tuple(sorted(data["letters"].items())),
        )


def elementarize(d: AffineFormula) -> GameForm:
    """Read the guarded formula as a game form, one elementary letter per atom."""
    kind, rows, w = _parse_template(d)
    atoms = sorted({w} | {a for r in rows for a in (r.X, r.Y, r.Z, r.P, r.Q, r.R)})
    letters = tuple((a, a) for a in atoms)
    return GameForm(kind=kind, rows=rows, succedent=w, letters=letters)


def _parse_template(d: AffineFormula) -> tuple[ImpKind, tuple[Row, ...], str]:
    if isinstance(d, Atom):
        return ImpKind.BIMP, (), d.name

    def fail() -> ValueError:
        return ValueError("formula does not match the game template")

    if not isinstance(d, Limp) or not isinstance(d.right, Atom):
        raise fail()
    body, w = d.left, d.right.name
    conjuncts = list(body.items) if isinstance(body, ParConj) else [body]
    if len(conjuncts) % 2 != 0:
        raise fail()
    s = len(conjuncts) // 2
    recur = type(conjuncts[0])
    if recur not in (BRecur, PRecur):
        raise fail()
    kind = ImpKind.BIMP if recur is BRecur else ImpKind.PIMP
    rows = []
    for j in range(s):
        fst, snd = conjuncts[j], conjuncts[s + j]
        if not (isinstance(fst, recur) and isinstance(snd, recur)):
            raise fail()
        a, b = fst.body, snd.body
        if not (
            isinstance(a, Limp)
            and isinstance(a.left, ParConj)
            and len(a.left.items) == 2
            and all(isinstance(x, Atom) for x in a.left.items)
            and isinstance(a.right, Atom)
        ):
            raise fail()
        if not (
            isinstance(b, Limp)
            and isinstance(b.left, Limp)
            and isinstance(b.left.left, recur)
            and isinstance(b.left.left.body, Atom)
            and isinstance(b.left.right, Atom)
            and isinstance(b.right, Atom)
        ):
            raise fail()
        rows.append(
            Row(
                X=a.left.items[0].name,
                Y=a.left.items[1].name,
                Z=a.right.name,
                P=b.left.left.body.name,
                Q=b.left.right.name,
                R=b.right.name,
            )
        )
    return kind, tuple(rows), w


def game_form_of(k: IntFormula, kind: ImpKind | None = None) -> GameForm:
    """Full pipeline: standardize, desequentize, elementarize."""
    std, _ = standardize(k, kind)
    gf = elementarize(desequentize(std))
    if gf.kind is not std.kind:
        gf = GameForm(kind=std.kind, rows=gf.rows, succedent=gf.succedent, letters=gf.letters)
    return gf
