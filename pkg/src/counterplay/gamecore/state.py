"""Residual state of a play: trees, molecules, legality, evaluation.

The state of a run is a pure fold over its labmoves.  Each antecedent
conjunct owns a replication tree of bitstrings; each leaf owns one
molecule per atom slot of its row (and, in the second family, an inner
tree whose leaves own the inner atom-game molecules).  A molecule is
virgin until a choice move lands on it; a choice at an internal tree
node devirginizes the molecule of every leaf extending that node.
Replication splits a leaf in two, both descendants inheriting the leaf's
molecule cells unchanged, including devirginization time and origin.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterator, Optional

from counterplay.gamecore.moves import (
    ConsequentChoice,
    InnerChoice,
    InnerRep,
    Move,
    OuterRep,
    SlotChoice,
    fmt_move,
    parse_move,
)
from counterplay.transform import GameForm

TOP = "T"
BOT = "B"


class Verdict(str, Enum):
    TOP = "T"
    BOT = "B"


@dataclass(frozen=True)
class Labmove:
    label: str  # TOP or BOT
    move: Move
    step: int = 0


Run = tuple[Labmove, ...]


def flip_run(run: Run) -> Run:
    return tuple(
        Labmove(TOP if lm.label == BOT else BOT, lm.move, lm.step) for lm in run
    )


def run_to_json(run: Run, s: int | None = None) -> list[dict[str, Any]]:
    return [{"label": lm.label, "move": fmt_move(lm.move), "step": lm.step} for lm in run]


def run_from_json(data: list[dict[str, Any]], s: int) -> Run:
    return tuple(
        Labmove(d["label"], parse_move(d["move"], s), d.get("step", 0)) for d in data
    )


class Metatype(str, Enum):
    P = "P"
    Q = "Q"
    R = "R"
    X = "X"
    Y = "Y"
    Z = "Z"
    W = "W"


_MT_ORDER = {m: i for i, m in enumerate([Metatype.P, Metatype.Q, Metatype.R, Metatype.X, Metatype.Y, Metatype.Z, Metatype.W])}

_POSITIVE = {Metatype.W, Metatype.X, Metatype.Y, Metatype.Q}


def gender_of(mt: Metatype) -> str:
    return "positive" if mt in _POSITIVE else "negative"


@dataclass(frozen=True)
class MoleculeId:
    mt: Metatype
    j: int  # row index, 0 for the consequent molecule
    w: str = ""
    u: str = ""

    def label(self) -> str:
        if self.mt is Metatype.W:
            return "[W]"
        if self.mt is Metatype.P:
            return f"[P{self.j}]^{self.w or 'e'}_{self.u or 'e'}"
        return f"[{self.mt.value}{self.j}]^{self.w or 'e'}"


def molecule_sort_key(m: MoleculeId):
    return (_MT_ORDER[m.mt], m.j, len(m.w), m.w, len(m.u), m.u)


@dataclass(frozen=True)
class Content:
    """Content token: an atom game (const None) or a resolved instance."""

    letter: str
    const: int | None

    def text(self) -> str:
        return f"{self.letter}({self.const})" if self.const is not None else f"{self.letter}(?)"


@dataclass
class DevCell:
    const: int
    time: int  # 1-based position of the devirginizing labmove in the run
    essence: MoleculeId
    origin: str  # the devirginizing move, formatted
    label: str  # which player made the move


@dataclass
class DevEvent:
    molecule: MoleculeId
    type_atom: str
    time: int
    const: int
    label: str
    origin: str
    sibling_essences: dict[str, Optional[MoleculeId]] = field(default_factory=dict)


class IllegalMove(ValueError):
    pass


class ResidualState:
    """Mutable state; snapshots via ``clone``.  Updated by a single owner."""

    def __init__(self, form: GameForm) -> None:
        self.form = form
        self.consequent: DevCell | None = None
        self.trees: dict[int, set[str]] = {i: {""} for i in range(1, 2 * form.s + 1)}
        # (i, w) -> slot -> DevCell | None
        self.slots: dict[tuple[int, str], dict[str, DevCell | None]] = {}
        self.inner_trees: dict[tuple[int, str], set[str]] = {}
        # (i, w, u) -> DevCell | None
        self.pslots: dict[tuple[int, str, str], DevCell | None] = {}
        self.used_constants: set[int] = set()
        self.events: list[DevEvent] = []
        self.moves_applied = 0
        s = form.s
        for i in range(1, s + 1):
            self.slots[(i, "")] = {"X": None, "Y": None, "Z": None}
        for i in range(s + 1, 2 * s + 1):
            self.slots[(i, "")] = {"Q": None, "R": None}
            self.inner_trees[(i, "")] = {""}
            self.pslots[(i, "", "")] = None

    # -- structure ----------------------------------------------------------

    def clone(self) -> "ResidualState":
        return copy.deepcopy(self)

    def row(self, i: int):
        s = self.form.s
        return self.form.rows[i - 1] if i <= s else self.form.rows[i - s - 1]

    def leaves(self, i: int) -> list[str]:
        t = self.trees[i]
        return sorted((w for w in t if w + "0" not in t), key=lambda w: (len(w), w))

    def inner_leaves(self, i: int, w: str) -> list[str]:
        t = self.inner_trees[(i, w)]
        return sorted((u for u in t if u + "0" not in t), key=lambda u: (len(u), u))

    def type_atom(self, mol: MoleculeId) -> str:
        if mol.mt is Metatype.W:
            return self.form.succedent
        row = self.form.rows[mol.j - 1]
        return getattr(row, mol.mt.value)

    def letter_of(self, mol: MoleculeId) -> str:
        return self.form.letter(self.type_atom(mol))

    def cell(self, mol: MoleculeId) -> DevCell | None:
        if mol.mt is Metatype.W:
            return self.consequent
        if mol.mt is Metatype.P:
            return self.pslots[(self._conj(mol), mol.w, mol.u)]
        return self.slots[(self._conj(mol), mol.w)][mol.mt.value]

    def _conj(self, mol: MoleculeId) -> int:
        if mol.mt in (Metatype.X, Metatype.Y, Metatype.Z):
            return mol.j
        return self.form.s + mol.j

    def molecules(self) -> Iterator[MoleculeId]:
        s = self.form.s
        yield MoleculeId(Metatype.W, 0)
        for j in range(1, s + 1):
            for w in self.leaves(j):
                for mt in (Metatype.X, Metatype.Y, Metatype.Z):
                    yield MoleculeId(mt, j, w)
        for j in range(1, s + 1):
            i = s + j
            for w in self.leaves(i):
                for mt in (Metatype.Q, Metatype.R):
                    yield MoleculeId(mt, j, w)
                for u in self.inner_leaves(i, w):
                    yield MoleculeId(Metatype.P, j, w, u)

    def devirginized_contents(self, gender: str) -> set[Content]:
        out = set()
        for mol in self.molecules():
            if gender_of(mol.mt) != gender:
                continue
            c = self.cell(mol)
            if c is not None:
                out.add(Content(self.letter_of(mol), c.const))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ResidualState):
            return NotImplemented
        return (
            self.form == other.form
            and self.consequent == other.consequent
            and self.trees == other.trees
            and self.slots == other.slots
            and self.inner_trees == other.inner_trees
            and self.pslots == other.pslots
            and self.used_constants == other.used_constants
        )

    # -- snapshot -----------------------------------------------------------

    def to_json(self) -> dict[str, Any]:
        def cell_json(c: DevCell | None):
            if c is None:
                return None
            return {"const": c.const, "time": c.time, "label": c.label, "origin": c.origin}

        s = self.form.s
        conjuncts = []
        for i in range(1, 2 * s + 1):
            leaves = {}
            for w in self.leaves(i):
                entry: dict[str, Any] = {
                    slot: cell_json(c) for slot, c in self.slots[(i, w)].items()
                }
                if i > s:
                    entry["inner"] = {
                        u or "e": cell_json(self.pslots[(i, w, u)])
                        for u in self.inner_leaves(i, w)
                    }
                leaves[w or "e"] = entry
            conjuncts.append({"i": i, "nodes": sorted(self.trees[i]), "leaves": leaves})
        return {
            "consequent": cell_json(self.consequent),
            "conjuncts": conjuncts,
            "used_constants": sorted(self.used_constants),
        }

    # -- legality ------------------------------------------------------------

    def legal_reason(self, label: str, move: Move) -> str | None:
        s = self.form.s
        if isinstance(move, ConsequentChoice):
            if label != TOP:
                return "the consequent choice belongs to the top player"
            if self.consequent is not None:
                return "the consequent atom game is already resolved"
            return None
        if not 1 <= move.i <= 2 * s:
            return f"conjunct index {move.i} out of range"
        tree = self.trees[move.i]
        if move.w not in tree:
            return f"node {move.w or 'e'} is not in the tree of conjunct {move.i}"
        if isinstance(move, OuterRep):
            if label != TOP:
                return "replication belongs to the top player"
            if move.w + "0" in tree:
                return f"node {move.w or 'e'} is not a leaf"
            return None
        affected = [w for w in self.leaves(move.i) if w.startswith(move.w)]
        if isinstance(move, InnerRep):
            if label != TOP:
                return "replication belongs to the top player"
            if move.i <= s:
                return "the first family has no inner tree"
            for l in affected:
                it = self.inner_trees[(move.i, l)]
                if move.u not in it:
                    return f"inner node {move.u or 'e'} missing at leaf {l or 'e'}"
                if move.u + "0" in it:
                    return f"inner node {move.u or 'e'} is not a leaf at leaf {l or 'e'}"
            return None
        if isinstance(move, SlotChoice):
            family2 = move.i > s
            valid = {"Q", "R"} if family2 else {"X", "Y", "Z"}
            if move.slot not in valid:
                return f"slot {move.slot} invalid for conjunct {move.i}"
            owner = TOP if move.slot in ("X", "Y", "Q") else BOT
            if label != owner:
                return f"slot {move.slot} belongs to the other player"
            for l in affected:
                if self.slots[(move.i, l)][move.slot] is not None:
                    return f"a leaf above {move.w or 'e'} already carries a constant there"
            return None
        if isinstance(move, InnerChoice):
            if label != BOT:
                return "the inner atom game belongs to the bottom player"
            if move.i <= s:
                return "the first family has no inner tree"
            for l in affected:
                it = self.inner_trees[(move.i, l)]
                if move.u not in it:
                    return f"inner node {move.u or 'e'} missing at leaf {l or 'e'}"
                for m in self.inner_leaves(move.i, l):
                    if m.startswith(move.u) and self.pslots[(move.i, l, m)] is not None:
                        return "an inner leaf above that node already carries a constant"
            return None
        return f"unrecognized move {move!r}"  # pragma: no cover

    # -- application ----------------------------------------------------------

    def apply(self, label: str, move: Move, position: int | None = None) -> None:
        reason = self.legal_reason(label, move)
        if reason is not None:
            raise IllegalMove(f"{fmt_move(move)}: {reason}")
        if position is None:
            position = self.moves_applied + 1
        self.moves_applied = position
        s = self.form.s
        if isinstance(move, ConsequentChoice):
            mol = MoleculeId(Metatype.W, 0)
            self.consequent = DevCell(move.const, position, mol, fmt_move(move), label)
            self._record(mol, move.const, position, label, fmt_move(move))
            return
        if isinstance(move, OuterRep):
            w = move.w
            self.trees[move.i] |= {w + "0", w + "1"}
            data = self.slots.pop((move.i, w))
            self.slots[(move.i, w + "0")] = dict(data)
            self.slots[(move.i, w + "1")] = copy.copy(data)
            if move.i > s:
                it = self.inner_trees.pop((move.i, w))
                self.inner_trees[(move.i, w + "0")] = set(it)
                self.inner_trees[(move.i, w + "1")] = set(it)
                for u in list(it):
                    if (move.i, w, u) in self.pslots:
                        c = self.pslots.pop((move.i, w, u))
                        self.pslots[(move.i, w + "0", u)] = c
                        self.pslots[(move.i, w + "1", u)] = c
            return
        affected = [w for w in self.leaves(move.i) if w.startswith(move.w)]
        if isinstance(move, InnerRep):
            for l in affected:
                self.inner_trees[(move.i, l)] |= {move.u + "0", move.u + "1"}
                c = self.pslots.pop((move.i, l, move.u))
                self.pslots[(move.i, l, move.u + "0")] = c
                self.pslots[(move.i, l, move.u + "1")] = c
            return
        if isinstance(move, SlotChoice):
            mt = Metatype(move.slot)
            j = move.i if move.i <= s else move.i - s
            for l in affected:
                mol = MoleculeId(mt, j, l)
                self.slots[(move.i, l)][move.slot] = DevCell(
                    move.const, position, mol, fmt_move(move), label
                )
                self._record(mol, move.const, position, label, fmt_move(move))
            return
        if isinstance(move, InnerChoice):
            j = move.i - s
            for l in affected:
                for m in self.inner_leaves(move.i, l):
                    if m.startswith(move.u):
                        mol = MoleculeId(Metatype.P, j, l, m)
                        self.pslots[(move.i, l, m)] = DevCell(
                            move.const, position, mol, fmt_move(move), label
                        )
                        self._record(mol, move.const, position, label, fmt_move(move))
            return

    def _record(self, mol: MoleculeId, const: int, position: int, label: str, origin: str) -> None:
        self.used_constants.add(const)
        siblings: dict[str, Optional[MoleculeId]] = {}
        if mol.mt is Metatype.Z:
            for slot in ("X", "Y"):
                c = self.slots[(mol.j, mol.w)][slot]
                siblings[slot] = c.essence if c is not None else None
        elif mol.mt is Metatype.R:
            c = self.slots[(self.form.s + mol.j, mol.w)]["Q"]
            siblings["Q"] = c.essence if c is not None else None
        self.events.append(
            DevEvent(
                molecule=mol,
                type_atom=self.type_atom(mol),
                time=position,
                const=const,
                label=label,
                origin=origin,
                sibling_essences=siblings,
            )
        )


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------


def legal(state: ResidualState, label: str, move: Move) -> bool:
    return state.legal_reason(label, move) is None


def legal_reason(state: ResidualState, label: str, move: Move) -> str | None:
    return state.legal_reason(label, move)


def project(run: Run, form: GameForm) -> ResidualState:
    """Pure fold of a run into its residual state."""
    state = ResidualState(form)
    for pos, lm in enumerate(run, start=1):
        state.apply(lm.label, lm.move, pos)
    return state


def content_of(state: ResidualState, mol: MoleculeId) -> Content:
    cell = state.cell(mol)
    letter = state.letter_of(mol)
    return Content(letter, cell.const if cell is not None else None)


def matchingly_devirginized(state: ResidualState, mol: MoleculeId) -> bool:
    cell = state.cell(mol)
    if cell is None:
        return False
    token = Content(state.letter_of(mol), cell.const)
    other = "negative" if gender_of(mol.mt) == "positive" else "positive"
    return token in state.devirginized_contents(other)


def fresh_choice_constant(state: ResidualState) -> int:
    c = 1
    while c in state.used_constants:
        c += 1
    return c


def eval_state(state: ResidualState, truth: Callable[[Content], bool]) -> Verdict:
    """Truth of the whole game position under a constant-atom truth oracle.

    A virgin molecule is false; a resolved one is as true as its content.
    A conjunct is true when its body is true at every leaf; the inner
    atom-game component is true when every inner leaf is true.  The whole
    shape is true when some antecedent conjunct fails or the consequent
    holds.
    """

    def mol_truth(mol: MoleculeId) -> bool:
        cell = state.cell(mol)
        if cell is None:
            return False
        return truth(Content(state.letter_of(mol), cell.const))

    s = state.form.s
    antecedent_true = True
    for j in range(1, s + 1):
        for w in state.leaves(j):
            x = mol_truth(MoleculeId(Metatype.X, j, w))
            y = mol_truth(MoleculeId(Metatype.Y, j, w))
            z = mol_truth(MoleculeId(Metatype.Z, j, w))
            if (x and y) and not z:
                antecedent_true = False
    for j in range(1, s + 1):
        i = s + j
        for w in state.leaves(i):
            p_all = all(
                mol_truth(MoleculeId(Metatype.P, j, w, u)) for u in state.inner_leaves(i, w)
            )
            q = mol_truth(MoleculeId(Metatype.Q, j, w))
            r = mol_truth(MoleculeId(Metatype.R, j, w))
            if (not (p_all and not q)) and not r:
                antecedent_true = False
    w_true = mol_truth(MoleculeId(Metatype.W, 0))
    return Verdict.TOP if (not antecedent_true) or w_true else Verdict.BOT


def enumerate_top_moves(state: ResidualState) -> list[dict[str, Any]]:
    """Patient top-player move templates, sound and complete for patient moves.

    Choice entries carry a ``const`` placeholder; any positive constant is
    legal there.  Impatient (internal-node) moves are legal too but not
    enumerated.
    """
    out: list[dict[str, Any]] = []
    s = state.form.s
    if state.consequent is None:
        out.append({"kind": "choice", "template": "2.<a>", "slot": "W"})
    for i in range(1, 2 * s + 1):
        for w in state.leaves(i):
            out.append(
                {"kind": "replicate", "template": fmt_move(OuterRep(i, w)), "slot": None}
            )
            if i <= s:
                for slot in ("X", "Y"):
                    if state.slots[(i, w)][slot] is None:
                        t = fmt_move(SlotChoice(i, w, slot, 1))
                        out.append(
                            {"kind": "choice", "template": t[: t.rfind(".")] + ".<a>", "slot": slot}
                        )
            else:
                if state.slots[(i, w)]["Q"] is None:
                    t = fmt_move(SlotChoice(i, w, "Q", 1))
                    out.append(
                        {"kind": "choice", "template": t[: t.rfind(".")] + ".<a>", "slot": "Q"}
                    )
                for u in state.inner_leaves(i, w):
                    out.append(
                        {
                            "kind": "replicate",
                            "template": fmt_move(InnerRep(i, w, u)),
                            "slot": None,
                        }
                    )
    return out
