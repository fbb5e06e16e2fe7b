"""Adversaries, the scheduler, the counterstrategy, and the copy-cat machine.

The scheduler interleaves an engine (which runs until it grants
permission) with an adversary (which then observes the current run and
makes at most one move).  The engine plays the bottom role in game-form
sessions and the top role in copy-cat sessions; the recorded run is
oriented with the adversary's moves labeled top, so the engine-side view
is its label flip.

Infinite plays are replaced by quiescence with finite adversaries: a
session stops once the adversary is exhausted and a full engine pass
emits nothing new, or when the step budget runs out.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Optional, Protocol

from counterplay.gamecore import (
    BOT,
    TOP,
    ConsequentChoice,
    InnerChoice,
    Metatype,
    MoleculeId,
    Move,
    ResidualState,
    enumerate_top_moves,
    fmt_move,
    fresh_choice_constant,
    matchingly_devirginized,
    molecule_sort_key,
    parse_move,
)
from counterplay.gamecore.moves import MoveError, SlotChoice
from counterplay.gamecore.state import IllegalMove
from counterplay.transform import GameForm


@dataclass(frozen=True)
class Valuation:
    """Total variable assignment with default constant 1."""

    assignments: tuple[tuple[str, int], ...] = ()

    def get(self, var: str) -> int:
        for k, v in self.assignments:
            if k == var:
                return v
        return 1

    @staticmethod
    def pointing(var: str, const: int) -> "Valuation":
        return Valuation(((var, const),))


def e_c(c: int) -> Valuation:
    """The valuation sending the session index variable to ``c``."""
    return Valuation.pointing("z", c)


@dataclass(frozen=True)
class BranchRecord:
    """Everything observable about one scheduled play."""

    run: tuple[tuple[str, str, int], ...]  # (label, move text, step)
    permission_steps: tuple[int, ...]
    phase_steps: tuple[tuple[str, int], ...]
    delta: int | None  # labmove count before the switch to the final phase
    classification: str  # "SHORT" | "LONG"
    quiescent: bool
    adversary_illegal: bool
    steps: int
    engine_moves: int
    adversary_moves: int
    session_kind: str  # "gameform" | "copycat"
    valuation: tuple[tuple[str, int], ...] = ()

    def to_json(self) -> dict[str, Any]:
        return {
            "run": [{"label": l, "move": m, "step": s} for (l, m, s) in self.run],
            "permission_steps": list(self.permission_steps),
            "phase_steps": dict(self.phase_steps),
            "delta": self.delta,
            "classification": self.classification,
            "quiescent": self.quiescent,
            "adversary_illegal": self.adversary_illegal,
            "steps": self.steps,
            "engine_moves": self.engine_moves,
            "adversary_moves": self.adversary_moves,
            "session_kind": self.session_kind,
            "valuation": [list(p) for p in self.valuation],
        }


class Adversary(Protocol):
    """Deterministic step function with a declared finite move budget."""

    def fresh(self) -> "Adversary": ...

    def step(self, observed: tuple[tuple[str, str, int], ...], permission_count: int) -> Optional[str]: ...

    def done(self) -> bool: ...


class IdleAdversary:
    """Never moves."""

    def fresh(self) -> "IdleAdversary":
        return IdleAdversary()

    def step(self, observed, permission_count):
        return None

    def done(self) -> bool:
        return True


class ScriptedAdversary:
    """Replays (permission ordinal, move template) pairs.

    A template may reference the choice constant of the n-th labmove of
    the observed run as ``@n`` (1-based).
    """

    def __init__(self, entries: list[tuple[int, str]]) -> None:
        self.entries = sorted(entries)
        self.used = 0

    def fresh(self) -> "ScriptedAdversary":
        return ScriptedAdversary(list(self.entries))

    def done(self) -> bool:
        return self.used >= len(self.entries)

    def step(self, observed, permission_count):
        if self.done():
            return None
        trigger, template = self.entries[self.used]
        if permission_count < trigger:
            return None
        self.used += 1
        return _expand_template(template, observed)

    @staticmethod
    def from_json(data: list) -> "ScriptedAdversary":
        return ScriptedAdversary([(int(t), str(m)) for t, m in data])


def _expand_template(template: str, observed) -> str:
    out = template
    while "@" in out:
        at = out.index("@")
        j = at + 1
        while j < len(out) and out[j].isdigit():
            j += 1
        n = int(out[at + 1 : j])
        if not 1 <= n <= len(observed):
            raise ValueError(f"template references labmove {n} of a shorter run")
        move_text = observed[n - 1][1]
        if move_text.endswith(":"):
            raise ValueError("template references a replication move")
        const = move_text.rsplit(".", 1)[-1]
        out = out[:at] + const + out[j:]
    return out


class RandomLegalAdversary:
    """Uniform choice among the patient legal templates, seeded."""

    def __init__(self, form: GameForm, seed: int, budget: int = 3) -> None:
        self.form = form
        self.seed = seed
        self.budget = budget
        self.rng = random.Random(seed)
        self.moves_made = 0
        self.attempts = 0

    def fresh(self) -> "RandomLegalAdversary":
        return RandomLegalAdversary(self.form, self.seed, self.budget)

    def done(self) -> bool:
        return self.moves_made >= self.budget or self.attempts >= self.budget + 5

    def step(self, observed, permission_count):
        if self.done():
            return None
        self.attempts += 1
        state = _project_observed(self.form, observed)
        options = enumerate_top_moves(state)
        if not options or self.rng.random() < 0.2:
            return None
        entry = self.rng.choice(sorted(options, key=lambda e: e["template"]))
        text = entry["template"].replace("<a>", str(self.rng.randint(1, 6)))
        self.moves_made += 1
        return text


class GreedyMatcherAdversary:
    """Copies resolved negative contents into virgin positive molecules."""

    def __init__(self, form: GameForm, budget: int = 4) -> None:
        self.form = form
        self.budget = budget
        self.moves_made = 0
        self.attempts = 0

    def fresh(self) -> "GreedyMatcherAdversary":
        return GreedyMatcherAdversary(self.form, self.budget)

    def done(self) -> bool:
        return self.moves_made >= self.budget or self.attempts >= self.budget + 4

    def step(self, observed, permission_count):
        if self.done():
            return None
        self.attempts += 1
        state = _project_observed(self.form, observed)
        negatives = {}
        for mol in sorted(state.molecules(), key=molecule_sort_key):
            cell = state.cell(mol)
            if cell is not None and mol.mt in (Metatype.Z, Metatype.R, Metatype.P):
                negatives.setdefault(state.letter_of(mol), cell.const)
        for mol in sorted(state.molecules(), key=molecule_sort_key):
            if mol.mt not in (Metatype.W, Metatype.X, Metatype.Y, Metatype.Q):
                continue
            if state.cell(mol) is not None:
                continue
            letter = state.letter_of(mol)
            if letter not in negatives:
                continue
            move = _patient_move_for(state, mol, negatives[letter])
            self.moves_made += 1
            return fmt_move(move)
        return None


class WMatcherAdversary:
    """Forces the long branch: echoes a negative constant whose letter
    matches the consequent letter into the consequent atom game."""

    def __init__(self, form: GameForm) -> None:
        self.form = form
        self.moves_made = 0
        self.attempts = 0

    def fresh(self) -> "WMatcherAdversary":
        return WMatcherAdversary(self.form)

    def done(self) -> bool:
        return self.moves_made >= 1 or self.attempts >= 6

    def step(self, observed, permission_count):
        if self.done():
            return None
        self.attempts += 1
        state = _project_observed(self.form, observed)
        if state.consequent is not None:
            return None
        target = state.form.letter(state.form.succedent)
        for mol in sorted(state.molecules(), key=molecule_sort_key):
            cell = state.cell(mol)
            if (
                cell is not None
                and mol.mt in (Metatype.Z, Metatype.R, Metatype.P)
                and state.letter_of(mol) == target
            ):
                self.moves_made += 1
                return fmt_move(ConsequentChoice(cell.const))
        return None


def _project_observed(form: GameForm, observed) -> ResidualState:
    state = ResidualState(form)
    for pos, (label, move_text, _step) in enumerate(observed, start=1):
        state.apply(label, parse_move(move_text, form.s), pos)
    return state


def _patient_move_for(state: ResidualState, mol: MoleculeId, const: int) -> Move:
    if mol.mt is Metatype.W:
        return ConsequentChoice(const)
    i = mol.j if mol.mt in (Metatype.X, Metatype.Y, Metatype.Z) else state.form.s + mol.j
    if mol.mt is Metatype.P:
        return InnerChoice(i, mol.w, mol.u, const)
    return SlotChoice(i, mol.w, mol.mt.value, const)


# ---------------------------------------------------------------------------
# Game-form sessions and the counterstrategy
# ---------------------------------------------------------------------------


FIRST, SECOND, THIRD = "FIRST", "SECOND", "THIRD"


class PlaySession:
    """Single play of a game form: engine as bottom, adversary as top."""

    def __init__(self, form: GameForm) -> None:
        self.form = form
        self.state = ResidualState(form)
        self.run: list[tuple[str, str, int]] = []
        self.permission_steps: list[int] = []
        self.phase_steps: list[tuple[str, int]] = [(FIRST, 0)]
        self.step_counter = 0
        self.delta: int | None = None
        self.engine_moves = 0
        self.adversary_moves = 0
        self.phase = FIRST
        self.third_swept = False

    # -- events -------------------------------------------------------------

    def _next_step(self) -> int:
        self.step_counter += 1
        return self.step_counter

    def emit_engine(self, move: Move) -> None:
        step = self._next_step()
        self.state.apply(BOT, move, len(self.run) + 1)
        self.run.append((BOT, fmt_move(move), step))
        self.engine_moves += 1

    def emit_adversary(self, move_text: str) -> None:
        move = parse_move(move_text, self.form.s)
        step = self._next_step()
        self.state.apply(TOP, move, len(self.run) + 1)
        self.run.append((TOP, move_text, step))
        self.adversary_moves += 1

    def grant_permission(self) -> None:
        self.permission_steps.append(self._next_step())

    def observed(self) -> tuple[tuple[str, str, int], ...]:
        return tuple(self.run)

    # -- counterstrategy ------------------------------------------------------

    def engine_pass(self) -> tuple[int, bool]:
        """One engine pass up to (not including) a permission grant.

        Returns (moves emitted, switched-to-final-phase).
        """
        emitted = 0
        switched = False
        if self.phase == FIRST:
            for mol in sorted(self.state.molecules(), key=molecule_sort_key):
                if mol.mt is Metatype.P and self.state.cell(mol) is None:
                    self.emit_engine(self._devirginize(mol))
                    emitted += 1
            self.phase = SECOND
            self.phase_steps.append((SECOND, self.step_counter))
        if self.phase == SECOND:
            if matchingly_devirginized(self.state, MoleculeId(Metatype.W, 0)):
                self.phase = THIRD
                self.delta = len(self.run)
                self.phase_steps.append((THIRD, self.step_counter))
                switched = True
            else:
                emitted += self._routines_fixpoint()
                return emitted, switched
        if self.phase == THIRD and not self.third_swept:
            for mol in sorted(self.state.molecules(), key=molecule_sort_key):
                if mol.mt in (Metatype.Z, Metatype.R) and self.state.cell(mol) is None:
                    self.emit_engine(self._devirginize(mol))
                    emitted += 1
            self.third_swept = True
        return emitted, switched

    def _devirginize(self, mol: MoleculeId) -> Move:
        return _patient_move_for(self.state, mol, fresh_choice_constant(self.state))

    def _routines_fixpoint(self) -> int:
        s = self.form.s
        emitted = 0
        fired = True
        while fired:
            fired = False
            for j in range(1, s + 1):
                for w in self.state.leaves(j):
                    z = MoleculeId(Metatype.Z, j, w)
                    if (
                        self.state.cell(z) is None
                        and matchingly_devirginized(self.state, MoleculeId(Metatype.X, j, w))
                        and matchingly_devirginized(self.state, MoleculeId(Metatype.Y, j, w))
                    ):
                        self.emit_engine(self._devirginize(z))
                        emitted += 1
                        fired = True
            for j in range(1, s + 1):
                i = s + j
                for w in self.state.leaves(i):
                    r = MoleculeId(Metatype.R, j, w)
                    if (
                        self.state.cell(r) is None
                        and matchingly_devirginized(self.state, MoleculeId(Metatype.Q, j, w))
                    ):
                        self.emit_engine(self._devirginize(r))
                        emitted += 1
                        fired = True
        return emitted

    def record(self, quiescent: bool, adversary_illegal: bool, valuation: Valuation) -> BranchRecord:
        return BranchRecord(
            run=tuple(self.run),
            permission_steps=tuple(self.permission_steps),
            phase_steps=tuple(self.phase_steps),
            delta=self.delta,
            classification="LONG" if self.delta is not None else "SHORT",
            quiescent=quiescent,
            adversary_illegal=adversary_illegal,
            steps=self.step_counter,
            engine_moves=self.engine_moves,
            adversary_moves=self.adversary_moves,
            session_kind="gameform",
            valuation=valuation.assignments,
        )


@dataclass
class CounterstrategyState:
    """Factory marker for scheduling the game-form engine."""

    form: GameForm

    def fresh_session(self) -> PlaySession:
        return PlaySession(self.form)


def schedule(
    adv: Adversary,
    epm: "CounterstrategyState | CopycatState",
    val: Valuation = Valuation(),
    budget: int = 10000,
) -> BranchRecord:
    """Deterministic interleaving of the engine and one adversary.

    The engine runs to its next permission grant; the adversary then
    observes the run and answers with at most one move.  Stops at the
    step budget or at quiescence (adversary exhausted, engine pass
    empty, no reply).  An illegal adversary move ends the play with the
    record flagged.
    """
    if budget < 1:
        raise ValueError("step budget must be positive")
    if isinstance(epm, CopycatState):
        return _schedule_copycat(adv, epm, val, budget)
    session = epm.fresh_session()
    adversary = adv.fresh()
    illegal = False
    quiescent = False
    while session.step_counter < budget:
        emitted, _ = session.engine_pass()
        session.grant_permission()
        reply = adversary.step(session.observed(), len(session.permission_steps))
        if reply is not None:
            try:
                session.emit_adversary(reply)
            except (IllegalMove, MoveError):
                illegal = True
                break
            continue
        if adversary.done() and emitted == 0:
            quiescent = True
            break
    return session.record(quiescent, illegal, val)


def play(
    adv: Adversary,
    form: GameForm,
    val: Valuation = Valuation(),
    budget: int = 10000,
) -> tuple[BranchRecord, ResidualState]:
    """Schedule and return the record together with the final state."""
    rec = schedule(adv, CounterstrategyState(form), val, budget)
    state = ResidualState(form)
    for pos, (label, move_text, _) in enumerate(rec.run, start=1):
        state.apply(label, parse_move(move_text, form.s), pos)
    return rec, state


def quiescent(rec: BranchRecord) -> bool:
    """True when the play stopped with the adversary exhausted and a
    whole engine pass (or the final sweep) emitting nothing."""
    return rec.quiescent


# ---------------------------------------------------------------------------
# Copy-cat sessions
# ---------------------------------------------------------------------------


class CopycatSession:
    """State of one play over the shape ``!G -> many G`` with G an atom game.

    The engine plays top: it replicates the antecedent along the all-zero
    branch and keeps consequent component k synchronized with antecedent
    leaf 0^(k-1)1.  Moves are kept as text; the antecedent move
    ``1.v.d`` lands in every leaf extending v, the consequent move
    ``2.k.d`` in component k.
    """

    def __init__(self) -> None:
        self.tree: set[str] = {""}
        self.run: list[tuple[str, str, int]] = []
        self.permission_steps: list[int] = []
        self.step_counter = 0
        self.k = 0  # iterations completed
        self.engine_moves = 0
        self.adversary_moves = 0
        self.seen = 0  # run prefix already processed by the loop

    def _next_step(self) -> int:
        self.step_counter += 1
        return self.step_counter

    def leaves(self) -> list[str]:
        return sorted((w for w in self.tree if w + "0" not in self.tree), key=lambda w: (len(w), w))

    def emit(self, label: str, text: str) -> None:
        step = self._next_step()
        if text.startswith("1.") and text.endswith(":"):
            w_text = text[2:-1]
            w = "" if w_text == "e" else w_text
            self.tree |= {w + "0", w + "1"}
        self.run.append((label, text, step))
        if label == TOP:
            self.engine_moves += 1
        else:
            self.adversary_moves += 1

    def ant_moves_at(self, leaf: str) -> list[tuple[str, str]]:
        """(label, payload) pairs landing at an antecedent leaf, oldest first."""
        out = []
        for label, text, _ in self.run:
            if text.startswith("1.") and not text.endswith(":"):
                v, _, delta = text[2:].partition(".")
                v = "" if v == "e" else v
                if leaf.startswith(v):
                    out.append((label, delta))
        return out

    def cons_moves_at(self, k: int) -> list[tuple[str, str]]:
        out = []
        for label, text, _ in self.run:
            if text.startswith("2."):
                idx, _, delta = text[2:].partition(".")
                if int(idx) == k:
                    out.append((label, delta))
        return out


@dataclass
class CopycatState:
    """Factory marker for scheduling the copy-cat engine."""

    def fresh_session(self) -> CopycatSession:
        return CopycatSession()


def copycat_iteration(session: CopycatSession) -> int:
    """One loop pass: answer fresh adversary moves, replicate, catch up.

    Returns the number of engine moves emitted.
    """
    emitted = 0
    # replies to adversary moves received since the last pass
    fresh = session.run[session.seen :]
    for label, text, _ in fresh:
        if label != BOT:
            continue
        if text.startswith("2."):
            idx, _, delta = text[2:].partition(".")
            j = int(idx)
            if 1 <= j <= session.k:
                session.emit(TOP, f"1.{'0' * (j - 1)}1.{delta}")
                emitted += 1
        elif text.startswith("1.") and not text.endswith(":"):
            v, _, delta = text[2:].partition(".")
            v = "" if v == "e" else v
            for j in range(1, session.k + 1):
                if ("0" * (j - 1) + "1").startswith(v):
                    session.emit(TOP, f"2.{j}.{delta}")
                    emitted += 1
    session.seen = len(session.run)
    # next iteration: replicate the all-zero leaf
    session.k += 1
    k = session.k
    w = "0" * (k - 1)
    session.emit(TOP, f"1.{w or 'e'}:")
    emitted += 1
    session.seen = len(session.run)
    # catch-up for the newly final leaf w1 and component k
    leaf = w + "1"
    for label, delta in session.ant_moves_at(leaf):
        if label == BOT:
            session.emit(TOP, f"2.{k}.{delta}")
            emitted += 1
    for label, delta in session.cons_moves_at(k):
        if label == BOT:
            session.emit(TOP, f"1.{leaf}.{delta}")
            emitted += 1
    session.seen = len(session.run)
    return emitted


def _schedule_copycat(adv: Adversary, epm: CopycatState, val: Valuation, budget: int) -> BranchRecord:
    session = epm.fresh_session()
    adversary = adv.fresh()
    quiescent_flag = False
    while session.step_counter < budget:
        copycat_iteration(session)
        session.permission_steps.append(session._next_step())
        reply = adversary.step(tuple(session.run), len(session.permission_steps))
        if reply is not None:
            session.emit(BOT, reply)
            continue
        if adversary.done():
            # every pending reply was processed at the top of the iteration
            # and all activated components are synchronized; from here each
            # further iteration only unfolds the self-similar zero-branch
            # tail, so the position ledger is stable
            quiescent_flag = True
            break
    return BranchRecord(
        run=tuple(session.run),
        permission_steps=tuple(session.permission_steps),
        phase_steps=(("LOOP", 0),),
        delta=None,
        classification="SHORT",
        quiescent=quiescent_flag,
        adversary_illegal=False,
        steps=session.step_counter,
        engine_moves=session.engine_moves,
        adversary_moves=session.adversary_moves,
        session_kind="copycat",
        valuation=val.assignments,
    )


# ---------------------------------------------------------------------------
# Adversary registry
# ---------------------------------------------------------------------------


class AdversaryRegistry:
    """Explicit index-to-adversary table; unknown indices answer idle."""

    def __init__(self) -> None:
        self._table: dict[int, Adversary] = {}

    def register(self, c: int, adv: Adversary) -> None:
        if c in self._table:
            raise ValueError(f"index {c} already registered")
        if c < 1:
            raise ValueError("indices are positive")
        self._table[c] = adv

    def lookup(self, c: int) -> Adversary:
        return self._table.get(c, IdleAdversary())

    def indices(self) -> list[int]:
        return sorted(self._table)

    @staticmethod
    def from_json(data: dict[str, Any], form: GameForm) -> "AdversaryRegistry":
        reg = AdversaryRegistry()
        for key, spec in data.items():
            reg.register(int(key), adversary_from_json(spec, form))
        return reg


def adversary_from_json(spec: Any, form: GameForm) -> Adversary:
    """Adversary loader: "idle", scripted entry lists, or named presets."""
    if spec == "idle":
        return IdleAdversary()
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == "random":
            return RandomLegalAdversary(form, int(spec.get("seed", 0)), int(spec.get("budget", 3)))
        if kind == "greedy":
            return GreedyMatcherAdversary(form, int(spec.get("budget", 4)))
        if kind == "wmatcher":
            return WMatcherAdversary(form)
        if kind == "script":
            return ScriptedAdversary.from_json(spec["entries"])
        raise ValueError(f"unknown adversary kind {kind!r}")
    if isinstance(spec, list):
        return ScriptedAdversary.from_json(spec)
    raise ValueError(f"bad adversary spec: {spec!r}")
