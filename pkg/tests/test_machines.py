import pytest

from counterplay.formula import Atom, ImpKind, parse_int
from counterplay.gamecore import (
    BOT,
    TOP,
    Metatype,
    MoleculeId,
    Verdict,
    eval_state,
    find_master_chain,
    parse_move,
)
from counterplay.machines import (
    AdversaryRegistry,
    BranchRecord,
    CopycatState,
    CounterstrategyState,
    GreedyMatcherAdversary,
    IdleAdversary,
    RandomLegalAdversary,
    ScriptedAdversary,
    Valuation,
    WMatcherAdversary,
    copycat_iteration,
    CopycatSession,
    e_c,
    play,
    quiescent,
    schedule,
)
from counterplay.transform import GameForm, Row, game_form_of


def wform():
    return GameForm(
        kind=ImpKind.BIMP,
        rows=(Row(X="U", Y="V", Z="T", P="W", Q="D", R="E"),),
        succedent="W",
        letters=tuple((a, a) for a in ("U", "V", "T", "W", "D", "E")),
    )


def peirce_form():
    return game_form_of(parse_int("((P -o Q) -o P) -o P", ImpKind.BIMP))


class TestScheduler:
    def test_zero_budget_rejected(self):
        with pytest.raises(ValueError):
            schedule(IdleAdversary(), CounterstrategyState(wform()), budget=0)

    def test_idle_s1(self):
        rec, state = play(IdleAdversary(), wform())
        # the opening phase resolves the single inner atom-game molecule
        assert [m for (_, m, _) in rec.run] == ["1.2.e.1.1.e.1"]
        assert rec.classification == "SHORT"
        assert rec.quiescent
        assert rec.run[0][0] == BOT

    def test_determinism(self):
        adv = ScriptedAdversary([(1, "2.5"), (2, "1.1.e.1.1.2")])
        r1 = schedule(adv, CounterstrategyState(peirce_form()))
        r2 = schedule(adv, CounterstrategyState(peirce_form()))
        assert r1 == r2

    def test_duality(self):
        rec, _ = play(ScriptedAdversary([(1, "2.5")]), peirce_form())
        flipped = [(TOP if l == BOT else BOT, m, s) for (l, m, s) in rec.run]
        # the engine-side view carries the same moves at the same steps
        assert [m for (_, m, _) in flipped] == [m for (_, m, _) in rec.run]
        assert all(l in (TOP, BOT) for (l, _, _) in rec.run)

    def test_illegal_adversary_flagged(self):
        rec = schedule(ScriptedAdversary([(1, "2.5"), (2, "2.6")]), CounterstrategyState(wform()))
        assert rec.adversary_illegal

    def test_permission_steps_increase(self):
        rec, _ = play(RandomLegalAdversary(peirce_form(), seed=1, budget=2), peirce_form())
        assert list(rec.permission_steps) == sorted(set(rec.permission_steps))

    def test_fairness_bound(self):
        # steps <= molecules-devirginized + 2 * grants (each grant allows
        # one adversary move; every other step is a single devirginization)
        for seed in range(3):
            rec, state = play(RandomLegalAdversary(peirce_form(), seed=seed, budget=3), peirce_form())
            grants = len(rec.permission_steps)
            assert grants >= (rec.steps - rec.engine_moves - rec.adversary_moves)
            assert rec.steps <= rec.engine_moves + rec.adversary_moves + grants


class TestCounterstrategy:
    def test_first_move_is_diversifying(self):
        rec, state = play(IdleAdversary(), wform())
        assert rec.run[0][1] == "1.2.e.1.1.e.1"

    def test_w_match_triggers_final_phase(self):
        # echo the opening constant into the consequent: contents match,
        # the engine switches and sweeps the remaining negative molecules
        rec, state = play(ScriptedAdversary([(1, "2.@1")]), wform())
        assert rec.classification == "LONG"
        assert rec.delta == 2
        assert state.cell(MoleculeId(Metatype.Z, 1, "")) is not None
        assert state.cell(MoleculeId(Metatype.R, 1, "")) is not None

    def test_routine_one_fires(self):
        form = game_form_of(parse_int("P -o P", ImpKind.BIMP))
        # row: X=_w1, Y=P, Z=P, P=P, Q=P, R=_w1; the engine opened with
        # the inner constant 1 on letter P; matching Y with 1 and X with a
        # fresh pair makes both matched, releasing Z
        adv = ScriptedAdversary([(1, "1.1.e.1.2.@1")])
        rec, state = play(adv, form)
        z = state.cell(MoleculeId(Metatype.Z, 1, ""))
        # X is not matched, so the release needs X matched too; Z stays virgin
        assert z is None

    def test_quiescent_flag(self):
        rec, _ = play(IdleAdversary(), wform())
        assert quiescent(rec)

    def test_budget_cutoff_not_quiescent(self):
        rec = schedule(IdleAdversary(), CounterstrategyState(wform()), budget=2)
        assert not rec.quiescent

    def test_fresh_constants_never_reused(self):
        rec, state = play(GreedyMatcherAdversary(peirce_form()), peirce_form())
        consts = []
        for (label, move, _) in rec.run:
            if label == BOT and not move.endswith(":"):
                consts.append(int(move.rsplit(".", 1)[-1]))
        assert len(consts) == len(set(consts))


class TestCopycat:
    def test_first_iteration_replicates_root(self):
        session = CopycatSession()
        copycat_iteration(session)
        assert [m for (_, m, _) in session.run] == ["1.e:"]

    def test_consequent_reply(self):
        session = CopycatSession()
        for _ in range(3):
            copycat_iteration(session)
        session.emit(BOT, "2.3.7")
        copycat_iteration(session)
        assert (TOP, "1.001.7") in [(l, m) for (l, m, _) in session.run]

    def test_antecedent_reply_fans_out(self):
        session = CopycatSession()
        copycat_iteration(session)
        copycat_iteration(session)  # k = 2, leaves 1, 01, 00
        session.emit(BOT, "1.01.5")
        copycat_iteration(session)
        moves = [(l, m) for (l, m, _) in session.run]
        assert (TOP, "2.2.5") in moves

    def test_catchup_covers_early_moves(self):
        session = CopycatSession()
        copycat_iteration(session)
        # adversary resolves a copy deep on the zero branch before the
        # matching component is activated
        session.emit(BOT, "1.0.9")
        copycat_iteration(session)  # activates leaf 01 / component 2
        moves = [(l, m) for (l, m, _) in session.run]
        assert (TOP, "2.2.9") in moves

    def test_scheduled_copycat_quiesces(self):
        rec = schedule(ScriptedAdversary([(1, "1.1.4")]), CopycatState())
        assert rec.session_kind == "copycat"
        assert rec.quiescent


class TestRegistry:
    def test_lookup_unregistered_is_idle(self):
        reg = AdversaryRegistry()
        assert isinstance(reg.lookup(99), IdleAdversary)

    def test_duplicate_register(self):
        reg = AdversaryRegistry()
        reg.register(1, IdleAdversary())
        with pytest.raises(ValueError):
            reg.register(1, IdleAdversary())

    def test_from_json(self):
        reg = AdversaryRegistry.from_json(
            {"1": "idle", "2": {"kind": "script", "entries": [[1, "2.5"]]}}, wform()
        )
        assert isinstance(reg.lookup(2), ScriptedAdversary)

    def test_valuation(self):
        v = e_c(7)
        assert v.get("z") == 7
        assert v.get("x") == 1


class TestSecondPhaseRoutines:
    def test_routine_chain_releases_z(self):
        """Matching both two-atom slots releases the third via the first
        routine; matching the nested slot releases its head via the second."""
        form = game_form_of(parse_int("P -o P", ImpKind.BIMP))
        # rows: X=_w1 Y=P Z=P / P=P Q=P R=_w1, succedent _w1
        adv = ScriptedAdversary(
            [
                (1, "1.1.e.1.2.@1"),  # match Y with the opening constant
                (2, "1.2.e.1.2.@1"),  # match Q; routine two releases R with a fresh constant
                (3, "1.1.e.1.1.@4"),  # echo R's constant into X; routine one releases Z
            ]
        )
        rec, state = play(adv, form)
        r_cell = state.cell(MoleculeId(Metatype.R, 1, ""))
        z_cell = state.cell(MoleculeId(Metatype.Z, 1, ""))
        assert r_cell is not None and z_cell is not None
        assert rec.run[-1][1].startswith("1.1.e.2."), rec.run[-1]

    def test_phase_steps_monotone(self):
        form = game_form_of(parse_int("P -o P", ImpKind.BIMP))
        rec, _ = play(ScriptedAdversary([(1, "2.@1")]), form)
        phases = dict(rec.phase_steps)
        assert phases["FIRST"] <= phases["SECOND"] <= phases.get("THIRD", phases["SECOND"])
