import pytest

from counterplay.formula import ImpKind, parse_int
from counterplay.gamecore import Content, Verdict, eval_state
from counterplay.interp import (
    CounterinterpretationError,
    PerfectInterpretation,
    build_dagger,
    build_star,
    claim78_check,
    complexity_of,
    evaluate_descriptor,
    is_sigma_combination,
    truth,
    window_claim_holds,
)
from counterplay.machines import (
    AdversaryRegistry,
    CounterstrategyState,
    IdleAdversary,
    ScriptedAdversary,
    WMatcherAdversary,
    e_c,
    play,
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


class TestPerfectInterpretation:
    def test_default_true(self):
        i = PerfectInterpretation()
        assert truth(i, Content("A", 5))

    def test_exception_false(self):
        i = PerfectInterpretation(exceptions=frozenset({Content("A", 5)}))
        assert not truth(i, Content("A", 5))
        assert truth(i, Content("A", 6))
        assert truth(i, Content("B", 5))

    def test_json_roundtrip(self):
        i = PerfectInterpretation(exceptions=frozenset({Content("A", 5), Content("B", 1)}))
        assert PerfectInterpretation.from_json(i.to_json()) == i

    def test_virgin_token_rejected(self):
        with pytest.raises(ValueError):
            PerfectInterpretation().truth(Content("A", None))


class TestBuildDagger:
    def test_idle_short_no_exceptions(self):
        rec, state = play(IdleAdversary(), wform())
        dag = build_dagger(rec, state)
        assert dag.exceptions == frozenset()
        assert eval_state(state, dag.truth) is Verdict.BOT

    def test_unmatched_consequent_choice_falsified(self):
        rec, state = play(ScriptedAdversary([(1, "2.5")]), peirce_form())
        dag = build_dagger(rec, state)
        wletter = peirce_form().letter(peirce_form().succedent)
        assert Content(wletter, 5) in dag.exceptions
        assert eval_state(state, dag.truth) is Verdict.BOT

    def test_long_branch_falsifies_master_chain(self):
        rec, state = play(WMatcherAdversary(wform()), wform())
        assert rec.classification == "LONG"
        dag = build_dagger(rec, state)
        assert dag.exceptions == frozenset({Content("W", 1)})
        assert eval_state(state, dag.truth) is Verdict.BOT

    def test_non_quiescent_rejected(self):
        rec = schedule(IdleAdversary(), CounterstrategyState(wform()), budget=2)
        from counterplay.gamecore import ResidualState, parse_move
        from counterplay.machines import play as _p

        state = ResidualState(wform())
        for pos, (label, move, _) in enumerate(rec.run, start=1):
            state.apply(label, parse_move(move, 1), pos)
        with pytest.raises(CounterinterpretationError):
            build_dagger(rec, state)


class TestStar:
    def registry(self):
        reg = AdversaryRegistry()
        reg.register(1, ScriptedAdversary([(1, "2.5")]))
        reg.register(2, WMatcherAdversary(wform()))
        return reg

    def test_unregistered_is_idle_branch(self):
        star = build_star(AdversaryRegistry(), wform())
        dag = star.materialize(42)
        assert dag.exceptions == frozenset()

    def test_memoized(self):
        star = build_star(self.registry(), wform())
        assert star.materialize(1) == star.materialize(1)

    def test_indexed_equation(self):
        star = build_star(self.registry(), wform())
        dag1 = star.materialize(1)
        for a in (1, 2, 5, 9):
            assert star.truth("W", a, 1) == dag1.truth(Content("W", a))

    def test_two_paths_agree(self):
        reg = self.registry()
        for c in (1, 2, 3):
            assert claim78_check(c, wform(), reg)


class TestDescriptors:
    def test_shape(self):
        d = complexity_of("W")
        assert is_sigma_combination(d)
        blob = d.to_json()
        assert blob["op"] == "or" and len(blob["children"]) == 2

    def test_agreement_short(self):
        form = wform()
        rec, state = play(ScriptedAdversary([(1, "2.5")]), form)
        dag = build_dagger(rec, state)
        d = complexity_of("W")
        for a in (1, 2, 5):
            want = dag.truth(Content("W", a))
            got = evaluate_descriptor(d, "W", a, rec, state, form)
            assert got == want, (a, want, got)

    def test_agreement_long(self):
        form = wform()
        rec, state = play(WMatcherAdversary(form), form)
        dag = build_dagger(rec, state)
        for letter in ("W", "E", "T"):
            d = complexity_of(letter)
            for a in (1, 2, 3):
                assert evaluate_descriptor(d, letter, a, rec, state, form) == dag.truth(
                    Content(letter, a)
                )

    def test_long_leaf_fires_at_switch(self):
        form = wform()
        rec, state = play(WMatcherAdversary(form), form)
        from counterplay.interp import _switch_position

        assert _switch_position(rec, form) == rec.delta

    def test_short_branch_long_leaf_never_fires(self):
        form = wform()
        rec, state = play(IdleAdversary(), form)
        from counterplay.interp import _switch_position

        assert _switch_position(rec, form) is None

    def test_window_claim(self):
        form = wform()
        rec, state = play(WMatcherAdversary(form), form)
        assert window_claim_holds(rec, state, form)


class TestIllegalAdversary:
    def test_two_paths_agree_on_forfeit(self):
        reg = AdversaryRegistry()
        reg.register(1, ScriptedAdversary([(1, "2.5"), (2, "2.6")]))
        assert claim78_check(1, wform(), reg)
