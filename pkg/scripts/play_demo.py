#!/usr/bin/env python3
"""Narrated end-to-end demonstration.

Walks one short-branch play (a classical non-theorem against the
constant-echoing adversary) and one long-branch play (the consequent
echo on a one-row form), printing the run, the phase switches, the
master chain when there is one, and the interpretation under which the
adversary's play lost.
"""

from counterplay.calculus import int_prove
from counterplay.formula import ImpKind, fmt_int, parse_int
from counterplay.gamecore import eval_state, find_master_chain
from counterplay.interp import build_dagger
from counterplay.kripke import countermodel_from_trace
from counterplay.machines import ScriptedAdversary, WMatcherAdversary, play
from counterplay.transform import GameForm, Row, game_form_of


def narrate(title, form, adv):
    print(f"\n=== {title} ===")
    rec, state = play(adv, form)
    for label, move, step in rec.run:
        who = "engine" if label == "B" else "adversary"
        print(f"  step {step:>3}  {who:<9} {move}")
    print(f"  classification: {rec.classification}, quiescent: {rec.quiescent}")
    if rec.delta is not None:
        chain = find_master_chain(state, rec.delta)
        print("  master chain:", " -> ".join(m.label() for m in chain))
    dagger = build_dagger(rec, state)
    falsified = sorted(c.text() for c in dagger.exceptions)
    print("  falsified contents:", falsified or "(none)")
    verdict = eval_state(state, dagger.truth)
    print("  verdict:", "bottom (engine) wins" if verdict.value == "B" else "top wins")


def main() -> int:
    peirce = parse_int("((P -o Q) -o P) -o P", ImpKind.BIMP)
    outcome = int_prove(peirce)
    print(f"{fmt_int(peirce)} is {'provable' if outcome.is_proved else 'not provable'}")
    model = countermodel_from_trace(outcome.refuted)
    print("countermodel:", model.to_json())

    narrate(
        "short branch: unmatched consequent choice",
        game_form_of(peirce),
        ScriptedAdversary([(1, "2.5")]),
    )

    one_row = GameForm(
        kind=ImpKind.BIMP,
        rows=(Row(X="U", Y="V", Z="T", P="W", Q="D", R="E"),),
        succedent="W",
        letters=tuple((a, a) for a in ("U", "V", "T", "W", "D", "E")),
    )
    narrate(
        "long branch: consequent echo on a one-row form",
        one_row,
        WMatcherAdversary(one_row),
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
