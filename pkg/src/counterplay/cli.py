"""Command-line entry points.

Exit codes: 0 affirmative (provable / model found / bottom win
confirmed), 1 negative, 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from counterplay.calculus import int_prove, int_proof_to_json
from counterplay.formula import ImpKind, IntSequent, ParseError, parse_int
from counterplay.gamecore import Verdict, eval_state
from counterplay.interp import build_dagger, claim78_check
from counterplay.kripke import bounded_countermodel_search, countermodel_from_trace
from counterplay.machines import (
    AdversaryRegistry,
    GreedyMatcherAdversary,
    IdleAdversary,
    RandomLegalAdversary,
    WMatcherAdversary,
    adversary_from_json,
    play,
)
from counterplay.transform import desequentize, elementarize, game_form_of, standardize
from counterplay.formula import fmt_affine, fmt_int_sequent, int_subformulas


def _kind(text: str) -> ImpKind:
    return ImpKind.BIMP if text == "bimp" else ImpKind.PIMP


def _parse_formula(text: str, kind: ImpKind):
    parsed = parse_int(text, kind)
    if isinstance(parsed, IntSequent):
        raise ParseError("expected a formula, not a sequent", 0)
    return parsed


def _emit(data: Any) -> None:
    json.dump(data, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def cmd_prove(args) -> int:
    f = _parse_formula(args.formula, _kind(args.kind))
    outcome = int_prove(f)
    if outcome.is_proved:
        _emit({"provable": True, "proof": int_proof_to_json(outcome.proved)})
        return 0
    model = countermodel_from_trace(outcome.refuted)
    _emit({"provable": False, "countermodel": model.to_json()})
    return 1


def cmd_countermodel(args) -> int:
    f = _parse_formula(args.formula, _kind(args.kind))
    bound = args.bound if args.bound else len(int_subformulas(f))
    model = bounded_countermodel_search(f, bound)
    if model is None:
        _emit({"found": False, "bound": bound})
        return 1
    _emit({"found": True, "bound": bound, "countermodel": model.to_json()})
    return 0


def cmd_transform(args) -> int:
    f = _parse_formula(args.formula, _kind(args.kind))
    std, table = standardize(f)
    d = desequentize(std)
    gf = elementarize(d)
    _emit(
        {
            "standardization": fmt_int_sequent(std.to_sequent()),
            "names": table.as_dict(),
            "desequentization": fmt_affine(d),
            "game_form": gf.to_json(),
        }
    )
    return 0


def _load_adversary(spec: str, form):
    named = {
        "idle": lambda: IdleAdversary(),
        "greedy": lambda: GreedyMatcherAdversary(form),
        "wmatcher": lambda: WMatcherAdversary(form),
    }
    if spec in named:
        return named[spec]()
    if spec.startswith("random:"):
        parts = spec.split(":")
        seed = int(parts[1])
        budget = int(parts[2]) if len(parts) > 2 else 3
        return RandomLegalAdversary(form, seed, budget)
    with open(spec) as fh:
        return adversary_from_json(json.load(fh), form)


def cmd_simulate(args) -> int:
    f = _parse_formula(args.formula, _kind(args.kind))
    outcome = int_prove(f)
    if outcome.is_proved:
        _emit(
            {
                "provable": True,
                "note": "provable formulas carry a winning strategy; nothing to demonstrate",
                "proof": int_proof_to_json(outcome.proved),
            }
        )
        return 1
    form = game_form_of(f)
    adv = _load_adversary(args.adversary, form)
    rec, state = play(adv, form, budget=args.budget)
    dagger = build_dagger(rec, state)
    verdict = eval_state(state, dagger.truth)
    _emit(
        {
            "provable": False,
            "game_form": form.to_json(),
            "record": rec.to_json(),
            "interpretation": dagger.to_json(),
            "verdict": verdict.value,
        }
    )
    return 0 if verdict is Verdict.BOT else 1


def cmd_star_check(args) -> int:
    f = _parse_formula(args.formula, _kind(args.kind))
    form = game_form_of(f)
    with open(args.registry) as fh:
        registry = AdversaryRegistry.from_json(json.load(fh), form)
    indices = registry.indices() or [1]
    results = {c: claim78_check(c, form, registry, args.budget) for c in indices}
    results[max(indices) + 1] = claim78_check(max(indices) + 1, form, registry, args.budget)
    _emit({"checked": {str(c): ok for c, ok in sorted(results.items())}})
    return 0 if all(results.values()) else 1


def cmd_serve(args) -> int:
    import os

    import uvicorn

    from counterplay.service import create_app

    ui = args.ui if args.ui and os.path.isdir(args.ui) else None
    uvicorn.run(create_app(ui_dir=ui), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="counterplay",
        description="Decide implicative intuitionistic formulas and demonstrate "
        "non-validity by interactive play.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("formula")
        p.add_argument("--kind", choices=["bimp", "pimp"], default="bimp")

    p = sub.add_parser("prove", help="decide a formula; print a proof or a countermodel")
    common(p)
    p.set_defaults(fn=cmd_prove)

    p = sub.add_parser("countermodel", help="bounded tree-model search")
    common(p)
    p.add_argument("--bound", type=int, default=0, help="world bound (default: subformula count)")
    p.set_defaults(fn=cmd_countermodel)

    p = sub.add_parser("transform", help="standardization, guarded form, game form")
    common(p)
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("simulate", help="play the engine against an adversary")
    common(p)
    p.add_argument("--adversary", default="idle", help="idle | greedy | wmatcher | random:SEED[:N] | script file")
    p.add_argument("--budget", type=int, default=10000)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("star-check", help="two-path verdict agreement over a registry")
    common(p)
    p.add_argument("--registry", required=True)
    p.add_argument("--budget", type=int, default=10000)
    p.set_defaults(fn=cmd_star_check)

    p = sub.add_parser("serve", help="run the session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui", default="frontend", help="directory with the built browser UI")
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
