"""Runs, legality, residual projections, molecules, chains, and evaluation."""

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
from counterplay.gamecore.state import (
    BOT,
    TOP,
    Content,
    DevCell,
    Labmove,
    MoleculeId,
    Metatype,
    ResidualState,
    Run,
    Verdict,
    content_of,
    enumerate_top_moves,
    eval_state,
    fresh_choice_constant,
    gender_of,
    legal,
    legal_reason,
    matchingly_devirginized,
    molecule_sort_key,
    project,
    run_from_json,
    run_to_json,
    flip_run,
)
from counterplay.gamecore.chains import (
    SuperMolecule,
    base,
    collect_supermolecules,
    find_master_chain,
    open_chains_into,
)

__all__ = [
    "BOT",
    "TOP",
    "ConsequentChoice",
    "Content",
    "DevCell",
    "InnerChoice",
    "InnerRep",
    "Labmove",
    "Metatype",
    "MoleculeId",
    "Move",
    "OuterRep",
    "ResidualState",
    "Run",
    "SlotChoice",
    "SuperMolecule",
    "Verdict",
    "base",
    "collect_supermolecules",
    "content_of",
    "enumerate_top_moves",
    "eval_state",
    "find_master_chain",
    "flip_run",
    "fmt_move",
    "fresh_choice_constant",
    "gender_of",
    "legal",
    "legal_reason",
    "matchingly_devirginized",
    "molecule_sort_key",
    "open_chains_into",
    "parse_move",
    "project",
    "run_from_json",
    "run_to_json",
]
