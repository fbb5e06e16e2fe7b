"""Sequent calculi: decision procedure, proof objects, checkers, and proof transformers."""

from counterplay.calculus.proofs import (
    AffineProofNode,
    AffineRule,
    IntProofNode,
    IntRule,
    affine_proof_from_json,
    affine_proof_to_json,
    check_affine,
    check_affine_detailed,
    check_int,
    check_int_detailed,
    int_proof_from_json,
    int_proof_to_json,
)
from counterplay.calculus.prover import (
    RefutationTrace,
    SearchOutcome,
    int_prove,
    sequent_state,
)
from counterplay.calculus.affine import (
    curry_template,
    desequent_bridge_proof,
    embed,
    guarded_reduction_proof,
    imp,
    iso_imp,
    modus_ponens,
    recur_weaken_template,
    replace_proof,
    transitivity,
    uncurry_template,
)

__all__ = [
    "AffineProofNode",
    "AffineRule",
    "IntProofNode",
    "IntRule",
    "RefutationTrace",
    "SearchOutcome",
    "affine_proof_from_json",
    "affine_proof_to_json",
    "check_affine",
    "check_affine_detailed",
    "check_int",
    "check_int_detailed",
    "curry_template",
    "desequent_bridge_proof",
    "embed",
    "guarded_reduction_proof",
    "imp",
    "iso_imp",
    "int_proof_from_json",
    "int_proof_to_json",
    "int_prove",
    "modus_ponens",
    "recur_weaken_template",
    "replace_proof",
    "sequent_state",
    "transitivity",
    "uncurry_template",
]
