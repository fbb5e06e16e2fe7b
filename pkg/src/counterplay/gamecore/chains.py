"""Supermolecules, chains, and their bases.

A supermolecule is the first-devirginized ancestor of a molecule; the
devirginization events recorded during projection are exactly the
supermolecule records.  A chain starts at an inner-atom-game
supermolecule and alternates negative and positive elements: a negative
element is followed by a positive one with identical content, and a
negative element other than the first must be a Z or R molecule whose
same-leaf partner slot (X or Y for Z, Q for R) has the preceding
positive element as its essence.  A chain is open when no element is a
Q-molecule of the starting row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from counterplay.gamecore.state import (
    Content,
    Metatype,
    MoleculeId,
    ResidualState,
    gender_of,
    molecule_sort_key,
)


@dataclass(frozen=True)
class SuperMolecule:
    molecule: MoleculeId
    type_atom: str
    letter: str
    time: int
    const: int
    old_generation: bool
    sibling_essences: tuple[tuple[str, Optional[MoleculeId]], ...]

    @property
    def content(self) -> Content:
        return Content(self.letter, self.const)

    @property
    def gender(self) -> str:
        return gender_of(self.molecule.mt)


def collect_supermolecules(state: ResidualState, delta: int | None = None) -> list[SuperMolecule]:
    """All supermolecules of the projected run, stamped with their era.

    ``delta`` is the labmove count at the switch into the final phase;
    a supermolecule devirginized no later than that is old-generation.
    """
    out = []
    for ev in state.events:
        out.append(
            SuperMolecule(
                molecule=ev.molecule,
                type_atom=ev.type_atom,
                letter=state.form.letter(ev.type_atom),
                time=ev.time,
                const=ev.const,
                old_generation=(delta is None) or ev.time <= delta,
                sibling_essences=tuple(sorted(ev.sibling_essences.items())),
            )
        )
    return out


def _ogsms(state: ResidualState, delta: int) -> dict[MoleculeId, SuperMolecule]:
    return {
        sm.molecule: sm
        for sm in collect_supermolecules(state, delta)
        if sm.old_generation
    }


def _edges(ogsms: dict[MoleculeId, SuperMolecule]):
    """content_edges: negative -> positives with equal content;
    partner_edges: positive -> negative Z/R whose recorded partner essence it is."""
    by_content: dict[tuple[str, int, str], list[MoleculeId]] = {}
    for mol, sm in ogsms.items():
        by_content.setdefault((sm.letter, sm.const, sm.gender), []).append(mol)
    content_edges: dict[MoleculeId, list[MoleculeId]] = {}
    partner_edges: dict[MoleculeId, list[MoleculeId]] = {}
    for mol, sm in ogsms.items():
        if sm.gender == "negative":
            targets = by_content.get((sm.letter, sm.const, "positive"), [])
            content_edges[mol] = sorted(targets, key=molecule_sort_key)
        if sm.molecule.mt in (Metatype.Z, Metatype.R):
            for _, essence in sm.sibling_essences:
                if essence is not None and essence in ogsms:
                    partner_edges.setdefault(essence, []).append(mol)
    for k in partner_edges:
        partner_edges[k] = sorted(partner_edges[k], key=molecule_sort_key)
    return content_edges, partner_edges


def _search_chains(
    ogsms: dict[MoleculeId, SuperMolecule],
    targets: set[MoleculeId],
) -> list[list[MoleculeId]]:
    """Minimal open chains from each inner-atom-game start into ``targets``.

    Returns, per start, the shortest chain (ties broken elementwise by
    molecule order) whose last element lies in ``targets``; openness
    excludes Q-molecules of the starting row from the whole chain.
    """
    content_edges, partner_edges = _edges(ogsms)
    results = []
    starts = sorted(
        (m for m in ogsms if m.mt is Metatype.P), key=molecule_sort_key
    )
    for start in starts:
        banned_j = start.j

        def allowed(m: MoleculeId) -> bool:
            return not (m.mt is Metatype.Q and m.j == banned_j)

        # breadth-first layers: chain positions alternate negative/positive
        best: dict[MoleculeId, list[MoleculeId]] = {start: [start]}
        frontier = [start]
        found: list[list[MoleculeId]] | None = None
        hits: list[list[MoleculeId]] = []
        if start in targets:
            hits.append([start])
        while frontier and not hits:
            nxt: dict[MoleculeId, list[MoleculeId]] = {}
            for mol in frontier:
                chain = best[mol]
                if gender_of(mol.mt) == "negative":
                    succs = content_edges.get(mol, [])
                else:
                    succs = partner_edges.get(mol, [])
                for succ in succs:
                    if not allowed(succ):
                        continue
                    cand = chain + [succ]
                    if succ not in nxt or _chain_key(cand) < _chain_key(nxt[succ]):
                        nxt[succ] = cand
            improved = []
            for succ, chain in nxt.items():
                if succ not in best or _chain_key(chain) < _chain_key(best[succ]):
                    best[succ] = chain
                    improved.append(succ)
                    if succ in targets:
                        hits.append(chain)
            frontier = sorted(improved, key=molecule_sort_key)
        results.extend(hits)
    return results


def _chain_key(chain: list[MoleculeId]):
    return (len(chain), [molecule_sort_key(m) for m in chain])


def find_master_chain(state: ResidualState, delta: int) -> list[MoleculeId] | None:
    """The least open chain over old-generation supermolecules ending at
    the consequent molecule; None when no such chain exists."""
    ogsms = _ogsms(state, delta)
    w = MoleculeId(Metatype.W, 0)
    if w not in ogsms:
        return None
    candidates = _search_chains(ogsms, {w})
    if not candidates:
        return None
    return min(candidates, key=_chain_key)


def open_chains_into(state: ResidualState, target: MoleculeId, delta: int) -> list[list[MoleculeId]]:
    """Minimal open chains per start that end exactly at ``target``."""
    ogsms = _ogsms(state, delta)
    if target not in ogsms:
        return []
    return _search_chains(ogsms, {target})


def base(state: ResidualState, target: MoleculeId, delta: int) -> set[str]:
    """Atoms of the inner-atom-game rows from which an open chain reaches
    ``target`` (the target must be a negative old-generation supermolecule)."""
    if gender_of(target.mt) != "negative":
        raise ValueError("base is defined for negative supermolecules")
    out = set()
    for chain in open_chains_into(state, target, delta):
        start = chain[0]
        out.add(state.type_atom(start))
    return out
