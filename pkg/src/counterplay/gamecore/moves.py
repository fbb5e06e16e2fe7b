"""Move grammar for the playable game shapes.

Addresses are dot-separated.  ``2.a`` chooses the constant ``a`` in the
consequent atom game.  ``1.i....`` addresses antecedent conjunct ``i``
(1-based; conjuncts 1..s carry the two-atom bodies, s+1..2s the nested
ones).  Within a conjunct, a bitstring names a node of the replication
tree (``e`` is the root); ``bits:`` replicates at that node, and the
remaining forms choose constants in the leaf components:

* first family:   ``w.1.1.a`` / ``w.1.2.a`` / ``w.2.a``  (X / Y / Z slots)
* second family:  ``w.1.1.u:`` replicates the inner tree, ``w.1.1.u.a``
  resolves the inner atom game, ``w.1.2.a`` / ``w.2.a`` the Q / R slots.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class MoveError(ValueError):
    pass


_BITS_RE = re.compile(r"e|[01]+")
_CONST_RE = re.compile(r"[1-9][0-9]*")


@dataclass(frozen=True)
class ConsequentChoice:
    const: int


@dataclass(frozen=True)
class OuterRep:
    i: int
    w: str


@dataclass(frozen=True)
class InnerRep:
    i: int
    w: str
    u: str


@dataclass(frozen=True)
class SlotChoice:
    i: int
    w: str
    slot: str  # "X" | "Y" | "Z" for the first family, "Q" | "R" for the second
    const: int


@dataclass(frozen=True)
class InnerChoice:
    i: int
    w: str
    u: str
    const: int


Move = Union[ConsequentChoice, OuterRep, InnerRep, SlotChoice, InnerChoice]


def _fmt_bits(w: str) -> str:
    return w if w else "e"


def _parse_bits(text: str) -> str:
    if not _BITS_RE.fullmatch(text):
        raise MoveError(f"bad bitstring {text!r}")
    return "" if text == "e" else text


def _parse_const(text: str) -> int:
    if not _CONST_RE.fullmatch(text):
        raise MoveError(f"bad choice constant {text!r}")
    return int(text)


def fmt_move(m: Move) -> str:
    if isinstance(m, ConsequentChoice):
        return f"2.{m.const}"
    if isinstance(m, OuterRep):
        return f"1.{m.i}.{_fmt_bits(m.w)}:"
    if isinstance(m, InnerRep):
        return f"1.{m.i}.{_fmt_bits(m.w)}.1.1.{_fmt_bits(m.u)}:"
    if isinstance(m, InnerChoice):
        return f"1.{m.i}.{_fmt_bits(m.w)}.1.1.{_fmt_bits(m.u)}.{m.const}"
    slot_addr = {"X": "1.1", "Y": "1.2", "Z": "2", "Q": "1.2", "R": "2"}[m.slot]
    return f"1.{m.i}.{_fmt_bits(m.w)}.{slot_addr}.{m.const}"


def parse_move(text: str, s: int) -> Move:
    """Parse a move for a form with ``s`` rows (2s antecedent conjuncts)."""
    if text.startswith("2."):
        return ConsequentChoice(_parse_const(text[2:]))
    if not text.startswith("1."):
        raise MoveError(f"move must start with '1.' or '2.': {text!r}")
    rest = text[2:]
    head, dot, rest = rest.partition(".")
    if not dot or not _CONST_RE.fullmatch(head):
        raise MoveError(f"bad conjunct index in {text!r}")
    i = int(head)
    if not 1 <= i <= 2 * s:
        raise MoveError(f"conjunct index {i} out of range for s={s}")
    # replication: bits followed directly by a colon
    if rest.endswith(":") and "." not in rest:
        return OuterRep(i, _parse_bits(rest[:-1]))
    wtext, dot, tail = rest.partition(".")
    if not dot:
        raise MoveError(f"truncated move {text!r}")
    w = _parse_bits(wtext)
    family2 = i > s
    if tail.startswith("1.1."):
        sub = tail[4:]
        if family2:
            if sub.endswith(":") and "." not in sub:
                return InnerRep(i, w, _parse_bits(sub[:-1]))
            utext, dot, ctext = sub.partition(".")
            if not dot:
                raise MoveError(f"truncated inner move {text!r}")
            return InnerChoice(i, w, _parse_bits(utext), _parse_const(ctext))
        return SlotChoice(i, w, "X", _parse_const(sub))
    if tail.startswith("1.2."):
        return SlotChoice(i, w, "Q" if family2 else "Y", _parse_const(tail[4:]))
    if tail.startswith("2."):
        return SlotChoice(i, w, "R" if family2 else "Z", _parse_const(tail[2:]))
    raise MoveError(f"unrecognized move tail {tail!r} in {text!r}")
