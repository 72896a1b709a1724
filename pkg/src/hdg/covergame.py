"""One state machine for the domination, total domination and transversal games.

Each game is a *cover system*: playing vertex ``v`` covers the subset
``covers[v]`` of a finite universe, a move is legal only if it covers
something new, and the game ends once the universe is covered.  Subsets are
``int`` bitmasks throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable

from .errors import IllegalMoveError, InputError, UnsatisfiableGameError
from .hypergraph import Hypergraph, from_mask, to_mask


class Variant(str, Enum):
    DOMINATION = "domination"
    TOTAL = "total-domination"
    TRANSVERSAL = "transversal"

    @classmethod
    def parse(cls, text: str) -> "Variant":
        aliases = {"dom": cls.DOMINATION, "total": cls.TOTAL, "tdom": cls.TOTAL, "trans": cls.TRANSVERSAL}
        if text in aliases:
            return aliases[text]
        try:
            return cls(text)
        except ValueError:
            raise InputError(f"unknown variant {text!r}") from None


class Player(str, Enum):
    DOMINATOR = "D"
    STALLER = "S"

    @property
    def other(self) -> "Player":
        return Player.STALLER if self is Player.DOMINATOR else Player.DOMINATOR

    @classmethod
    def parse(cls, text: str) -> "Player":
        t = text.strip().lower()
        if t in ("d", "dom", "dominator"):
            return cls.DOMINATOR
        if t in ("s", "stall", "staller"):
            return cls.STALLER
        raise InputError(f"unknown player {text!r}")


@dataclass(frozen=True)
class CoverSystem:
    universe_size: int
    covers: tuple[int, ...]
    variant: Variant
    origin: Hypergraph

    @property
    def n_movers(self) -> int:
        return len(self.covers)

    @property
    def full(self) -> int:
        return (1 << self.universe_size) - 1


@dataclass(frozen=True)
class GameState:
    covered: int
    history: tuple[int, ...]
    to_move: Player

    @property
    def played(self) -> int:
        return to_mask(self.history)


def build(H: Hypergraph, variant: Variant | str = Variant.DOMINATION) -> CoverSystem:
    if not isinstance(variant, Variant):
        variant = Variant.parse(variant)
    if variant is Variant.DOMINATION:
        return CoverSystem(H.n, H.closed_masks, variant, H)
    if variant is Variant.TOTAL:
        # a vertex whose only edges are singletons has no neighbor either
        lonely = [v for v, nb in enumerate(H.open_masks) if not nb]
        if lonely:
            raise UnsatisfiableGameError(
                f"total domination game is unsatisfiable: vertex {lonely[0]} has no neighbor")
        return CoverSystem(H.n, H.open_masks, variant, H)
    covers = [0] * H.n
    for i, e in enumerate(H.edges):
        for v in e:
            covers[v] |= 1 << i
    return CoverSystem(H.m, tuple(covers), variant, H)


def initial_state(sys: CoverSystem, first: Player = Player.DOMINATOR,
                  covered: Iterable[int] = ()) -> GameState:
    """Fresh state; ``covered`` pre-seeds universe elements (the residual game H|S)."""
    seed = 0
    for x in covered:
        if not isinstance(x, int) or not 0 <= x < sys.universe_size:
            raise InputError(f"pre-covered element {x!r} out of range 0..{sys.universe_size - 1}")
        seed |= 1 << x
    return GameState(seed, (), first)


def legal_moves(sys: CoverSystem, s: GameState) -> list[int]:
    unc = ~s.covered
    return [v for v, c in enumerate(sys.covers) if c & unc]


def new_coverage(sys: CoverSystem, s: GameState, v: int) -> int:
    return sys.covers[v] & ~s.covered


def apply_move(sys: CoverSystem, s: GameState, v: int) -> GameState:
    if not isinstance(v, int) or not 0 <= v < sys.n_movers:
        raise IllegalMoveError(v, f"vertex {v!r} out of range 0..{sys.n_movers - 1}")
    if not sys.covers[v] & ~s.covered:
        raise IllegalMoveError(v)
    return replace(s, covered=s.covered | sys.covers[v], history=s.history + (v,), to_move=s.to_move.other)


def is_terminal(sys: CoverSystem, s: GameState) -> bool:
    return s.covered == sys.full


def uncovered(sys: CoverSystem, s: GameState) -> list[int]:
    return from_mask(sys.full & ~s.covered)


def is_legal_sequence(sys: CoverSystem, seq: Iterable[int]) -> bool:
    """True iff ``seq`` is a complete legal game from the empty position."""
    covered = 0
    for v in seq:
        c = sys.covers[v]
        if not c & ~covered:
            return False
        covered |= c
    return covered == sys.full
