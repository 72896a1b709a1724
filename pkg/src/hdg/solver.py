"""Exact game values by memoised minimax, exact static cover numbers, and a naive oracle.

The memoised search keys positions on ``(covered, player to move)`` only: the
rest of the game depends on nothing else.  Two sound reductions keep it fast:

* moves with the same uncovered delta lead to the same position and are
  expanded once;
* with ``prune=True`` Dominator only considers inclusion-maximal deltas and
  Staller only inclusion-minimal ones.  This relies on the monotonicity of
  the game value in the covered set (dominating more never lengthens the
  remaining game).  ``prune=False`` turns it off, e.g. when that very
  monotonicity is what is being checked.

Values are exact in every case; the tests pin the search against
:func:`naive_solve`.
"""

from __future__ import annotations

import logging
import sys as _sys
from dataclasses import dataclass

from .covergame import (CoverSystem, GameState, Player, Variant, apply_move, build,
                        initial_state, is_terminal, legal_moves)
from .errors import InputError
from .hypergraph import Hypergraph

log = logging.getLogger(__name__)

# covered sets up to this width are the documented practical ceiling
MAX_UNIVERSE = 28

_sys.setrecursionlimit(max(_sys.getrecursionlimit(), 10_000))


@dataclass(frozen=True)
class GameValue:
    length: int
    best_move: int | None = None

    def __post_init__(self):
        if (self.length == 0) != (self.best_move is None):
            raise ValueError("best_move must be absent exactly when length is 0")


class MemoTable:
    """Exact remaining lengths keyed by ``covered << 1 | dominator_to_move``."""

    def __init__(self):
        self.table: dict[int, int] = {}
        self.hits = 0
        self.misses = 0

    def __len__(self):
        return len(self.table)

    @property
    def hit_rate(self) -> float:
        total = self.hits + self.misses
        return self.hits / total if total else 0.0

    def __repr__(self):
        return f"MemoTable(entries={len(self)}, hits={self.hits}, misses={self.misses})"


def _popcount(x: int) -> int:
    return x.bit_count()


class Solver:
    """Memoised minimax over one cover system; the table may serve many queries."""

    def __init__(self, sys: CoverSystem, *, prune: bool = True, memo: MemoTable | None = None):
        self.sys = sys
        self.prune = prune
        self.memo = memo if memo is not None else MemoTable()
        self._full = sys.full
        # distinct cover sets suffice: equal covers give equal positions
        self._covers = tuple(sorted(set(sys.covers), key=lambda c: (-_popcount(c), c)))

    def _children(self, unc: int, dom: bool) -> list[int]:
        deltas = {c & unc for c in self._covers}
        deltas.discard(0)
        if dom:
            order = sorted(deltas, key=lambda d: (-_popcount(d), d))
            if not self.prune:
                return order
            kept: list[int] = []
            for d in order:
                for k in kept:
                    if d & k == d:
                        break
                else:
                    kept.append(d)
            return kept
        order = sorted(deltas, key=lambda d: (_popcount(d), d))
        if not self.prune:
            return order
        kept = []
        for d in order:
            for k in kept:
                if d & k == k:
                    break
            else:
                kept.append(d)
        return kept

    def value(self, covered: int, dominator_to_move: bool) -> int:
        memo = self.memo
        key = covered << 1 | dominator_to_move
        hit = memo.table.get(key)
        if hit is not None:
            memo.hits += 1
            return hit
        memo.misses += 1
        unc = self._full & ~covered
        if not unc:
            result = 0
        elif dominator_to_move:
            children = self._children(unc, True)
            if children[0] == unc:
                result = 1
            else:
                best = None
                for d in children:
                    r = self.value(covered | d, False)
                    if best is None or r < best:
                        best = r
                        if best == 1:
                            break
                result = 1 + best
        else:
            cap = _popcount(unc) - 1
            best = -1
            for d in self._children(unc, False):
                r = self.value(covered | d, True)
                if r > best:
                    best = r
                    if best >= cap:
                        break
            result = 1 + best
        memo.table[key] = result
        return result

    def move_values(self, state: GameState) -> dict[int, int]:
        """Exact total remaining length after each legal move (the move itself included)."""
        dom_next = state.to_move is Player.STALLER
        cache: dict[int, int] = {}
        out = {}
        for v in legal_moves(self.sys, state):
            nxt = state.covered | self.sys.covers[v]
            if nxt not in cache:
                cache[nxt] = 1 + self.value(nxt, dom_next)
            out[v] = cache[nxt]
        return out

    def solve(self, state: GameState) -> GameValue:
        if is_terminal(self.sys, state):
            return GameValue(0, None)
        vals = self.move_values(state)
        pick = min if state.to_move is Player.DOMINATOR else max
        target = pick(vals.values())
        best_move = min(v for v, r in vals.items() if r == target)
        return GameValue(target, best_move)

    def optimal_line(self, state: GameState) -> list[int]:
        line = []
        while not is_terminal(self.sys, state):
            v = self.solve(state).best_move
            line.append(v)
            state = apply_move(self.sys, state, v)
        return line


def _check_size(sys: CoverSystem) -> None:
    if sys.universe_size > MAX_UNIVERSE:
        log.warning("universe of size %d is past the practical ceiling %d; the search may not finish",
                    sys.universe_size, MAX_UNIVERSE)


def solve(sys: CoverSystem, s: GameState, *, prune: bool = True, memo: MemoTable | None = None) -> GameValue:
    """Exact remaining length under optimal play; ties go to the smallest vertex."""
    _check_size(sys)
    return Solver(sys, prune=prune, memo=memo).solve(s)


def naive_solve(sys: CoverSystem, s: GameState) -> GameValue:
    """Plain depth-first minimax: no memo, no move merging, no pruning."""
    if is_terminal(sys, s):
        return GameValue(0, None)
    best = None
    best_v = None
    dom = s.to_move is Player.DOMINATOR
    for v in legal_moves(sys, s):
        r = 1 + naive_solve(sys, apply_move(sys, s, v)).length
        if best is None or (r < best if dom else r > best):
            best, best_v = r, v
    return GameValue(best, best_v)


def _game(H: Hypergraph, variant: Variant, first: Player, **kw) -> GameValue:
    sys = build(H, variant)
    return solve(sys, initial_state(sys, first), **kw)


def gamma_g(H: Hypergraph, **kw) -> GameValue:
    return _game(H, Variant.DOMINATION, Player.DOMINATOR, **kw)


def gamma_g_prime(H: Hypergraph, **kw) -> GameValue:
    return _game(H, Variant.DOMINATION, Player.STALLER, **kw)


def tau_g(H: Hypergraph, **kw) -> GameValue:
    return _game(H, Variant.TRANSVERSAL, Player.DOMINATOR, **kw)


def tau_g_prime(H: Hypergraph, **kw) -> GameValue:
    return _game(H, Variant.TRANSVERSAL, Player.STALLER, **kw)


def gamma_tg(H: Hypergraph, **kw) -> GameValue:
    return _game(H, Variant.TOTAL, Player.DOMINATOR, **kw)


def gamma_tg_prime(H: Hypergraph, **kw) -> GameValue:
    return _game(H, Variant.TOTAL, Player.STALLER, **kw)


def gamma_g_given(H: Hypergraph, S, first: Player = Player.DOMINATOR, **kw) -> GameValue:
    """Optimal remaining length when the vertices of ``S`` are declared dominated."""
    sys = build(H, Variant.DOMINATION)
    return solve(sys, initial_state(sys, first, covered=S), **kw)


# --- static cover numbers ----------------------------------------------------------

def _greedy_cover(covers: list[int], target: int) -> int:
    covered = 0
    count = 0
    while covered != target:
        c = max(covers, key=lambda c: _popcount(c & ~covered))
        covered |= c & target
        count += 1
    return count


def min_cover_size(covers, universe: int) -> int:
    """Smallest number of sets from ``covers`` whose union contains ``universe`` (bitmasks).

    Iterative deepening on the cover size, seeded with the greedy cover as
    an upper bound; branches on the uncovered element with fewest options.
    """
    covers = [c & universe for c in set(covers)]
    covers = [c for c in covers if c]
    if not universe:
        return 0
    union = 0
    for c in covers:
        union |= c
    if union != universe:
        raise InputError("the sets cannot cover the universe")
    upper = _greedy_cover(covers, universe)
    biggest = max(_popcount(c) for c in covers)
    by_elem: dict[int, list[int]] = {}
    rest = universe
    while rest:
        low = rest & -rest
        by_elem[low] = sorted((c for c in covers if c & low), key=_popcount, reverse=True)
        rest ^= low

    def feasible(unc: int, budget: int) -> bool:
        if not unc:
            return True
        if budget == 0 or -(-_popcount(unc) // biggest) > budget:
            return False
        pivot = None
        for bit, options in by_elem.items():
            if unc & bit:
                cnt = sum(1 for c in options if c & unc)
                if pivot is None or cnt < pivot[0]:
                    pivot = (cnt, bit)
        for c in by_elem[pivot[1]]:
            if feasible(unc & ~c, budget - 1):
                return True
        return False

    lower = -(-_popcount(universe) // biggest)
    for size in range(lower, upper):
        if feasible(universe, size):
            return size
    return upper


def _static(H: Hypergraph, variant: Variant) -> int:
    sys = build(H, variant)
    return min_cover_size(sys.covers, sys.full)


def gamma(H: Hypergraph) -> int:
    return _static(H, Variant.DOMINATION)


def tau(H: Hypergraph) -> int:
    return _static(H, Variant.TRANSVERSAL)


def gamma_t(H: Hypergraph) -> int:
    return _static(H, Variant.TOTAL)

