"""Playable strategies, the weighted greedy Dominator, playouts and their audit.

The greedy Dominator works on a graph ``G*`` in which every vertex and every
edge lies in a triangle (for a 3-uniform hypergraph, its 2-section).  After
each move every vertex is coloured

* white: not dominated;
* blue: dominated, but with an undominated closed neighbour;
* red: its whole closed neighbourhood is dominated.

Red vertices and blue-blue edges are dropped to get the residual graph.
Phase 1 weighs white/blue/red as 20/12/0.  Phase 2 starts at the first
Dominator turn whose position has no white vertex of W-degree >= 4 and no
blue vertex of W-degree >= 5, and weighs a vertex by ``f(v) + f_plus(v)``
(see :func:`weight`).  Dominator greedily maximises the weight drop.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Iterable

from .covergame import (CoverSystem, GameState, Player, Variant, apply_move, build,
                        initial_state, is_terminal, legal_moves)
from .errors import (IllegalMoveError, InputError, InternalInvariantError, PreconditionError,
                     StrategyFault, TerminalStateError)
from .generators import AlonInstance, gen_hk1, hk1_cell
from .hypergraph import Hypergraph, from_mask, to_mask, two_section, validate
from .solver import Solver

PHASE1_WEIGHTS = {"white": 20, "blue": 12, "red": 0}


class Color(str, Enum):
    WHITE = "white"
    BLUE = "blue"
    RED = "red"


GSTAR_CHECKS = ("g23", "vertex-in-triangle")


@lru_cache(maxsize=256)
def _gstar_report(G: Hypergraph):
    return validate(G, GSTAR_CHECKS)


def require_gstar(G: Hypergraph) -> None:
    report = _gstar_report(G)
    if not report.ok:
        raise PreconditionError(f"graph is not a valid base for the weighting argument: {report}")


def is_gstar(G: Hypergraph) -> bool:
    return _gstar_report(G).ok


@dataclass(frozen=True)
class ResidualView:
    graph: Hypergraph
    played: tuple[int, ...]
    dominated: int
    white: int
    blue: int
    red: int
    adjacency: tuple[int, ...]
    deg_w: tuple[int, ...]
    deg_wb: tuple[int, ...]
    special: int  # B_T: blue vertices in a residual triangle with two white vertices

    @property
    def n(self) -> int:
        return self.graph.n

    def color(self, v: int) -> Color:
        bit = 1 << v
        if self.white & bit:
            return Color.WHITE
        return Color.BLUE if self.blue & bit else Color.RED

    @property
    def colors(self) -> tuple[Color, ...]:
        return tuple(self.color(v) for v in range(self.n))

    def whites(self, degree: int | None = None) -> list[int]:
        return [v for v in from_mask(self.white) if degree is None or self.deg_w[v] == degree]

    def blues(self, degree: int | None = None) -> list[int]:
        return [v for v in from_mask(self.blue) if degree is None or self.deg_w[v] == degree]

    def in_special_triangle(self, v: int) -> bool:
        return bool(self.special >> v & 1)

    def special_triangle_count(self, b: int) -> int:
        ws = self.graph.open_masks[b] & self.white
        adj = self.graph.open_masks
        return sum((adj[w] & ws & ~((1 << (w + 1)) - 1)).bit_count() for w in from_mask(ws))

    @property
    def legal(self) -> list[int]:
        return from_mask(self.white | self.blue)


def compute_residual(Gstar: Hypergraph, D: Iterable[int]) -> ResidualView:
    """Colours, residual adjacency, W-degrees and special-triangle flags after playing ``D``."""
    require_gstar(Gstar)
    D = tuple(D)
    closed = Gstar.closed_masks
    opened = Gstar.open_masks
    dom = 0
    for v in D:
        if not 0 <= v < Gstar.n:
            raise InputError(f"played vertex {v} out of range")
        dom |= closed[v]
    white = ((1 << Gstar.n) - 1) & ~dom
    blue = red = 0
    for v in from_mask(dom):
        if closed[v] & white:
            blue |= 1 << v
        else:
            red |= 1 << v
    adjacency = []
    deg_w = []
    deg_wb = []
    special = 0
    for v in range(Gstar.n):
        bit = 1 << v
        if red & bit:
            a = 0
        elif blue & bit:
            a = opened[v] & white
        else:
            a = opened[v] & ~red
        adjacency.append(a)
        ws = opened[v] & white if not red & bit else 0
        deg_w.append(ws.bit_count())
        deg_wb.append(a.bit_count())
        if blue & bit and any(opened[w] & ws for w in from_mask(ws)):
            special |= bit
    return ResidualView(Gstar, D, dom, white, blue, red, tuple(adjacency), tuple(deg_w),
                        tuple(deg_wb), special)


@dataclass
class WeightState:
    phase: int = 1
    i_star: int | None = None
    blue_at_boundary: int = 0

    def enter_phase2(self, i_star: int, view: ResidualView) -> None:
        if self.phase == 2:
            raise InternalInvariantError("Phase 2 entered twice")
        self.phase = 2
        self.i_star = i_star
        self.blue_at_boundary = view.blue


@dataclass(frozen=True)
class Weights:
    per_vertex: tuple[int, ...]
    total: int


def _phase2_f(view: ResidualView, v: int) -> int:
    d = view.deg_w[v]
    if d >= 5 or d == 0:
        raise InternalInvariantError(f"blue vertex {v} has W-degree {d} in Phase 2")
    if d == 4:
        return 10
    if d >= 2:
        return 10 if view.in_special_triangle(v) else 9
    return 8


def weight(view: ResidualView, ws: WeightState) -> Weights:
    """Per-vertex weights and their sum under the active phase.

    Phase 2: white 20; blue with W-degree 4 gets 10, with W-degree 2 or 3
    gets 10 inside a special triangle and 9 otherwise, with W-degree 1 gets
    8; red 0.  A blue vertex gains a bonus of 2 while its W-degree is at
    least 2, if it was already blue when Phase 2 began.
    """
    out = []
    if ws.phase == 1:
        for v in range(view.n):
            c = view.color(v)
            out.append(PHASE1_WEIGHTS[c.value])
        return Weights(tuple(out), sum(out))
    for v in range(view.n):
        bit = 1 << v
        if view.white & bit:
            if view.deg_w[v] >= 4:
                raise InternalInvariantError(f"white vertex {v} has W-degree {view.deg_w[v]} in Phase 2")
            out.append(20)
        elif view.blue & bit:
            bonus = 2 if view.deg_w[v] >= 2 and ws.blue_at_boundary & bit else 0
            out.append(_phase2_f(view, v) + bonus)
        else:
            out.append(0)
    return Weights(tuple(out), sum(out))


def detect_phase(view: ResidualView) -> bool:
    """True while some white vertex has W-degree >= 4 or some blue vertex W-degree >= 5."""
    return any(view.deg_w[v] >= 4 for v in from_mask(view.white)) or \
        any(view.deg_w[v] >= 5 for v in from_mask(view.blue))


LEMMA_CASES = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x")


def lemma_case(view: ResidualView) -> str:
    """First structural case ``i``..``x`` of the Phase-2 analysis that the position matches."""
    adj = view.graph.open_masks
    W, B, dw = view.white, view.blue, view.deg_w

    def wj(j):
        return [v for v in from_mask(W) if dw[v] == j]

    def bj(j):
        return [v for v in from_mask(B) if dw[v] == j]

    for u in from_mask(W):
        wn = adj[u] & W
        if any(adj[v] & wn for v in from_mask(wn)):
            return "i"
    if wj(3) or bj(4):
        return "ii"
    w2 = to_mask(wj(2))
    if any(adj[u] & w2 for u in wj(1)):
        return "iii"
    w1 = to_mask(wj(1))
    for b in bj(3):
        pair = adj[b] & w1
        if any(adj[u] & pair for u in from_mask(pair)):
            return "iv"
    if any(view.special_triangle_count(b) >= 2 for b in from_mask(B)):
        return "v"
    b3 = to_mask(bj(3))
    if any(adj[v] & b3 for v in wj(0)):
        return "vi"
    if wj(2):
        return "vii"
    if wj(1):
        return "viii"
    if bj(2):
        return "ix"
    return "x"


def weight_drop(view: ResidualView, ws: WeightState, v: int) -> int:
    after = compute_residual(view.graph, view.played + (v,))
    return weight(view, ws).total - weight(after, ws).total


def greedy_dominator(view: ResidualView, ws: WeightState) -> int:
    """Legal vertex with the largest weight drop under the active phase; smallest index on ties."""
    moves = view.legal
    if not moves:
        raise TerminalStateError("no legal move: every vertex is red")
    before = weight(view, ws).total
    best_v, best_g = None, None
    for v in moves:
        g = before - weight(compute_residual(view.graph, view.played + (v,)), ws).total
        if best_g is None or g > best_g:
            best_v, best_g = v, g
    return best_v


# --- strategies --------------------------------------------------------------------

class Strategy:
    """Chooses a legal vertex; ``view``/``ws`` are supplied by weight-tracking playouts."""

    name = "strategy"

    def choose(self, sys: CoverSystem, state: GameState, view: ResidualView | None = None,
               ws: WeightState | None = None) -> int:
        raise NotImplementedError

    def __repr__(self):
        return self.name


def _smallest_legal(sys: CoverSystem, state: GameState) -> int:
    moves = legal_moves(sys, state)
    if not moves:
        raise TerminalStateError("no legal move left")
    return moves[0]


class GreedyDominator(Strategy):
    name = "greedy"

    def choose(self, sys, state, view=None, ws=None):
        if view is None or ws is None:
            raise PreconditionError("the greedy Dominator needs a residual view and weight state")
        return greedy_dominator(view, ws)


class OptimalPlayer(Strategy):
    """Plays a solver-optimal move for whichever side is to move (smallest index on ties).

    One exact memo table is kept per cover system, so a whole playout costs
    about one search.
    """

    def __init__(self, name: str = "optimal", prune: bool = True):
        self.name = name
        self.prune = prune
        self._solver: Solver | None = None

    def solver_for(self, sys: CoverSystem) -> Solver:
        if self._solver is None or self._solver.sys is not sys:
            self._solver = Solver(sys, prune=self.prune)
        return self._solver

    def choose(self, sys, state, view=None, ws=None):
        return self.solver_for(sys).solve(state).best_move


class StallerRandom(Strategy):
    """Uniform legal move; the draw depends only on ``(seed, position)``."""

    def __init__(self, seed: int):
        self.seed = seed
        self.name = f"random[{seed}]"

    def choose(self, sys, state, view=None, ws=None):
        moves = legal_moves(sys, state)
        if not moves:
            raise TerminalStateError("no legal move left")
        rng = random.Random(f"{self.seed}:{state.covered}:{','.join(map(str, state.history))}")
        return rng.choice(moves)


class StallerGreedyMin(Strategy):
    name = "greedy-min"

    def choose(self, sys, state, view=None, ws=None):
        moves = legal_moves(sys, state)
        if not moves:
            raise TerminalStateError("no legal move left")
        return min(moves, key=lambda v: ((sys.covers[v] & ~state.covered).bit_count(), v))


class StallerPendant(Strategy):
    """Answers with the pendant of a core edge that no chosen vertex touches yet."""

    name = "pendant"

    def __init__(self, inst: AlonInstance):
        H = inst.hypergraph
        for i, p in enumerate(inst.pendants):
            if p not in H.edges[i] or H.degrees[p] != 1:
                raise InputError(f"vertex {p} is not the pendant of edge {i}")
        self.inst = inst

    def choose(self, sys, state, view=None, ws=None):
        if sys.covers != self.inst.hypergraph.closed_masks:
            raise InputError("staller_pendant is bound to a different instance")
        chosen = set(state.history)
        unc = ~state.covered
        for i, p in enumerate(self.inst.pendants):
            if not self.inst.core_edge(i) & chosen and sys.covers[p] & unc:
                return p
        return _smallest_legal(sys, state)


class StallerGrid(Strategy):
    """After Dominator plays cell ``(i, j)``, answer on the complete line through it.

    The reply is the smallest legal cell ``(i', j)`` of column ``j`` (the
    column edges are the ``k`` lines that are all present), so each reply
    dominates part of a row without touching a new column.  Falls back to the
    smallest legal vertex.
    """

    def __init__(self, k: int):
        self.k = k
        self.name = f"grid[{k}]"
        self._covers = gen_hk1(k).closed_masks

    def choose(self, sys, state, view=None, ws=None):
        if sys.covers != self._covers:
            raise InputError(f"staller_grid({self.k}) is bound to the grid construction with k={self.k}")
        if state.history:
            _, j = hk1_cell(self.k, state.history[-1])
            unc = ~state.covered
            for i in range(self.k):
                v = i * self.k + (j - 1)
                if sys.covers[v] & unc:
                    return v
        return _smallest_legal(sys, state)


def staller_random(seed: int) -> Strategy:
    return StallerRandom(seed)


def staller_optimal(prune: bool = True) -> Strategy:
    return OptimalPlayer("optimal", prune)


def dominator_optimal(prune: bool = True) -> Strategy:
    return OptimalPlayer("optimal", prune)


def staller_greedy_min() -> Strategy:
    return StallerGreedyMin()


def staller_pendant(inst: AlonInstance) -> Strategy:
    return StallerPendant(inst)


def staller_grid(k: int) -> Strategy:
    return StallerGrid(k)


def dominator_greedy() -> Strategy:
    return GreedyDominator()


# --- playouts ----------------------------------------------------------------------

@dataclass(frozen=True)
class TurnRecord:
    turn: int
    player: Player
    vertex: int
    gain: int | None
    phase: int | None
    case: str | None  # structural case of the position before a Phase-2 move
    weight_after: int | None


@dataclass
class Playout:
    n: int
    first: Player
    turns: list[TurnRecord] = field(default_factory=list)
    tracked: bool = True
    initial_weight: int | None = None
    i_star: int | None = None
    boundary_drop: int | None = None
    weight_at_boundary: tuple[int, int] | None = None  # (Phase-1 weight, Phase-2 weight) of G_{i*}
    phase_violations: list[int] = field(default_factory=list)
    dominator: str = ""
    staller: str = ""

    @property
    def length(self) -> int:
        return len(self.turns)

    @property
    def moves(self) -> list[int]:
        return [t.vertex for t in self.turns]

    @property
    def final_weight(self) -> int | None:
        if not self.tracked:
            return None
        return self.turns[-1].weight_after if self.turns else self.initial_weight

    def gain(self, turn: int) -> int | None:
        for t in self.turns:
            if t.turn == turn:
                return t.gain
        return None

    def weight_trace(self) -> list[int]:
        trace = [self.initial_weight]
        for t in self.turns:
            trace.append(t.weight_after)
        return trace


def playout(G: Hypergraph, dom: Strategy, stall: Strategy, first: Player = Player.DOMINATOR,
            track: bool | None = None, max_turns: int | None = None) -> Playout:
    """Play ``dom`` against ``stall`` from the empty position and record per-turn weight drops.

    Dominator-start games number their turns 1, 2, ...; Staller-start games
    begin with a preliminary turn 0, so Dominator always owns the odd turns.
    Weights are tracked whenever ``G`` (or its 2-section) is a valid base
    graph; the greedy Dominator requires that.
    """
    if not G.is_uniform(2) or len(set(G.edges)) != len(G.edges):
        G = two_section(G)
    valid = is_gstar(G)
    if track is None:
        track = valid
    if track and not valid:
        require_gstar(G)
    if isinstance(dom, GreedyDominator) and not track:
        require_gstar(G)
    sys = build(G, Variant.DOMINATION)
    state = initial_state(sys, first)
    p = Playout(G.n, first, tracked=track, dominator=dom.name, staller=stall.name)
    ws = WeightState()
    view = compute_residual(G, ()) if track else None
    w_prev = weight(view, ws).total if track else None
    p.initial_weight = w_prev
    turn = 1 if first is Player.DOMINATOR else 0
    while not is_terminal(sys, state):
        if max_turns is not None and p.length >= max_turns:
            break
        player = state.to_move
        if track and player is Player.DOMINATOR:
            condition = detect_phase(view)
            if ws.phase == 1 and not condition:
                w1 = w_prev
                ws.enter_phase2(turn - 1, view)
                w_prev = weight(view, ws).total
                p.i_star = turn - 1
                p.boundary_drop = w1 - w_prev
                p.weight_at_boundary = (w1, w_prev)
            elif ws.phase == 2 and condition:
                p.phase_violations.append(turn)
        case = lemma_case(view) if track and ws.phase == 2 else None
        strategy = dom if player is Player.DOMINATOR else stall
        v = strategy.choose(sys, state, view, ws)
        try:
            state = apply_move(sys, state, v)
        except IllegalMoveError as exc:
            raise StrategyFault(strategy.name, v, str(exc)) from None
        if track:
            view = compute_residual(G, state.history)
            w_new = weight(view, ws).total
            gain = w_prev - w_new
            w_prev = w_new
            p.turns.append(TurnRecord(turn, player, v, gain, ws.phase, case, w_new))
        else:
            p.turns.append(TurnRecord(turn, player, v, None, None, None, None))
        turn += 1
    return p


# --- audit -------------------------------------------------------------------------

@dataclass(frozen=True)
class AuditCheck:
    name: str
    turn: int | None
    passed: bool
    detail: str = ""

    def __str__(self):
        where = f" @turn {self.turn}" if self.turn is not None else ""
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}{where} {self.detail}".rstrip()


@dataclass
class AuditReport:
    checks: list[AuditCheck]
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[AuditCheck]:
        return [c for c in self.checks if not c.passed]

    def __str__(self):
        return "\n".join(str(c) for c in self.checks)


def audit_lemmas(p: Playout) -> AuditReport:
    """Check the per-turn weight drops a greedy-Dominator playout must exhibit.

    * the start weight is ``20 n`` and the end weight 0; drops are never negative;
    * a Staller-start preliminary turn drops at least 36;
    * for every Dominator turn ``i``: ``g_i + g_{i+1} >= 72`` when Staller
      answered, otherwise ``g_i >= 36`` in Phase 2 and ``g_i >= 37`` in Phase 1;
    * Phase 2 never reverts;
    * Phase-2 turns from a position outside cases i-v drop at least 20, and
      outside cases i-vii at least 22;
    * the length is at most ``floor(5n/9)``.

    The re-weighting drop between the phases is never credited to any pair.
    """
    if not p.tracked:
        raise PreconditionError("playout carries no weight trace")
    checks = []
    n = p.n
    checks.append(AuditCheck("initial-weight", None, p.initial_weight == 20 * n,
                             f"w0={p.initial_weight} 20n={20 * n}"))
    checks.append(AuditCheck("final-weight", None, p.final_weight == 0, f"w_end={p.final_weight}"))
    negative = [t.turn for t in p.turns if t.gain < 0]
    if p.boundary_drop is not None and p.boundary_drop < 0:
        negative.append(p.i_star)
    checks.append(AuditCheck("weight-monotone", negative[0] if negative else None, not negative,
                             f"boundary_drop={p.boundary_drop}"))
    checks.append(AuditCheck("phase-permanence", p.phase_violations[0] if p.phase_violations else None,
                             not p.phase_violations))
    by_turn = {t.turn: t for t in p.turns}
    notes = {"phase1_terminal_ge_52": None}
    if p.first is Player.STALLER and 0 in by_turn:
        g0 = by_turn[0].gain
        checks.append(AuditCheck("preliminary-turn", 0, g0 >= 36, f"g0={g0}"))
    for t in p.turns:
        if t.player is not Player.DOMINATOR:
            continue
        nxt = by_turn.get(t.turn + 1)
        if nxt is not None:
            total = t.gain + nxt.gain
            checks.append(AuditCheck(f"pair-phase{t.phase}", t.turn, total >= 72,
                                     f"g={t.gain}+{nxt.gain}={total}"))
        else:
            threshold = 36 if t.phase == 2 else 37
            checks.append(AuditCheck(f"terminal-phase{t.phase}", t.turn, t.gain >= threshold,
                                     f"g={t.gain} threshold={threshold}"))
            if t.phase == 1:
                notes["phase1_terminal_ge_52"] = t.gain >= 52
    for t in p.turns:
        if t.phase != 2 or t.case is None:
            continue
        idx = LEMMA_CASES.index(t.case)
        if idx >= 5 and t.gain < 20:
            checks.append(AuditCheck("claim-b-20", t.turn, False, f"case={t.case} g={t.gain}"))
        if idx >= 7 and t.gain < 22:
            checks.append(AuditCheck("tail-22", t.turn, False, f"case={t.case} g={t.gain}"))
    claim_turns = [t for t in p.turns if t.phase == 2 and t.case is not None
                   and LEMMA_CASES.index(t.case) >= 5]
    if not any(c.name in ("claim-b-20", "tail-22") for c in checks):
        checks.append(AuditCheck("claim-b", None, True, f"{len(claim_turns)} qualifying turns"))
    bound = 5 * n // 9
    checks.append(AuditCheck("length-5n/9", None, p.length <= bound, f"length={p.length} bound={bound}"))
    return AuditReport(checks, notes)


# --- trace format ------------------------------------------------------------------

def format_trace(p: Playout) -> str:
    """One ``turn player vertex g_i phase`` line per move plus ``#`` footer lines."""
    lines = [f"# playout dominator={p.dominator} staller={p.staller} first={p.first.value} n={p.n}"]
    for t in p.turns:
        g = "-" if t.gain is None else str(t.gain)
        ph = "-" if t.phase is None else str(t.phase)
        lines.append(f"{t.turn} {t.player.value} {t.vertex} {g} {ph}")
    footer = [f"length={p.length}", f"bound={5 * p.n // 9}"]
    if p.tracked:
        footer += [f"w0={p.initial_weight}", f"w_end={p.final_weight}",
                   f"i_star={'-' if p.i_star is None else p.i_star}",
                   f"boundary_drop={'-' if p.boundary_drop is None else p.boundary_drop}"]
    lines.append("# totals " + " ".join(footer))
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> list[tuple[int, Player, int, int | None, int | None]]:
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        turn, player, vertex, g, ph = line.split()
        rows.append((int(turn), Player(player), int(vertex),
                     None if g == "-" else int(g), None if ph == "-" else int(ph)))
    return rows


# --- fixed-Staller values ----------------------------------------------------------

def strategy_value(sys: CoverSystem, stall: Strategy, first: Player = Player.DOMINATOR,
                   state: GameState | None = None) -> int:
    """Length Staller's fixed strategy guarantees against a best-responding Dominator.

    Plain search over Dominator's choices (Staller's replies may depend on
    history, so positions are not merged); a lower bound on the game value.
    """
    if state is None:
        state = initial_state(sys, first)

    def rec(s: GameState) -> int:
        if is_terminal(sys, s):
            return 0
        if s.to_move is Player.STALLER:
            return 1 + rec(apply_move(sys, s, stall.choose(sys, s)))
        best = None
        for v in legal_moves(sys, s):
            r = 1 + rec(apply_move(sys, s, v))
            if best is None or r < best:
                best = r
                if best == 1:
                    break
        return best

    return rec(state)


def alon_lower_bound(inst: AlonInstance) -> int:
    """``2m`` for the largest ``m`` such that every ``m``-subset of the core misses ``>= 2m`` core edges."""
    core_edges = [inst.core_edge(i) for i in range(len(inst.pendants))]
    best = 0
    for m in range(1, inst.core_size + 1):
        if all(sum(1 for e in core_edges if not e & set(X)) >= 2 * m
               for X in combinations(range(inst.core_size), m)):
            best = m
        else:
            break
    return 2 * best
