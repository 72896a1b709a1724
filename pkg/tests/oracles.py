"""Independent reference implementations used only by the tests.

Everything here works from plain vertex sets and the textbook definitions,
deliberately avoiding the bitmask machinery of the package under test.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations


def edges_of(H):
    return [set(e) for e in H.edges]


def closed_nbhd(H, v):
    out = {v}
    for e in H.edges:
        if v in e:
            out |= set(e)
    return out


def open_nbhd(H, v):
    out = set()
    for e in H.edges:
        if v in e:
            out |= set(e) - {v}
    return out


def is_dominating(H, D):
    """Every vertex is in D or shares an edge with a member of D."""
    D = set(D)
    for v in range(H.n):
        if v in D:
            continue
        if not any(v in e and D & set(e) for e in H.edges):
            return False
    return True


def is_total_dominating(H, D):
    return all(open_nbhd(H, v) & set(D) for v in range(H.n))


def is_transversal(H, T):
    T = set(T)
    return all(set(e) & T for e in H.edges)


def brute_min(n, predicate):
    """Smallest k such that some k-subset of range(n) satisfies ``predicate``."""
    for k in range(n + 1):
        if any(predicate(set(c)) for c in combinations(range(n), k)):
            return k
    return None


def brute_gamma(H):
    return brute_min(H.n, lambda D: is_dominating(H, D))


def brute_tau(H):
    return brute_min(H.n, lambda T: is_transversal(H, T))


def brute_gamma_t(H):
    return brute_min(H.n, lambda D: is_total_dominating(H, D))


def brute_game(H, dominator_first=True, given=frozenset()):
    """Domination-game value from definitions: minimax over dominated vertex sets."""
    nbhd = [frozenset(closed_nbhd(H, v)) for v in range(H.n)]
    everything = frozenset(range(H.n))

    @lru_cache(maxsize=None)
    def rec(dominated, dom_turn):
        if dominated == everything:
            return 0
        vals = [rec(dominated | nbhd[v], not dom_turn) for v in range(H.n) if not nbhd[v] <= dominated]
        return 1 + (min(vals) if dom_turn else max(vals))

    return rec(frozenset(given), dominator_first)


def legal_full_game(H, seq, cover):
    """Is ``seq`` a complete legal game when playing v covers ``cover(v)``?"""
    universe = set().union(*(cover(v) for v in range(H.n))) if H.n else set()
    covered = set()
    for v in seq:
        if cover(v) <= covered:
            return False
        covered |= cover(v)
    return covered == universe


def colors_by_definition(G, D):
    """white / blue / red straight from the definitions on the base graph."""
    dominated = set()
    for d in D:
        dominated |= closed_nbhd(G, d)
    out = []
    for v in range(G.n):
        if v not in dominated:
            out.append("white")
        elif closed_nbhd(G, v) <= dominated:
            out.append("red")
        else:
            out.append("blue")
    return out
