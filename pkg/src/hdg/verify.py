"""Bound and equivalence checks over solver values, small-instance enumeration and extremal search.

Every check returns a :class:`CheckResult`; a failing result carries the
instance in ``.hg`` form so it can be replayed.  Real-valued bounds are
compared after taking the floor, since game lengths are integers.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Iterable, Iterator

from .covergame import Player, Variant, build, initial_state
from .generators import gen_hk1, gen_hk2, gen_random_hypergraph, gen_random_uniform
from .hypergraph import Hypergraph, cnh, serialize, triangle_hypergraph, two_section, validate
from .solver import Solver, gamma, gamma_g, gamma_g_prime, tau, tau_g, tau_g_prime
from .strategies import (audit_lemmas, dominator_greedy, is_gstar, playout, staller_greedy_min,
                         staller_optimal, staller_random)

PASS, FAIL, SKIP = "pass", "fail", "skipped"


@dataclass
class CheckResult:
    check_id: str
    instance: str
    values: dict = field(default_factory=dict)
    bound: str = ""
    verdict: str = PASS
    witness: str = ""
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict != FAIL

    def __str__(self):
        vals = " ".join(f"{k}={v}" for k, v in self.values.items())
        extra = f" ({self.note})" if self.note else ""
        return f"{self.verdict.upper():7} {self.check_id:14} {self.instance}: {vals} [{self.bound}]{extra}"


def _replay(H: Hypergraph) -> str:
    return serialize(H).strip().replace("\n", " | ")


def _result(check_id, H, instance, values, bound, ok, note="") -> CheckResult:
    return CheckResult(check_id, instance, values, bound, PASS if ok else FAIL,
                       "" if ok else _replay(H), note)


# --- individual checks ---------------------------------------------------------------

def check_equivalence(H: Hypergraph, instance: str = "") -> CheckResult:
    """Game value on H, on its 2-section, and of the transversal game on CNH(H), both starts."""
    G, F = two_section(H), cnh(H)
    vals = {
        "gamma_g": gamma_g(H).length, "gamma_g_2sec": gamma_g(G).length, "tau_g_cnh": tau_g(F).length,
        "gamma_g'": gamma_g_prime(H).length, "gamma_g'_2sec": gamma_g_prime(G).length,
        "tau_g'_cnh": tau_g_prime(F).length,
    }
    ok = vals["gamma_g"] == vals["gamma_g_2sec"] == vals["tau_g_cnh"] and \
        vals["gamma_g'"] == vals["gamma_g'_2sec"] == vals["tau_g'_cnh"]
    return _result("equivalence", H, instance, vals, "all three equal, per start", ok)


def nested_pairs(n: int, trials: int, rng: random.Random) -> Iterator[tuple[frozenset, frozenset]]:
    for _ in range(trials):
        B = frozenset(v for v in range(n) if rng.random() < rng.random())
        A = frozenset(v for v in B if rng.random() < 0.5)
        yield A, B


def check_continuation(H: Hypergraph, trials: int, seed: int, instance: str = "",
                       pairs: Iterable[tuple[Iterable[int], Iterable[int]]] | None = None) -> CheckResult:
    """Sampled ``A <= B``: the residual value with A dominated is at least that with B, both starts.

    Uses the solver without dominance pruning, since that pruning assumes the
    very monotonicity checked here.
    """
    sys = build(H, Variant.DOMINATION)
    solver = Solver(sys, prune=False)
    if pairs is None:
        pairs = nested_pairs(H.n, trials, random.Random(seed))
    checked = 0
    for A, B in pairs:
        A, B = frozenset(A), frozenset(B)
        if not A <= B:
            raise ValueError(f"pair is not nested: {sorted(A)} vs {sorted(B)}")
        for first in Player:
            va = solver.solve(initial_state(sys, first, A)).length
            vb = solver.solve(initial_state(sys, first, B)).length
            checked += 1
            if va < vb:
                return CheckResult("continuation", instance, {"A": sorted(A), "B": sorted(B),
                                   "first": first.value, "value_A": va, "value_B": vb},
                                   "value(A) >= value(B)", FAIL, _replay(H))
    return CheckResult("continuation", instance, {"comparisons": checked}, "value(A) >= value(B)", PASS)


def _skip(check_id, instance, reason) -> CheckResult:
    return CheckResult(check_id, instance, {}, "", SKIP, "", reason)


def check_5_9(H: Hypergraph, instance: str = "") -> CheckResult:
    """Both game values at most floor(5n/9) for isolate-free H whose edges have size >= 3.

    A graph is accepted instead when every edge lies in a triangle; hypergraphs
    are solved on their 2-section.
    """
    iso = validate(H, ["isolate-free"])
    if not iso.ok:
        return _skip("bound-5/9", instance, f"isolated vertex {iso['isolate-free'].witness}")
    if H.is_uniform(2) and H.m:
        if not validate(H, ["g23"]).ok:
            return _skip("bound-5/9", instance, "graph with an edge outside every triangle")
        G = H
    else:
        small = validate(H, ["min-edge-size"], min_size=3)
        if not small.ok:
            return _skip("bound-5/9", instance, f"edge {small.outcomes[0].witness} smaller than 3")
        G = two_section(H)
    bound = 5 * H.n // 9
    gd, gs = gamma_g(G).length, gamma_g_prime(G).length
    vals = {"n": H.n, "gamma_g": gd, "gamma_g'": gs, "ratio": f"{Fraction(gd, H.n)}"}
    return _result("bound-5/9", H, instance, vals, f"<= floor(5n/9) = {bound}", gd <= bound and gs <= bound)


def check_5_8(H: Hypergraph, instance: str = "") -> CheckResult:
    rep = validate(H, ["isolate-free", "no-singleton-edges"])
    if not rep.ok:
        return _skip("bound-5/8", instance, str(rep.failures()[0]))
    bound = 5 * H.n // 8
    gd = gamma_g(H).length
    vals = {"n": H.n, "gamma_g": gd, "ratio": f"{Fraction(gd, H.n)}"}
    return _result("bound-5/8", H, instance, vals, f"<= floor(5n/8) = {bound}", gd <= bound)


def check_tau_chain(H: Hypergraph, instance: str = "") -> CheckResult:
    """On F = CNH(H): tau_g <= 2 tau - 1, tau <= (1 + ln k) n / k, and gamma_g(H) = tau_g(F)."""
    F = cnh(H)
    k = min((len(e) for e in F.edges), default=0)
    if not F.m:
        return _skip("tau-chain", instance, "empty instance")
    tg = tau_g(F).length
    t = tau(F)
    gg = gamma_g(H).length
    vals = {"k": k, "tau": t, "tau_g": tg, "gamma_g": gg}
    ok = tg <= 2 * t - 1 and gg == tg
    bound = "tau_g <= 2tau-1; gamma_g == tau_g"
    if k >= 2:
        alon = (1 + math.log(k)) / k * H.n
        vals["alon_bound"] = round(alon, 4)
        ok = ok and t <= math.floor(alon) and gg < 2 * alon
        bound += "; tau <= floor((1+ln k)n/k); gamma_g < 2(1+ln k)n/k"
    return _result("tau-chain", H, instance, vals, bound, ok)


def check_gamma_chain(H: Hypergraph, instance: str = "") -> CheckResult:
    """gamma <= gamma_g <= 2 gamma - 1."""
    g = gamma(H)
    gg = gamma_g(H).length
    return _result("gamma-chain", H, instance, {"gamma": g, "gamma_g": gg},
                   "gamma <= gamma_g <= 2gamma-1", g <= gg <= 2 * g - 1)


def check_audit(G: Hypergraph, stall_name: str, seed: int, first: Player, instance: str = "") -> CheckResult:
    """Greedy Dominator playout against the named Staller, audited turn by turn."""
    stall = {"random": lambda: staller_random(seed), "greedy-min": staller_greedy_min,
             "optimal": staller_optimal}[stall_name]()
    p = playout(G, dominator_greedy(), stall, first)
    report = audit_lemmas(p)
    vals = {"n": p.n, "length": p.length, "first": first.value, "staller": stall_name,
            "i_star": p.i_star}
    fail = report.failures()
    note = "" if not fail else str(fail[0])
    return _result("audit", G, instance, vals, "all lemma checks", report.ok, note)


# --- canonical forms and enumeration ------------------------------------------------------

def canonical_form(H: Hypergraph) -> tuple:
    """Minimum sorted-edge encoding over all vertex orders that respect a degree refinement.

    The refinement orders vertices by an isomorphism-invariant key, so the
    minimum over the permutations inside each class is a canonical form.
    Brute force: only meant for a handful of vertices.
    """
    deg = H.degrees
    nb = H.open_masks
    key = [(deg[v], bin(nb[v]).count("1"),
            tuple(sorted(deg[u] for u in range(H.n) if nb[v] >> u & 1))) for v in range(H.n)]
    classes: dict = {}
    for v in range(H.n):
        classes.setdefault(key[v], []).append(v)
    cells = [classes[k] for k in sorted(classes)]
    edges = H.sorted_edges()
    best = None
    for choice in product(*(permutations(c) for c in cells)):
        order = [v for cell in choice for v in cell]
        pos = {v: i for i, v in enumerate(order)}
        enc = tuple(sorted(tuple(sorted(pos[v] for v in e)) for e in edges))
        if best is None or enc < best:
            best = enc
    return (H.n, best)


def graphs_up_to_iso(n: int) -> list[Hypergraph]:
    """All simple graphs on ``n`` vertices, one per isomorphism class (vertex-addition + canonical dedup)."""
    level = {canonical_form(Hypergraph(0)): Hypergraph(0)}
    for size in range(1, n + 1):
        nxt: dict = {}
        for G in level.values():
            for r in range(size):
                for nbrs in combinations(range(size - 1), r):
                    H = Hypergraph.from_edges(size, [*G.sorted_edges(), *([u, size - 1] for u in nbrs)])
                    nxt.setdefault(canonical_form(H), H)
        level = nxt
    return list(level.values())


def g23_graphs(n: int) -> list[Hypergraph]:
    """Isolate-free graphs on ``n`` vertices with every edge in a triangle, up to isomorphism."""
    return [G for G in graphs_up_to_iso(n) if G.m and validate(G, ["isolate-free", "g23"]).ok]


def exhaustive_3uniform(n: int) -> list[Hypergraph]:
    """Triangle hypergraphs of :func:`g23_graphs`.

    Every isolate-free 3-uniform hypergraph on ``n`` vertices has the same
    game as exactly one of these (its 2-section is one of the graphs).
    """
    return [triangle_hypergraph(G) for G in g23_graphs(n)]


def exhaustive_uniform_direct(n: int, k: int, limit: int = 1 << 16) -> list[Hypergraph]:
    """Isolate-free k-uniform hypergraphs on ``n`` vertices by edge-subset enumeration, deduplicated."""
    pool = list(combinations(range(n), k))
    if 1 << len(pool) > limit:
        raise ValueError(f"{1 << len(pool)} edge subsets exceed the limit {limit}")
    seen: dict = {}
    for mask in range(1, 1 << len(pool)):
        edges = [pool[i] for i in range(len(pool)) if mask >> i & 1]
        H = Hypergraph.from_edges(n, edges)
        if H.isolated_vertices():
            continue
        seen.setdefault(canonical_form(H), H)
    return list(seen.values())


# --- extremal search ------------------------------------------------------------------------

@dataclass
class ExtremalResult:
    best_ratio: Fraction
    witness: Hypergraph | None
    which: str
    scanned: int
    partial: bool
    bound_violations: list[str] = field(default_factory=list)

    def __str__(self):
        flag = " (partial: budget exhausted)" if self.partial else ""
        return (f"best ratio {self.best_ratio} = {float(self.best_ratio):.4f} via {self.which} "
                f"over {self.scanned} instances{flag}; witness {self.witness}")


def _extremal_candidates(n_max: int, k: int, mode: str, budget: int, seed: int):
    if mode == "exhaustive":
        if k == 3 and n_max > 7:
            raise ValueError("exhaustive mode is limited to n <= 7 for k = 3")
        for n in range(max(k, 1), n_max + 1):
            if k == 3:
                yield from ((H, f"exhaustive n={n}") for H in exhaustive_3uniform(n))
            elif k == 2:
                yield from ((G, f"exhaustive n={n}") for G in graphs_up_to_iso(n)
                            if G.m and not G.isolated_vertices())
            else:
                yield from ((H, f"exhaustive n={n}") for H in exhaustive_uniform_direct(n, k))
        return
    known = []
    if k * k <= n_max:
        known.append((gen_hk1(k), f"hk1 k={k}"))
    if 2 * k + 1 <= n_max:
        known.append((gen_hk2(k), f"hk2 k={k}"))
    yield from known
    rng = random.Random(seed)
    for _ in range(budget - len(known)):
        n = rng.randint(k, n_max)
        lo = -(-n // k)
        hi = min(math.comb(n, k), 2 * n)
        m = rng.randint(lo, max(lo, hi))
        s = rng.getrandbits(32)
        try:
            yield gen_random_uniform(n, m, k, s, True), f"random n={n} m={m} k={k} seed={s}"
        except ValueError:
            continue


def extremal_search(n_max: int, k: int = 3, mode: str = "random", budget: int = 200,
                    seed: int = 0) -> ExtremalResult:
    """Largest gamma_g/n or gamma_g'/n found, with its witness; checks floor(5n/9) on the way."""
    best = ExtremalResult(Fraction(0), None, "", 0, False)
    for H, label in _extremal_candidates(n_max, k, mode, budget, seed):
        if best.scanned >= budget:
            best.partial = True
            break
        if not H.m or H.isolated_vertices():
            continue
        best.scanned += 1
        for name, fn in (("gamma_g", gamma_g), ("gamma_g'", gamma_g_prime)):
            val = fn(H).length
            r = Fraction(val, H.n)
            if r > best.best_ratio:
                best.best_ratio, best.witness, best.which = r, H, f"{name} ({label})"
            if k >= 3 and val > 5 * H.n // 9:
                best.bound_violations.append(f"{label}: {name}={val} > floor(5n/9)")
    return best


# --- corpora and suites -------------------------------------------------------------------------

def random_corpus(count: int, n_max: int, seed: int, *, k: int | None = 3, n_min: int | None = None,
                  isolate_free: bool = True, min_size: int = 1, max_size: int = 4):
    """Deterministic list of ``(H, provenance)``; ``k=None`` mixes edge sizes."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        s = rng.getrandbits(32)
        if k is None:
            n = rng.randint(max(n_min or 1, max_size), n_max)
            m = rng.randint(1, 2 * n)
            try:
                H = gen_random_hypergraph(n, m, min_size, max_size, s, isolate_free)
            except ValueError:
                continue
            out.append((H, f"random-mixed n={n} m={m} sizes={min_size}..{max_size} seed={s}"))
        else:
            n = rng.randint(max(n_min or k, k), n_max)
            lo = -(-n // k) if isolate_free else 1
            hi = max(lo, min(math.comb(n, k), 2 * n))
            m = rng.randint(lo, hi)
            try:
                H = gen_random_uniform(n, m, k, s, isolate_free)
            except ValueError:
                continue
            out.append((H, f"random n={n} m={m} k={k} seed={s}"))
    return out


SUITES = ("equivalence", "continuation", "bounds", "tau", "audit", "all")


def run_suite(name: str, seed: int = 0, n_max: int = 8, count: int = 30) -> list[CheckResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    names = SUITES[:-1] if name == "all" else (name,)
    results: list[CheckResult] = []
    for suite in names:
        s = seed + SUITES.index(suite)
        if suite == "equivalence":
            for H, prov in random_corpus(count, n_max, s, k=None, isolate_free=False):
                results.append(check_equivalence(H, prov))
        elif suite == "continuation":
            for i, (H, prov) in enumerate(random_corpus(max(1, count // 3), n_max, s)):
                results.append(check_continuation(H, 20, s + i, prov))
        elif suite == "bounds":
            for n in range(3, min(n_max, 6) + 1):
                for j, H in enumerate(exhaustive_3uniform(n)):
                    results.append(check_5_9(H, f"exhaustive n={n} #{j}"))
            for H, prov in random_corpus(count, n_max, s):
                results.append(check_5_9(H, prov))
            for H, prov in random_corpus(count, n_max, s + 100, k=None, min_size=2):
                results.append(check_5_8(H, prov))
        elif suite == "tau":
            for H, prov in random_corpus(count, n_max, s):
                results.append(check_tau_chain(H, prov))
                results.append(check_gamma_chain(H, prov))
        elif suite == "audit":
            for i, (H, prov) in enumerate(random_corpus(count, max(n_max, 3), s)):
                G = two_section(H)
                if not is_gstar(G):
                    continue
                for first in Player:
                    stall = ("random", "greedy-min", "optimal")[i % 3]
                    results.append(check_audit(G, stall, s + i, first, prov))
    return results


CSV_COLUMNS = ("check_id", "instance", "values", "bound", "verdict", "witness", "note")


def write_csv(results: Iterable[CheckResult], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in results:
        vals = ";".join(f"{k}={v}" for k, v in r.values.items())
        w.writerow([r.check_id, r.instance, vals, r.bound, r.verdict, r.witness, r.note])


def summary(results: list[CheckResult]) -> str:
    by: dict = {}
    for r in results:
        c = by.setdefault(r.check_id, {PASS: 0, FAIL: 0, SKIP: 0})
        c[r.verdict] += 1
    lines = [f"{cid:14} pass={c[PASS]} fail={c[FAIL]} skipped={c[SKIP]}" for cid, c in by.items()]
    total_fail = sum(c[FAIL] for c in by.values())
    lines.append(f"TOTAL {len(results)} checks, {total_fail} failures")
    return "\n".join(lines)
