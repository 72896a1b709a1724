"""Instance families: the grid and pendant constructions, their composition, the
random pendant construction and seeded random hypergraphs.

Index conventions (fixed; 1-based coordinates shift down by one):

* ``gen_hk1(k)``: grid cell ``(i, j)`` with ``1 <= i, j <= k`` is vertex
  ``(i-1)*k + (j-1)``.  Edges are the rows ``1..k-1`` followed by the ``k``
  columns, so ``gen_hk1(3)`` lists ``{0,1,2},{3,4,5},{0,3,6},{1,4,7},{2,5,8}``.
* ``gen_hk2(k)``: ``a=0, b=1, c=2``, ``u_1..u_{k-1} = 3..k+1``,
  ``v_1..v_{k-1} = k+2..2k``.
* ``gen_f_composition(F, k)``: copy ``i`` of the pendant construction occupies
  ``i*(2k+1) .. i*(2k+1)+2k`` and its ``b`` vertex ``i*(2k+1)+1`` carries
  vertex ``i`` of ``F``.
* ``gen_alon(k, seed)``: core vertices ``0..c-1`` with
  ``c = ceil((k-1) log(k-1))``; pendant ``i`` is ``c+i``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations

from .errors import InputError
from .hypergraph import Hypergraph


def gen_hk1(k: int) -> Hypergraph:
    """``k x k`` grid with all columns and all rows but the last as edges."""
    if k < 2:
        raise InputError("gen_hk1 needs k >= 2")
    idx = lambda i, j: (i - 1) * k + (j - 1)  # noqa: E731
    rows = [[idx(i, j) for j in range(1, k + 1)] for i in range(1, k)]
    cols = [[idx(i, j) for i in range(1, k + 1)] for j in range(1, k + 1)]
    return Hypergraph.from_edges(k * k, rows + cols)


def hk1_cell(k: int, v: int) -> tuple[int, int]:
    """1-based ``(row, column)`` of vertex ``v`` of ``gen_hk1(k)``."""
    return v // k + 1, v % k + 1


def gen_hk2(k: int) -> Hypergraph:
    if k < 2:
        raise InputError("gen_hk2 needs k >= 2")
    a, b, c = 0, 1, 2
    us = list(range(3, k + 2))
    vs = list(range(k + 2, 2 * k + 1))
    return Hypergraph.from_edges(2 * k + 1, [[a, *us], [b, *us], [b, *vs], [c, *vs]])


def gen_f_composition(F: Hypergraph, k: int) -> Hypergraph:
    """Glue ``|V(F)|`` disjoint pendant constructions along F's vertices (on the b's)."""
    if k < 2:
        raise InputError("composition needs k >= 2")
    bad = [sorted(e) for e in F.edges if len(e) != k]
    if bad:
        raise InputError(f"F must be {k}-uniform; edge {bad[0]} has size {len(bad[0])}")
    base = gen_hk2(k)
    size = 2 * k + 1
    edges = []
    for i in range(F.n):
        off = i * size
        edges.extend([v + off for v in sorted(e)] for e in base.edges)
    edges.extend([x * size + 1 for x in sorted(e)] for e in F.edges)
    return Hypergraph.from_edges(F.n * size, edges)


@dataclass(frozen=True)
class AlonInstance:
    hypergraph: Hypergraph
    pendants: tuple[int, ...]
    core_size: int

    def core_edge(self, i: int) -> frozenset[int]:
        return self.hypergraph.edges[i] - {self.pendants[i]}


def alon_core_size(k: int, log_base: float = math.e) -> int:
    return max(k - 1, math.ceil((k - 1) * math.log(k - 1, log_base)))


def gen_alon(k: int, seed: int, log_base: float = math.e) -> AlonInstance:
    """``k-1`` random ``(k-1)``-subsets of the core, each extended by its own pendant vertex."""
    if k < 3:
        raise InputError("gen_alon needs k >= 3")
    core = alon_core_size(k, log_base)
    rng = random.Random(seed)
    edges = []
    pendants = []
    for i in range(k - 1):
        e = sorted(rng.sample(range(core), k - 1))
        pendants.append(core + i)
        edges.append(e + [core + i])
    return AlonInstance(Hypergraph.from_edges(core + k - 1, edges), tuple(pendants), core)


def gen_random_uniform(n: int, m: int, k: int, seed: int, require_isolate_free: bool = False,
                       max_tries: int = 1000) -> Hypergraph:
    """``m`` distinct uniformly random ``k``-subsets of ``0..n-1`` (edges listed sorted)."""
    if not (1 <= k <= n) or m < 0:
        raise InputError(f"infeasible parameters n={n}, m={m}, k={k}")
    total = math.comb(n, k)
    if m > total:
        raise InputError(f"cannot pick {m} distinct {k}-subsets out of {total}")
    if require_isolate_free and m * k < n:
        raise InputError(f"{m} edges of size {k} cannot cover {n} vertices")
    rng = random.Random(seed)
    pool = list(combinations(range(n), k)) if total <= 50_000 else None
    for _ in range(max_tries):
        if pool is not None:
            edges = rng.sample(pool, m)
        else:
            chosen: set[tuple[int, ...]] = set()
            while len(chosen) < m:
                chosen.add(tuple(sorted(rng.sample(range(n), k))))
            edges = list(chosen)
        H = Hypergraph.from_edges(n, sorted(edges))
        if not require_isolate_free or not H.isolated_vertices():
            return H
    raise InputError(f"no isolate-free instance after {max_tries} tries (n={n}, m={m}, k={k})")


def gen_random_hypergraph(n: int, m: int, min_size: int, max_size: int, seed: int,
                          require_isolate_free: bool = False, max_tries: int = 1000) -> Hypergraph:
    """``m`` distinct random edges with sizes uniform in ``min_size..max_size``."""
    if not (1 <= min_size <= max_size <= n):
        raise InputError(f"infeasible edge sizes {min_size}..{max_size} for n={n}")
    total = sum(math.comb(n, s) for s in range(min_size, max_size + 1))
    if m > total:
        raise InputError(f"cannot pick {m} distinct edges out of {total}")
    rng = random.Random(seed)
    for _ in range(max_tries):
        chosen: set[tuple[int, ...]] = set()
        while len(chosen) < m:
            s = rng.randint(min_size, max_size)
            chosen.add(tuple(sorted(rng.sample(range(n), s))))
        H = Hypergraph.from_edges(n, sorted(chosen))
        if not require_isolate_free or not H.isolated_vertices():
            return H
    raise InputError(f"no isolate-free instance after {max_tries} tries")


FAMILIES = ("hk1", "hk2", "fcomp", "alon", "random", "random-mixed")


@dataclass(frozen=True)
class GenSpec:
    """Family tag plus parameters; building the same spec twice gives identical output."""

    family: str
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def build(self) -> Hypergraph:
        return generate(self)[0]

    def describe(self) -> str:
        parts = [f"family={self.family}"]
        parts += [f"{k}={v}" for k, v in sorted(self.params.items())]
        if self.seed is not None:
            parts.append(f"seed={self.seed}")
        return "genspec " + " ".join(parts)


def _need(params: dict, *names):
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise InputError(f"missing parameter(s): {', '.join(missing)}")
    return [int(params[n]) for n in names]


def generate(spec: GenSpec) -> tuple[Hypergraph, list[str]]:
    """Build the instance and the provenance comment lines that go with it."""
    p = spec.params
    comments = [spec.describe()]
    if spec.family == "hk1":
        (k,) = _need(p, "k")
        H = gen_hk1(k)
    elif spec.family == "hk2":
        (k,) = _need(p, "k")
        H = gen_hk2(k)
    elif spec.family == "fcomp":
        k, t = _need(p, "k", "t")
        # F is the single k-edge on its first k vertices when t >= k, else edgeless
        F = Hypergraph.from_edges(t, [range(k)] if t >= k else [])
        H = gen_f_composition(F, k)
    elif spec.family == "alon":
        (k,) = _need(p, "k")
        inst = gen_alon(k, _seed(spec))
        H = inst.hypergraph
        comments.append("pendants " + " ".join(map(str, inst.pendants)))
    elif spec.family == "random":
        n, m, k = _need(p, "n", "m", "k")
        H = gen_random_uniform(n, m, k, _seed(spec), bool(p.get("isolate_free", False)))
    elif spec.family == "random-mixed":
        n, m, lo, hi = _need(p, "n", "m", "min_size", "max_size")
        H = gen_random_hypergraph(n, m, lo, hi, _seed(spec), bool(p.get("isolate_free", False)))
    else:
        raise InputError(f"unknown family {spec.family!r}; known: {', '.join(FAMILIES)}")
    return H, comments


def _seed(spec: GenSpec) -> int:
    if spec.seed is None:
        raise InputError(f"family {spec.family!r} needs a seed")
    return spec.seed
