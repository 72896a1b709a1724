"""Hypergraphs on vertices ``0..n-1`` with neighbourhoods, reductions and ``.hg`` I/O.

Edges are kept in insertion order and duplicates are allowed (closed
neighbourhood hypergraphs are multi-hypergraphs).  Every edge and every
neighbourhood is also available as an ``int`` bitmask, which is what the game
and solver layers work with.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InputError


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def from_mask(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class Hypergraph:
    n: int
    edges: tuple[frozenset[int], ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise InputError(f"vertex count must be a nonnegative integer, got {self.n!r}")
        normalized = []
        for e in self.edges:
            vs = list(e)
            if not vs:
                raise InputError("empty edges are not allowed")
            if len(set(vs)) != len(vs):
                raise InputError(f"edge {sorted(vs)} repeats a vertex")
            for v in vs:
                if not isinstance(v, int) or not 0 <= v < self.n:
                    raise InputError(f"edge {sorted(vs)} has vertex {v!r} outside 0..{self.n - 1}")
            normalized.append(frozenset(vs))
        object.__setattr__(self, "edges", tuple(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        return cls(n, tuple(frozenset(e) if isinstance(e, frozenset) else tuple(e) for e in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_masks(self) -> tuple[int, ...]:
        return tuple(to_mask(e) for e in self.edges)

    @cached_property
    def closed_masks(self) -> tuple[int, ...]:
        """``closed_masks[v]`` is the bitmask of N[v]."""
        nb = [1 << v for v in range(self.n)]
        for em in self.edge_masks:
            for v in from_mask(em):
                nb[v] |= em
        return tuple(nb)

    @cached_property
    def open_masks(self) -> tuple[int, ...]:
        return tuple(m & ~(1 << v) for v, m in enumerate(self.closed_masks))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return tuple(deg)

    def edge_sizes(self) -> set[int]:
        return {len(e) for e in self.edges}

    def is_uniform(self, k: int) -> bool:
        return all(len(e) == k for e in self.edges)

    def isolated_vertices(self) -> list[int]:
        return [v for v, d in enumerate(self.degrees) if d == 0]

    def sorted_edges(self) -> list[tuple[int, ...]]:
        return [tuple(sorted(e)) for e in self.edges]

    def __repr__(self):
        return f"Hypergraph(n={self.n}, edges={self.sorted_edges()})"


def _check_vertex(H: Hypergraph, v: int) -> None:
    if not isinstance(v, int) or not 0 <= v < H.n:
        raise InputError(f"vertex {v!r} out of range 0..{H.n - 1}")


def closed_neighborhood(H: Hypergraph, v: int) -> frozenset[int]:
    _check_vertex(H, v)
    return frozenset(from_mask(H.closed_masks[v]))


def open_neighborhood(H: Hypergraph, v: int) -> frozenset[int]:
    _check_vertex(H, v)
    return frozenset(from_mask(H.open_masks[v]))


def two_section(H: Hypergraph) -> Hypergraph:
    """Graph joining every pair of vertices that share an edge; no duplicate edges."""
    pairs = []
    for u in range(H.n):
        for w in from_mask(H.open_masks[u]):
            if w > u:
                pairs.append((u, w))
    return Hypergraph.from_edges(H.n, pairs)


def cnh(H: Hypergraph) -> Hypergraph:
    """Closed neighbourhood hypergraph: edge ``i`` is N[i]; multiplicities are kept."""
    return Hypergraph.from_edges(H.n, (from_mask(m) for m in H.closed_masks))


def triangles(G: Hypergraph) -> list[tuple[int, int, int]]:
    adj = G.open_masks
    out = []
    for u in range(G.n):
        for v in from_mask(adj[u] >> (u + 1) << (u + 1)):
            for w in from_mask(adj[u] & adj[v] & ~((1 << (v + 1)) - 1)):
                out.append((u, v, w))
    return out


def _require_simple_graph(G: Hypergraph) -> None:
    if not G.is_uniform(2):
        raise InputError("expected a 2-uniform hypergraph (a graph)")
    if len(set(G.edges)) != len(G.edges):
        raise InputError("expected a simple graph without duplicate edges")


def triangle_hypergraph(G: Hypergraph) -> Hypergraph:
    """3-uniform hypergraph whose edges are the triangles of the graph ``G``."""
    _require_simple_graph(G)
    return Hypergraph.from_edges(G.n, triangles(G))


# --- validation -----------------------------------------------------------------

CHECKS = ("isolate-free", "uniform", "min-edge-size", "no-singleton-edges", "g23", "vertex-in-triangle", "simple-graph")


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    witness: object = None

    def __str__(self):
        verdict = "pass" if self.passed else f"FAIL (witness {self.witness})"
        return f"{self.name}: {verdict}"


@dataclass(frozen=True)
class ValidationReport:
    outcomes: tuple[CheckOutcome, ...]

    @property
    def ok(self) -> bool:
        return all(o.passed for o in self.outcomes)

    def failures(self) -> list[CheckOutcome]:
        return [o for o in self.outcomes if not o.passed]

    def __getitem__(self, name: str) -> CheckOutcome:
        for o in self.outcomes:
            if o.name == name:
                return o
        raise KeyError(name)

    def __str__(self):
        return "; ".join(str(o) for o in self.outcomes)


def _edge_in_triangle_witness(G: Hypergraph):
    adj = G.open_masks
    for u, v in G.sorted_edges():
        if not adj[u] & adj[v]:
            return (u, v)
    return None


def validate(H: Hypergraph, requirements: Sequence[str], *, k: int | None = None,
             min_size: int = 3) -> ValidationReport:
    """Run the named checks and report pass/fail with a witness for each failure.

    Recognised names: ``isolate-free``, ``uniform`` (needs ``k``),
    ``min-edge-size`` (every edge has at least ``min_size`` vertices),
    ``no-singleton-edges``, ``g23`` (graph in which every edge lies in a
    triangle), ``vertex-in-triangle`` and ``simple-graph``.
    """
    outcomes = []
    for req in requirements:
        if req == "isolate-free":
            iso = H.isolated_vertices()
            outcomes.append(CheckOutcome(req, not iso, iso[0] if iso else None))
        elif req == "uniform":
            if k is None:
                raise InputError("the 'uniform' check needs k")
            bad = next((e for e in H.sorted_edges() if len(e) != k), None)
            outcomes.append(CheckOutcome(f"{k}-uniform", bad is None, bad))
        elif req == "min-edge-size":
            bad = next((e for e in H.sorted_edges() if len(e) < min_size), None)
            outcomes.append(CheckOutcome(f"min-edge-size-{min_size}", bad is None, bad))
        elif req == "no-singleton-edges":
            bad = next((e for e in H.sorted_edges() if len(e) == 1), None)
            outcomes.append(CheckOutcome(req, bad is None, bad))
        elif req == "simple-graph":
            bad = next((e for e in H.sorted_edges() if len(e) != 2), None)
            if bad is None and len(set(H.edges)) != len(H.edges):
                seen = set()
                for e in H.edges:
                    if e in seen:
                        bad = tuple(sorted(e))
                        break
                    seen.add(e)
            outcomes.append(CheckOutcome(req, bad is None, bad))
        elif req == "g23":
            bad = next((e for e in H.sorted_edges() if len(e) != 2), None)
            if bad is None:
                bad = _edge_in_triangle_witness(H)
            outcomes.append(CheckOutcome(req, bad is None, bad))
        elif req == "vertex-in-triangle":
            adj = H.open_masks
            bad = None
            for v in range(H.n):
                if not any(adj[v] & adj[u] for u in from_mask(adj[v])):
                    bad = v
                    break
            outcomes.append(CheckOutcome(req, bad is None, bad))
        else:
            raise InputError(f"unknown validation check {req!r}; known: {', '.join(CHECKS)}")
    return ValidationReport(tuple(outcomes))


# --- .hg text format --------------------------------------------------------------

def serialize(H: Hypergraph, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"{H.n} {H.m}")
    lines.extend(" ".join(map(str, e)) for e in H.sorted_edges())
    return "\n".join(lines) + "\n"


def parse(text: str) -> Hypergraph:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append((lineno, [int(tok) for tok in line.split()]))
        except ValueError:
            raise InputError(f"line {lineno}: expected integers, got {raw!r}") from None
    if not rows:
        raise InputError("missing header line 'n m'")
    lineno, header = rows[0]
    if len(header) != 2 or min(header) < 0:
        raise InputError(f"line {lineno}: header must be 'n m' with nonnegative integers")
    n, m = header
    if len(rows) - 1 != m:
        raise InputError(f"header declares {m} edges but {len(rows) - 1} edge lines follow")
    return Hypergraph.from_edges(n, (vs for _, vs in rows[1:]))


def read_hg(path) -> Hypergraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return parse(text)


def write_hg(H: Hypergraph, path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(serialize(H, comments))
