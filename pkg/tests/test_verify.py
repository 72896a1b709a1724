import csv
import io
from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import hypergraphs
from hdg.covergame import Player
from hdg.generators import gen_hk1, gen_random_uniform
from hdg.hypergraph import Hypergraph, parse, two_section
from hdg.verify import (CSV_COLUMNS, FAIL, PASS, SKIP, SUITES, CheckResult, canonical_form, check_5_8,
                        check_5_9, check_audit, check_continuation, check_equivalence, check_gamma_chain,
                        check_tau_chain, exhaustive_3uniform, exhaustive_uniform_direct, extremal_search,
                        _result, g23_graphs, graphs_up_to_iso, random_corpus, run_suite, summary,
                        write_csv)


def relabel(H, perm):
    return Hypergraph.from_edges(H.n, [[perm[v] for v in e] for e in H.edges])


class TestEquivalence:
    def test_grid(self, grid):
        r = check_equivalence(grid)
        assert r.verdict == PASS
        assert r.values["gamma_g"] == r.values["gamma_g_2sec"] == r.values["tau_g_cnh"] == 4

    def test_single_edge(self, single_edge):
        r = check_equivalence(single_edge)
        assert r.passed and r.values["gamma_g"] == r.values["tau_g_cnh"] == 1

    @pytest.mark.parametrize("seed", range(3))
    def test_random(self, seed):
        for H, prov in random_corpus(10, 10, seed, k=None, isolate_free=False):
            assert check_equivalence(H, prov).passed


class TestContinuation:
    def test_equal_sets(self, grid):
        r = check_continuation(grid, 0, 0, pairs=[({1, 2}, {1, 2})])
        assert r.passed and r.values["comparisons"] == 2

    def test_empty_vs_all(self, grid):
        assert check_continuation(grid, 0, 0, pairs=[(set(), set(range(9)))]).passed

    def test_rejects_non_nested(self, grid):
        with pytest.raises(ValueError):
            check_continuation(grid, 0, 0, pairs=[({1}, {2})])

    @pytest.mark.parametrize("seed", range(4))
    def test_random_pairs(self, seed):
        H = gen_random_uniform(8, 6, 3, seed)
        r = check_continuation(H, 100, seed)
        assert r.passed and r.values["comparisons"] == 200


class TestBounds:
    def test_grid(self, grid):
        r = check_5_9(grid)
        assert r.passed and r.values["ratio"] == "4/9" and r.bound.endswith("= 5")

    def test_single_edge(self, single_edge):
        r = check_5_9(single_edge)
        assert r.passed and r.values["gamma_g"] == 1

    def test_skips(self):
        assert check_5_9(Hypergraph.from_edges(4, [[0, 1, 2]])).verdict == SKIP
        assert check_5_9(Hypergraph.from_edges(4, [[0, 1, 2], [2, 3]])).verdict == SKIP
        assert check_5_9(Hypergraph.from_edges(3, [[0, 1], [1, 2]])).verdict == SKIP
        assert check_5_8(Hypergraph.from_edges(3, [[0], [1, 2]])).verdict == SKIP

    def test_graph_input_accepted(self):
        assert check_5_9(two_section(gen_hk1(3))).verdict == PASS

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_exhaustive(self, n):
        assert all(check_5_9(H).verdict == PASS for H in exhaustive_3uniform(n))

    def test_five_eighths(self):
        for H, prov in random_corpus(20, 9, 5, k=None, min_size=2):
            assert check_5_8(H, prov).verdict == PASS

    def test_failure_carries_replayable_witness(self, grid):
        assert CheckResult("x", "y").passed
        bad = _result("x", grid, "grid", {}, "", False)
        assert bad.verdict == FAIL and not bad.passed
        assert parse(bad.witness.replace(" | ", "\n")) == grid


class TestChains:
    def test_single_k_edge(self):
        for k in (2, 3, 5):
            r = check_tau_chain(Hypergraph.from_edges(k, [range(k)]))
            assert r.passed and r.values["tau"] == r.values["tau_g"] == 1

    def test_grid(self, grid):
        r = check_tau_chain(grid)
        assert r.passed and r.values["tau_g"] == 4

    @given(hypergraphs(min_n=3, max_n=9, uniform=3, max_m=8))
    def test_random_3_uniform(self, H):
        assert check_tau_chain(H).passed
        assert check_gamma_chain(H).passed


class TestAuditCheck:
    @pytest.mark.parametrize("stall", ["random", "greedy-min", "optimal"])
    def test_grid(self, grid, stall):
        for first in Player:
            r = check_audit(two_section(grid), stall, 3, first)
            assert r.passed, r.note


class TestEnumeration:
    def test_graph_counts(self):
        # numbers of graphs on n unlabelled vertices
        assert [len(graphs_up_to_iso(n)) for n in range(1, 7)] == [1, 2, 4, 11, 34, 156]

    def test_g23_counts_from_scratch(self):
        # independent count: filter labelled graphs and dedup by brute-force relabelling
        for n in (3, 4, 5):
            pairs = list(combinations(range(n), 2))
            seen = set()
            for mask in range(1 << len(pairs)):
                G = Hypergraph.from_edges(n, [p for i, p in enumerate(pairs) if mask >> i & 1])
                if not G.m or G.isolated_vertices():
                    continue
                adj = G.open_masks
                if any(not adj[u] & adj[v] for u, v in G.sorted_edges()):
                    continue
                seen.add(min(tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in G.sorted_edges()))
                             for p in permutations(range(n))))
            assert len(g23_graphs(n)) == len(seen)

    @given(hypergraphs(max_n=6), st.randoms(use_true_random=False))
    def test_canonical_form_invariant(self, H, rnd):
        perm = list(range(H.n))
        rnd.shuffle(perm)
        assert canonical_form(relabel(H, perm)) == canonical_form(H)

    def test_canonical_form_separates(self):
        P3 = Hypergraph.from_edges(3, [[0, 1], [1, 2]])
        K3 = Hypergraph.from_edges(3, [[0, 1], [1, 2], [0, 2]])
        assert canonical_form(P3) != canonical_form(K3)

    @pytest.mark.parametrize("n", [4, 5])
    def test_triangle_route_matches_direct(self, n):
        via_graphs = {canonical_form(two_section(H)) for H in exhaustive_3uniform(n)}
        direct = {canonical_form(two_section(H)) for H in exhaustive_uniform_direct(n, 3, limit=1 << 11)}
        assert via_graphs == direct

    def test_direct_limit(self):
        with pytest.raises(ValueError):
            exhaustive_uniform_direct(7, 3, limit=1 << 10)


class TestExtremal:
    def test_random_scan_finds_grid(self):
        res = extremal_search(9, 3, "random", 30, 1)
        assert res.best_ratio >= Fraction(4, 9)
        assert not res.bound_violations and not res.partial

    def test_exhaustive_small(self):
        res = extremal_search(5, 3, "exhaustive", 10_000, 0)
        assert not res.bound_violations and not res.partial
        assert res.witness is not None and res.best_ratio <= Fraction(5 * res.witness.n // 9, res.witness.n)

    def test_budget_flags_partial(self):
        res = extremal_search(6, 3, "exhaustive", 3, 0)
        assert res.partial and res.scanned == 3

    def test_exhaustive_limit(self):
        with pytest.raises(ValueError):
            extremal_search(8, 3, "exhaustive")

    def test_empty_edge_sets_skipped(self):
        # graphs on at most 3 vertices: only K2, P3 and K3 are isolate-free
        res = extremal_search(3, 2, "exhaustive", 100, 0)
        assert res.scanned == 3


class TestCorpusAndSuites:
    def test_corpus_deterministic(self):
        a = random_corpus(15, 10, 4)
        b = random_corpus(15, 10, 4)
        assert [(H, p) for H, p in a] == [(H, p) for H, p in b]
        assert all(not H.isolated_vertices() and H.is_uniform(3) for H, _ in a)

    def test_corpus_provenance_replays(self):
        H, prov = random_corpus(1, 10, 9)[0]
        fields = dict(kv.split("=") for kv in prov.split()[1:])
        again = gen_random_uniform(int(fields["n"]), int(fields["m"]), 3, int(fields["seed"]), True)
        assert again == H

    def test_csv(self):
        results = run_suite("tau", seed=1, n_max=7, count=4)
        buf = io.StringIO()
        write_csv(results, buf)
        rows = list(csv.reader(io.StringIO(buf.getvalue())))
        assert tuple(rows[0]) == CSV_COLUMNS and len(rows) == len(results) + 1
        assert "TOTAL" in summary(results)

    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            run_suite("nope")

    def test_all_suite_small(self):
        results = run_suite("all", seed=2, n_max=7, count=4)
        ids = {r.check_id for r in results}
        assert {"equivalence", "continuation", "bound-5/9", "bound-5/8", "tau-chain", "audit"} <= ids
        assert all(r.passed for r in results)
        assert "all" in SUITES
