import math
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import GRID_EDGES
from hdg.errors import InputError
from hdg.generators import (FAMILIES, GenSpec, alon_core_size, gen_alon, gen_f_composition, gen_hk1, gen_hk2,
                            gen_random_hypergraph, gen_random_uniform, generate, hk1_cell)
from hdg.hypergraph import Hypergraph, serialize, two_section, validate
from hdg.solver import gamma_g, gamma_g_prime


def components(G):
    seen, count = set(), 0
    adj = G.open_masks
    for s in range(G.n):
        if s in seen:
            continue
        count += 1
        stack = [s]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(u for u in range(G.n) if adj[v] >> u & 1)
    return count


class TestGrid:
    def test_k3_equals_small_grid(self):
        assert list(gen_hk1(3).edges) == [frozenset(e) for e in GRID_EDGES]

    def test_k2_is_a_path_with_value_2(self):
        H = gen_hk1(2)
        assert H.n == 4 and H.is_uniform(2) and H.m == 3
        assert sorted(H.degrees) == [1, 1, 2, 2]
        assert gamma_g(H).length == 2

    @pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
    def test_degrees(self, k):
        H = gen_hk1(k)
        assert H.n == k * k and H.m == 2 * k - 1 and H.is_uniform(k)
        assert set(H.degrees) == {1, 2}
        assert H.degrees.count(1) == k

    def test_cell_map(self):
        assert hk1_cell(3, 0) == (1, 1)
        assert hk1_cell(3, 5) == (2, 3)
        assert all((hk1_cell(4, v)[0] - 1) * 4 + hk1_cell(4, v)[1] - 1 == v for v in range(16))

    def test_rejects_small_k(self):
        with pytest.raises(InputError):
            gen_hk1(1)


class TestPendant:
    def test_k3_shape(self):
        H = gen_hk2(3)
        assert H.n == 7 and H.m == 4 and H.is_uniform(3)
        assert H.degrees[1] == 2 and H.degrees[0] == H.degrees[2] == 1
        assert gamma_g(H).length == gamma_g_prime(H).length == 3

    def test_k5_values(self):
        H = gen_hk2(5)
        assert (gamma_g(H).length, gamma_g_prime(H).length) == (3, 3)

    def test_rejects_small_k(self):
        with pytest.raises(InputError):
            gen_hk2(1)


class TestComposition:
    def test_single_edge_t3(self):
        H = gen_f_composition(Hypergraph.from_edges(3, [[0, 1, 2]]), 3)
        assert H.n == 21 and H.is_uniform(3)
        assert H.edges[-1] == frozenset({1, 8, 15})

    def test_singleton_edge_rejected(self):
        with pytest.raises(InputError):
            gen_f_composition(Hypergraph.from_edges(1, [[0]]), 3)

    @pytest.mark.parametrize("t", [1, 2, 3, 4])
    def test_copies_are_components(self, t):
        H = gen_f_composition(Hypergraph.from_edges(t, []), 3)
        assert components(two_section(H)) == t

    def test_b_vertices_carry_f(self):
        F = Hypergraph.from_edges(4, [[0, 2, 3]])
        H = gen_f_composition(F, 3)
        assert H.edges[-1] == frozenset({1, 15, 22})


class TestAlon:
    @pytest.mark.parametrize("k,seed", [(3, 0), (4, 1), (5, 2), (6, 3)])
    def test_shape(self, k, seed):
        inst = gen_alon(k, seed)
        H = inst.hypergraph
        assert H.m == k - 1 and H.is_uniform(k)
        assert inst.core_size == alon_core_size(k) == max(k - 1, math.ceil((k - 1) * math.log(k - 1)))
        for i, e in enumerate(H.edges):
            p = inst.pendants[i]
            assert p in e and H.degrees[p] == 1
            assert len(e & set(inst.pendants)) == 1
            assert inst.core_edge(i) == e - {p}
            assert max(inst.core_edge(i)) < inst.core_size

    def test_base_two(self):
        assert alon_core_size(5, 2) == 8

    def test_deterministic(self):
        assert gen_alon(5, 11) == gen_alon(5, 11)

    def test_rejects_small_k(self):
        with pytest.raises(InputError):
            gen_alon(2, 0)


class TestRandom:
    def test_forced_single_edge(self):
        assert gen_random_uniform(3, 1, 3, 0).sorted_edges() == [(0, 1, 2)]

    @given(st.integers(0, 2 ** 32))
    def test_same_seed_same_instance(self, seed):
        assert gen_random_uniform(9, 5, 3, seed) == gen_random_uniform(9, 5, 3, seed)

    def test_isolate_free_validates(self):
        H = gen_random_uniform(9, 5, 3, 4, require_isolate_free=True)
        assert validate(H, ["isolate-free", "uniform"], k=3).ok

    @given(st.integers(3, 9), st.data())
    def test_distinct_edges(self, n, data):
        m = data.draw(st.integers(0, math.comb(n, 3)))
        H = gen_random_uniform(n, m, 3, data.draw(st.integers(0, 100)))
        assert len(set(H.edges)) == H.m == m and H.is_uniform(3)

    @pytest.mark.parametrize("args", [(3, 2, 3), (2, 1, 3), (5, 1, 0), (9, 2, 3)])
    def test_infeasible(self, args):
        n, m, k = args
        with pytest.raises(InputError):
            gen_random_uniform(n, m, k, 0, require_isolate_free=True)

    def test_mixed_sizes(self):
        H = gen_random_hypergraph(8, 10, 2, 4, 5)
        assert H.edge_sizes() <= {2, 3, 4} and H.m == 10

    def test_mixed_infeasible(self):
        with pytest.raises(InputError):
            gen_random_hypergraph(3, 1, 4, 5, 0)

    def test_exhaustive_pool_matches_combinations(self):
        H = gen_random_uniform(5, math.comb(5, 3), 3, 1)
        assert sorted(H.sorted_edges()) == list(combinations(range(5), 3))


class TestGenSpec:
    @pytest.mark.parametrize("spec", [
        GenSpec("hk1", {"k": 4}), GenSpec("hk2", {"k": 3}), GenSpec("fcomp", {"k": 3, "t": 3}),
        GenSpec("alon", {"k": 4}, 9), GenSpec("random", {"n": 9, "m": 5, "k": 3, "isolate_free": 1}, 2),
        GenSpec("random-mixed", {"n": 8, "m": 6, "min_size": 2, "max_size": 4}, 3)])
    def test_bit_exact(self, spec):
        a, ca = generate(spec)
        b, cb = generate(spec)
        assert serialize(a, ca) == serialize(b, cb)
        assert ca[0] == spec.describe()

    def test_families_listed(self):
        assert set(FAMILIES) == {"hk1", "hk2", "fcomp", "alon", "random", "random-mixed"}

    def test_alon_comment(self):
        H, comments = generate(GenSpec("alon", {"k": 4}, 9))
        assert H.is_uniform(4)
        assert comments[1].startswith("pendants ")

    def test_fcomp_edgeless_below_k(self):
        H, _ = generate(GenSpec("fcomp", {"k": 3, "t": 2}))
        assert H.n == 14 and H.m == 8

    @pytest.mark.parametrize("spec", [GenSpec("nope"), GenSpec("hk1"), GenSpec("random", {"n": 5, "m": 2, "k": 3})])
    def test_bad_specs(self, spec):
        with pytest.raises(InputError):
            generate(spec)
