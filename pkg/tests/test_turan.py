import math
from fractions import Fraction
from math import comb

import pytest

from bergetrees.berge import find_berge_copy
from bergetrees.bounds import RegimeError, bound
from bergetrees.constructions import make_tree, multi_blocks
from bergetrees.hypermodel import MultiHypergraph
from bergetrees.trees import enumerate_trees, is_star
from bergetrees.turan import (
    GuardExceeded,
    brute_force_turan,
    enumerate_hypergraphs,
    in_open_regime,
    isomorphic,
    probe_conjecture,
    verify_extremal,
)

P3 = make_tree("path", 3)


class TestBound:
    @pytest.mark.parametrize(
        "args,value",
        [
            ((9, 8, 4, "simple"), 3),
            ((8, 3, 3, "simple"), 4),
            ((6, 3, 3, "multi"), 4),
            ((9, 8, 4, "multi"), Fraction(27, 8)),
            ((10, 3, 5, "path_long"), 20),
            ((12, 4, 3, "path_short"), Fraction(24, 5)),
        ],
    )
    def test_values(self, args, value):
        assert bound(*args) == value

    @pytest.mark.parametrize(
        "args,match",
        [
            ((9, 7, 4, "simple"), "k\\(k-2\\)"),
            ((9, 5, 4, "multi"), "\\(k-1\\)\\(k-2\\)"),
            ((9, 3, 4, "path_long"), "k > r\\+1"),
            ((9, 2, 3, "path_short"), "r >= k"),
        ],
    )
    def test_regime(self, args, match):
        with pytest.raises(RegimeError, match=match):
            bound(*args)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            bound(9, 8, 4, "other")


class TestBruteForce:
    @pytest.mark.parametrize(
        "n,r,k,tree,value",
        [
            (4, 3, 3, "path", 2),
            (9, 8, 4, "path", 3),
            (8, 3, 3, "path", 4),
            (5, 3, 3, "path", 2),
            (6, 3, 3, "path", 2),
            (7, 3, 3, "path", 3),
        ],
    )
    def test_simple_values(self, n, r, k, tree, value):
        res = brute_force_turan(n, r, k, make_tree(tree, k), "simple")
        assert res.value == value
        for H in res.extremal:
            assert H.e == value and find_berge_copy(H, res.tree) is None

    def test_four_three_three_single_class(self):
        res = brute_force_turan(4, 3, 3, P3, "simple")
        assert len(res.extremal) == 1

    def test_below_r_vertices(self):
        res = brute_force_turan(2, 3, 3, P3, "multi")
        assert res.value == 0

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            brute_force_turan(11, 2, 3, P3)
        with pytest.raises(GuardExceeded):
            brute_force_turan(9, 4, 3, P3)

    def test_infinite_when_tree_does_not_fit_an_edge(self):
        res = brute_force_turan(3, 3, 3, P3, "multi")
        assert res.value == math.inf and res.infinite and res.extremal == []

    @pytest.mark.parametrize("n,r,k", [(5, 5, 4), (6, 5, 4), (5, 4, 3)])
    def test_multi_cap_is_k_minus_one(self, n, r, k):
        for T in enumerate_trees(k):
            res = brute_force_turan(n, r, k, T, "multi")
            assert res.value != math.inf
            for H in res.extremal:
                assert max(H.multiplicities().values()) <= k - 1

    def test_multi_instance_above_r_equals_k(self):
        res = brute_force_turan(5, 5, 4, make_tree("path", 4), "multi")
        assert res.value == 3
        assert res.extremal[0].edges == ((0, 1, 2, 3, 4),) * 3

    def test_extremal_certificates_are_free(self):
        for T in enumerate_trees(4):
            res = brute_force_turan(9, 8, 4, T, "simple", collect_free=True)
            for H in res.extremal + res.free_hypergraphs:
                assert find_berge_copy(H, T) is None


class TestPruningSoundness:
    @pytest.mark.parametrize(
        "n,r,k,mode",
        [
            (4, 3, 3, "simple"),
            (5, 3, 3, "simple"),
            (6, 3, 3, "simple"),
            (6, 5, 4, "simple"),
            (5, 4, 3, "multi"),
            (5, 2, 3, "simple"),
            (6, 2, 3, "simple"),
            (6, 5, 4, "multi"),
        ],
    )
    def test_values_agree(self, n, r, k, mode):
        assert comb(n, r) <= 20
        for T in enumerate_trees(k):
            a = brute_force_turan(n, r, k, T, mode, prune_isomorphs=True)
            b = brute_force_turan(n, r, k, T, mode, prune_isomorphs=False)
            assert a.value == b.value
            assert len(a.extremal) == len(b.extremal)
            for H in a.extremal:
                assert sum(isomorphic(H, G) for G in b.extremal) == 1


class TestMonotonicity:
    @pytest.mark.parametrize("r,k,mode", [(3, 3, "simple"), (2, 3, "simple"), (4, 3, "multi"), (5, 4, "simple")])
    def test_nondecreasing_in_n(self, r, k, mode):
        for T in enumerate_trees(k):
            values = [brute_force_turan(n, r, k, T, mode).value for n in range(r, r + 4) if comb(n, r) <= 60]
            assert values == sorted(values)


class TestOracleVsBound:
    @pytest.mark.parametrize("n,r,k", [(4, 3, 3), (5, 3, 3), (6, 3, 3), (7, 3, 3), (8, 3, 3), (9, 8, 4)])
    def test_simple_bound_respected(self, n, r, k):
        b = bound(n, r, k, "simple")
        for T in enumerate_trees(k):
            if is_star(T):
                continue
            value = brute_force_turan(n, r, k, T, "simple").value
            assert value <= b
            assert (value == b) == (n % (r + 1) == 0)


class TestVerifyExtremal:
    def test_path_simple(self):
        rep = verify_extremal(4, 3, 3, P3, "simple")
        assert rep.applicable and rep.ok and len(rep.matches) == 1

    def test_infinite_not_applicable(self):
        rep = verify_extremal(6, 3, 3, P3, "multi")
        assert not rep.applicable and "infinite" in rep.reason

    def test_below_bound_not_applicable(self):
        rep = verify_extremal(5, 3, 3, P3, "simple")
        assert not rep.applicable

    def test_star_simple_not_applicable(self):
        rep = verify_extremal(9, 8, 4, make_tree("star", 4), "simple")
        assert not rep.applicable

    def test_regime_not_met(self):
        rep = verify_extremal(5, 2, 3, P3, "simple")
        assert not rep.applicable and "regime" in rep.reason

    def test_multi_blocks_family(self):
        rep = verify_extremal(8, 4, 3, P3, "multi", max_candidates=80)
        assert rep.result.value == 4
        assert rep.applicable and rep.ok and rep.matches


class TestInfiniteValueAtSmallR:
    """At r = k a single edge repeated without limit is Berge-free for every
    k-edge tree (no tree on k+1 vertices fits in r vertices), so the multi
    number is infinite and the multi bound fails even inside its regime."""

    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_repeated_triple_beats_bound(self, n):
        H = MultiHypergraph(n, 3, ((0, 1, 2),) * 5)
        assert H.e > bound(n, 3, 3, "multi")
        for T in enumerate_trees(3):
            assert find_berge_copy(H, T) is None

    def test_counterexample_at_three_vertices(self):
        H = MultiHypergraph(3, 3, ((0, 1, 2),) * 4)
        assert H.e > bound(3, 3, 3, "multi")
        assert find_berge_copy(H, P3) is None


class TestEnumerateHypergraphs:
    @pytest.mark.parametrize("n,r,m,count", [(4, 3, 3, 1), (9, 8, 4, 1), (4, 2, 2, 2), (4, 2, 3, 3), (5, 2, 3, 4)])
    def test_counts(self, n, r, m, count):
        assert len(enumerate_hypergraphs(n, r, m)) == count

    def test_multi(self):
        # on 3 vertices with 2 edges: a doubled edge or two distinct edges
        assert len(enumerate_hypergraphs(3, 2, 2, "multi")) == 2


class TestProbe:
    def test_five_five_four(self):
        rep = probe_conjecture(5, 5, 4)
        assert rep.confirmed
        assert rep.values == [3] * 3
        for p in rep.trees:
            assert p.result.extremal == [multi_blocks(5, 5, 4)]

    def test_regime_helper(self):
        assert in_open_regime(5, 4)
        assert not in_open_regime(6, 4)
        assert not in_open_regime(4, 4)

    def test_infinite_reported_as_counterexample(self):
        rep = probe_conjecture(3, 3, 3)
        assert not rep.confirmed
        assert all(p.verdict == "counterexample" for p in rep.trees)
        assert rep.trees[0].counterexample.edges == ((0, 1, 2),) * 3
