from fractions import Fraction

import pytest

from bergetrees.berge import find_berge_copy, verify_embedding
from bergetrees.bounds import bound
from bergetrees.constructions import (
    circulant_bipartite,
    disjoint_cliques,
    make_tree,
    multi_blocks,
    two_sided,
    two_sided_spec,
)
from bergetrees.hypermodel import PreconditionError
from bergetrees.trees import classify_tree, enumerate_trees, is_balanced_double_star, is_star, TreeKind


class TestDisjointCliques:
    def test_nine_eight_four(self):
        H = disjoint_cliques(9, 8, 4)
        assert H.e == 3 and all(max(e) <= 8 for e in H.edges)

    def test_eight_three_three(self):
        H = disjoint_cliques(8, 3, 3)
        assert H.e == 4
        assert sum(1 for e in H.edges if max(e) <= 3) == 2

    @pytest.mark.parametrize("args", [(10, 8, 4), (8, 3, 6), (8, 3, 1)])
    def test_errors(self, args):
        with pytest.raises(PreconditionError):
            disjoint_cliques(*args)

    @pytest.mark.parametrize("n,r,k", [(8, 3, 3), (18, 8, 4), (32, 15, 5), (9, 8, 4)])
    def test_meets_bound_and_is_simple(self, n, r, k):
        H = disjoint_cliques(n, r, k)
        assert H.is_simple()
        assert H.e == bound(n, r, k, "simple")


class TestMultiBlocks:
    def test_examples(self):
        assert multi_blocks(6, 3, 3).edges == ((0, 1, 2),) * 2 + ((3, 4, 5),) * 2
        assert multi_blocks(3, 3, 3).edges == ((0, 1, 2),) * 2

    def test_divisibility(self):
        with pytest.raises(PreconditionError):
            multi_blocks(4, 3, 3)

    @pytest.mark.parametrize("n,r,k", [(6, 3, 3), (12, 6, 4), (24, 12, 5)])
    def test_meets_bound(self, n, r, k):
        assert multi_blocks(n, r, k).e == bound(n, r, k, "multi")

    @pytest.mark.parametrize("n,r,k", [(6, 3, 3), (12, 6, 4), (10, 5, 4)])
    def test_free_for_every_tree(self, n, r, k):
        H = multi_blocks(n, r, k)
        assert all(find_berge_copy(H, T) is None for T in enumerate_trees(k))


class TestTwoSided:
    def test_default_two_blocks(self):
        spec = two_sided_spec(2, 15, 5)
        H = spec.hypergraph()
        assert (H.n, H.e) == (32, 8)
        assert H.e == bound(32, 15, 5, "simple") == Fraction(32 * 4, 16)
        assert H.is_simple()
        deg = H.degrees()
        for i in range(2):
            assert all(deg[v] == 4 for v in spec.block(i))
        assert all(deg[spec.singleton(j)] == 2 for j in range(4))
        for e in H.edges:
            singles = [v for v in e if v >= 28]
            assert len(singles) == 1

    def test_two_blocks_is_complete_bipartite(self):
        assert circulant_bipartite(2, 5) == ((0, 1),) * 4

    def test_one_block_infeasible(self):
        with pytest.raises(PreconditionError, match="distinct singletons"):
            two_sided(1, 15, 5)

    @pytest.mark.parametrize("args", [(2, 15, 4), (2, 14, 5), (2, 15, 1)])
    def test_errors(self, args):
        with pytest.raises(PreconditionError):
            two_sided(*args)

    def test_non_biregular_adjacency_rejected(self):
        with pytest.raises(PreconditionError):
            two_sided(2, 15, 5, ((0, 1), (0, 1), (0, 1), (0,)))
        with pytest.raises(PreconditionError):
            two_sided(3, 15, 5, ((0, 1),) * 6)

    @pytest.mark.parametrize(
        "t,bipartite",
        [
            (2, None),
            (3, None),
            (3, ((0, 1), (0, 1), (1, 2), (1, 2), (0, 2), (0, 2))),
            (4, None),
            (4, ((0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2), (0, 1), (2, 3))),
        ],
    )
    def test_free_for_double_star_across_structures(self, t, bipartite):
        H = two_sided(t, 15, 5, bipartite)
        assert H.e == bound(H.n, 15, 5, "simple")
        assert find_berge_copy(H, make_tree("balanced_double_star", 5)) is None

    def test_contains_every_other_non_star_tree(self):
        H = two_sided(2, 15, 5)
        for T in enumerate_trees(5):
            if is_star(T) or is_balanced_double_star(T):
                continue
            emb = find_berge_copy(H, T)
            assert emb is not None and verify_embedding(H, T, emb)


class TestMakeTree:
    def test_path(self):
        T = make_tree("path", 3)
        assert sorted(T.degrees) == [1, 1, 2, 2]

    def test_double_star(self):
        T = make_tree("balanced_double_star", 5)
        assert sorted(T.degrees) == [1, 1, 1, 1, 3, 3]
        assert classify_tree(T).kind is TreeKind.BALANCED_DOUBLE_STAR
        assert make_tree("dstar", 5) == T

    def test_star(self):
        assert sorted(make_tree("star", 4).degrees) == [1, 1, 1, 1, 4]

    @pytest.mark.parametrize("kind,k", [("balanced_double_star", 4), ("balanced_double_star", 1), ("spider", 4), ("path", 0)])
    def test_errors(self, kind, k):
        with pytest.raises(PreconditionError):
            make_tree(kind, k)
