import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergetrees.berge import find_berge_copy, verify_embedding
from bergetrees.clusters import (
    ClusterViolation,
    ClusterWitness,
    audit_cluster,
    audit_strip_inequalities,
    build_strip_report,
    find_clusters,
    is_cluster,
    make_cluster,
    strip_clusters,
)
from bergetrees.constructions import disjoint_cliques, make_tree, multi_blocks, two_sided
from bergetrees.hypermodel import MultiHypergraph, PreconditionError
from bergetrees.trees import enumerate_trees, is_star

P4 = make_tree("path", 4)


def non_star_trees(k):
    return [T for T in enumerate_trees(k) if not is_star(T)]


class TestFindClusters:
    def test_clique_block(self):
        H = disjoint_cliques(9, 8, 4)
        (S,) = find_clusters(H, 4)
        assert S.edge_indices == (0, 1, 2)
        assert S.core == frozenset(range(6))
        assert S.span == frozenset(range(9))

    def test_multiplicity_block(self):
        clusters = find_clusters(multi_blocks(12, 6, 4), 4)
        assert [S.edge_indices for S in clusters] == [(0, 1, 2), (3, 4, 5)]
        assert all(S.core == S.span for S in clusters)

    def test_two_edges_per_vertex_is_not_enough(self):
        H = MultiHypergraph(6, 3, ((0, 1, 2), (0, 1, 3), (2, 4, 5)))
        assert find_clusters(H, 4) == []

    def test_k2_every_edge(self):
        H = MultiHypergraph(4, 2, ((0, 1), (2, 3)))
        assert len(find_clusters(H, 2)) == 2

    def test_exhaustive_finds_overlapping(self):
        H = MultiHypergraph(5, 4, ((0, 1, 2, 3),) * 3)
        assert len(find_clusters(H, 3)) == 1
        assert len(find_clusters(H, 3, exhaustive=True)) == 3

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=40, deadline=None)
    def test_greedy_clusters_valid_and_disjoint(self, seed):
        rnd = random.Random(seed)
        n, r, k = 8, 5, 3
        pool = list(combinations(range(n), r))
        H = MultiHypergraph(n, r, tuple(rnd.choice(pool) for _ in range(rnd.randint(0, 8))))
        found = find_clusters(H, k)
        used = [j for S in found for j in S.edge_indices]
        assert len(used) == len(set(used))
        assert all(is_cluster(H, S, k) for S in found)
        assert set(find_clusters(H, k, exhaustive=True)) >= set(found)


class TestAudit:
    @pytest.mark.parametrize(
        "H,k",
        [(multi_blocks(8, 4, 3), 3), (multi_blocks(12, 6, 4), 4), (disjoint_cliques(18, 8, 4), 4), (two_sided(2, 15, 5), 5)],
        ids=["blocks-8-4-3", "blocks-12-6-4", "cliques-18-8-4", "two-sided"],
    )
    def test_free_hypergraphs_are_clean(self, H, k):
        for T in enumerate_trees(k):
            if find_berge_copy(H, T) is not None:
                continue
            for S in find_clusters(H, k, exhaustive=True):
                assert audit_cluster(H, T, S) is None

    def test_small_r_rejected(self):
        H = multi_blocks(6, 3, 3)
        (S, _) = find_clusters(H, 3)
        with pytest.raises(PreconditionError):
            audit_cluster(H, make_tree("path", 3), S)

    def test_not_a_cluster_rejected(self):
        H = disjoint_cliques(9, 8, 4)
        with pytest.raises(PreconditionError):
            audit_cluster(H, P4, make_cluster(H, (0, 1)))
        with pytest.raises(PreconditionError):
            audit_cluster(H, P4, ClusterWitness((0, 1, 2), frozenset({0}), frozenset(range(9))))

    def test_core_vertex_of_high_degree(self):
        H = disjoint_cliques(18, 8, 4).add_edges([(0, 9, 10, 11, 12, 13, 14, 15)])
        S = find_clusters(H, 4)[0]
        assert 0 in S.core
        for T in non_star_trees(4) + [make_tree("star", 4)]:
            emb = audit_cluster(H, T, S)
            assert emb is not None and verify_embedding(H, T, emb)

    def test_span_vertex_with_outside_edge(self):
        H = disjoint_cliques(18, 8, 4).add_edges([(6, 9, 10, 11, 12, 13, 14, 15)])
        S = next(S for S in find_clusters(H, 4) if 6 in S.span)
        assert 6 not in S.core
        for T in non_star_trees(4):
            emb = audit_cluster(H, T, S)
            assert emb is not None and verify_embedding(H, T, emb)
        assert audit_cluster(H, make_tree("star", 4), S) is None

    @pytest.mark.parametrize("seed", range(25))
    def test_perturbed_instances_yield_verified_embeddings(self, seed):
        rnd = random.Random(seed)
        base = rnd.choice([disjoint_cliques(18, 8, 4), multi_blocks(12, 6, 4), disjoint_cliques(20, 9, 4)])
        pool = list(combinations(range(base.n), base.r))
        H = base.add_edges(rnd.sample(pool, rnd.randint(1, 2)))
        T = rnd.choice(non_star_trees(4))
        for S in find_clusters(H, 4, exhaustive=True)[:30]:
            emb = audit_cluster(H, T, S)
            if emb is not None:
                assert verify_embedding(H, T, emb)


class TestStrip:
    def test_cliques(self):
        H = disjoint_cliques(18, 8, 4)
        rest, report = strip_clusters(H, P4)
        assert rest.n == 0 and rest.e == 0
        assert report.t == 2 and report.Y == frozenset()
        assert [len(x) for x in report.X] == [9, 9]
        assert report.a == 0
        assert report.removed_vertices == 18 + 6
        assert report.removed_incidences == 6 * 8

    def test_remainder_keeps_untouched_edges(self):
        # bookkeeping only: vertex 8 would fail the degree audit
        extra = ((9, 10, 11, 12, 13, 14, 15, 16), (8, 17, 18, 19, 9, 10, 11, 12))
        H = MultiHypergraph(20, 8, disjoint_cliques(9, 8, 4).edges + extra)
        rest, report = build_strip_report(H, 4, find_clusters(H, 4))
        assert report.t == 1
        assert 8 in report.Y
        assert report.trimmed_edges == (3,)
        assert len(report.X_all) == 8
        assert rest.n == 20 - 9 and rest.e == 1
        assert report.remainder_graph.num_edges() == 8 + 7

    def test_violation_raised(self):
        H = disjoint_cliques(18, 8, 4).add_edges([(0, 9, 10, 11, 12, 13, 14, 15)])
        with pytest.raises(ClusterViolation) as info:
            strip_clusters(H, P4)
        assert verify_embedding(H, P4, info.value.embedding)

    def test_star_rejected(self):
        with pytest.raises(PreconditionError):
            strip_clusters(disjoint_cliques(9, 8, 4), make_tree("star", 4))


class TestInequalities:
    @pytest.mark.parametrize("n,r,k", [(8, 4, 3), (12, 6, 4), (24, 12, 5), (10, 5, 4)])
    def test_multi_blocks_tight(self, n, r, k):
        H = multi_blocks(n, r, k)
        _, report = strip_clusters(H, make_tree("path", k))
        audit = audit_strip_inequalities(report, n, r, k, "multi")
        assert audit.holds
        assert audit.y_empty and audit.x_equals_tr
        assert audit.check("(1) removed <= r(k-1)/(r+k-1) * removed nodes").tight

    @pytest.mark.parametrize("n,r,k", [(18, 8, 4), (9, 8, 4), (32, 15, 5), (10, 4, 3)])
    def test_disjoint_cliques(self, n, r, k):
        H = disjoint_cliques(n, r, k)
        _, report = strip_clusters(H, make_tree("path", k))
        audit = audit_strip_inequalities(report, n, r, k, "simple")
        assert audit.holds and audit.a == 0
        nine = audit.check("(9) removed <= r(k-1)/(r+k) * removed nodes")
        assert nine.applicable and nine.tight
        assert not audit.check("(2) X degrees <= t(r-1)(k-1) + a").applicable

    def test_two_sided_has_nonempty_y(self):
        H = two_sided(2, 15, 5)
        _, report = strip_clusters(H, make_tree("path", 5))
        audit = audit_strip_inequalities(report, H.n, 15, 5, "simple")
        assert audit.holds and not audit.y_empty
        assert all(c.applicable for c in audit.checks)

    def test_bad_mode(self):
        _, report = strip_clusters(disjoint_cliques(9, 8, 4), P4)
        with pytest.raises(ValueError):
            audit_strip_inequalities(report, 9, 8, 4, "weird")
        with pytest.raises(ValueError):
            audit_strip_inequalities(report, 9, 8, 3, "simple")

    def test_lines_render(self):
        _, report = build_strip_report(multi_blocks(8, 4, 3), 3, find_clusters(multi_blocks(8, 4, 3), 3))
        lines = audit_strip_inequalities(report, 8, 4, 3, "multi").lines()
        assert len(lines) == 4 and lines[-1].endswith("[tight]")
