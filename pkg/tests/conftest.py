from __future__ import annotations

from itertools import combinations, permutations

import networkx as nx
import pytest
from hypothesis import strategies as st

from bergetrees.hypermodel import MultiHypergraph, Tree


def naive_has_copy(H: MultiHypergraph, T: Tree) -> bool:
    """Reference Berge test: try every injective vertex placement and ask
    networkx for a perfect matching of tree edges to containing hyperedges."""
    if T.num_vertices > H.n or T.k > H.e:
        return False
    for placement in permutations(range(H.n), T.num_vertices):
        B = nx.Graph()
        left = [("t", i) for i in range(T.k)]
        B.add_nodes_from(left)
        for i, (u, v) in enumerate(T.edges):
            a, b = placement[u], placement[v]
            for j, e in enumerate(H.edges):
                if a in e and b in e:
                    B.add_edge(("t", i), ("h", j))
        if any(B.degree(x) == 0 for x in left):
            continue
        M = nx.bipartite.hopcroft_karp_matching(B, top_nodes=left)
        if all(x in M for x in left):
            return True
    return False


@st.composite
def hypergraphs(draw, max_n=6, rs=(2, 3), max_e=6, multi=False):
    r = draw(st.sampled_from(rs))
    n = draw(st.integers(min_value=r, max_value=max_n))
    pool = list(combinations(range(n), r))
    if multi:
        edges = draw(st.lists(st.sampled_from(pool), max_size=max_e))
    else:
        edges = draw(st.lists(st.sampled_from(pool), max_size=min(max_e, len(pool)), unique=True))
    return MultiHypergraph(n, r, tuple(edges))


def pytest_configure(config):
    config._acceptance = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=lambda s: (int(s.split()[0]) if s.split()[0].isdigit() else 99, s)):
        ok, detail = results[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def record(request):
    """Store one pass/fail line for an acceptance criterion and echo it."""

    def _record(key: str, ok: bool, detail: str = ""):
        request.config._acceptance[key] = (ok, detail)
        print(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")

    return _record
