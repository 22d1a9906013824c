"""Exhaustive Turán numbers for Berge trees at desk scale, extremal-family
checks and a probe for the multi-hypergraph tree conjecture."""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

import networkx as nx
from networkx.algorithms.isomorphism import categorical_node_match

from .berge import BudgetExceeded, find_berge_copy
from .bounds import RegimeError, bound, check_regime
from .hypermodel import MultiHypergraph, PreconditionError, Tree, degree_profile
from .reduction import structure_certificate
from .trees import canonical_code, enumerate_trees, is_balanced_double_star, is_star

__all__ = [
    "GuardExceeded",
    "TuranResult",
    "ExtremalReport",
    "ProbeReport",
    "bound",
    "brute_force_turan",
    "enumerate_hypergraphs",
    "verify_extremal",
    "probe_conjecture",
    "isomorphic",
]

INFINITE = math.inf


class GuardExceeded(PreconditionError):
    """Instance is larger than the exhaustive search allows."""


def _check_guard(n: int, r: int, max_n: int, max_candidates: int) -> None:
    if n > max_n:
        raise GuardExceeded(f"n={n} exceeds the exhaustive-search limit {max_n}")
    if comb(n, r) > max_candidates:
        raise GuardExceeded(f"C({n},{r})={comb(n, r)} candidate edges exceed the limit {max_candidates}")


def _incidence_nx(H: MultiHypergraph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from((("v", v) for v in range(H.n)), side=0)
    for j, e in enumerate(H.edges):
        G.add_node(("e", j), side=1)
        G.add_edges_from((("e", j), ("v", v)) for v in e)
    return G


def _invariant(H: MultiHypergraph) -> tuple:
    deg = degree_profile(H)
    mult = sorted(H.multiplicities().values())
    pair = Counter()
    for e in H.edges:
        for u, v in combinations(e, 2):
            pair[u, v] += 1
    vertex_sig = sorted((deg[v], sorted(c for (a, b), c in pair.items() if v in (a, b))) for v in range(H.n))
    return (H.e, tuple(mult), repr(vertex_sig))


_side = categorical_node_match("side", None)


def isomorphic(H1: MultiHypergraph, H2: MultiHypergraph) -> bool:
    if (H1.n, H1.r, H1.e) != (H2.n, H2.r, H2.e) or _invariant(H1) != _invariant(H2):
        return False
    return nx.is_isomorphic(_incidence_nx(H1), _incidence_nx(H2), node_match=_side)


class _IsoPool:
    """Keeps one representative per isomorphism class."""

    def __init__(self):
        self.buckets: dict[tuple, list[tuple[MultiHypergraph, nx.Graph]]] = {}
        self.items: list[MultiHypergraph] = []

    def add(self, H: MultiHypergraph) -> bool:
        key = _invariant(H)
        G = _incidence_nx(H)
        bucket = self.buckets.setdefault(key, [])
        for _, other in bucket:
            if nx.is_isomorphic(G, other, node_match=_side):
                return False
        bucket.append((H, G))
        self.items.append(H)
        return True


@dataclass
class TuranResult:
    value: int | float
    extremal: list[MultiHypergraph]
    n: int
    r: int
    k: int
    tree: Tree
    mode: str
    certified: bool = True
    free_hypergraphs: list[MultiHypergraph] = field(default_factory=list, repr=False)

    @property
    def infinite(self) -> bool:
        return self.value == INFINITE

    def line(self, tree_name: str | None = None) -> str:
        name = tree_name or canonical_code(self.tree)
        value = "inf" if self.infinite else str(self.value)
        return (
            f"n={self.n} r={self.r} k={self.k} tree={name} mode={self.mode} "
            f"value={value} extremal_classes={len(self.extremal)}"
        )


def _multiplicity_cap(r: int, k: int, T: Tree, deadline) -> int | None:
    """Largest useful multiplicity, or ``None`` when the value is infinite.

    k instances of one hyperedge are Berge-``T``-free exactly when ``T``
    does not fit on r vertices, and then any number of instances is free.
    Otherwise no free multi-hypergraph repeats an edge k times.
    """
    single = MultiHypergraph(r, r, (tuple(range(r)),) * k)
    if find_berge_copy(single, T, deadline) is None:
        return None
    return k - 1


def _extensions(H: MultiHypergraph, candidates, cap: int):
    mult = H.multiplicities()
    for c in candidates:
        if mult.get(c, 0) < cap:
            yield H.add_edges([c])


def brute_force_turan(
    n: int,
    r: int,
    k: int,
    T: Tree,
    mode: str = "simple",
    *,
    prune_isomorphs: bool = True,
    max_n: int = 10,
    max_candidates: int = 60,
    collect_free: bool = False,
    deadline: float | None = None,
) -> TuranResult:
    """Maximum number of edges of a Berge-``T``-free r-uniform (multi-)
    hypergraph on ``n`` vertices, with all extremal hypergraphs up to
    isomorphism.

    With isomorph pruning the search grows free hypergraphs one edge at a
    time, keeping one representative per class at each level; the last
    nonempty level is the answer and the empty level after it certifies
    that one more edge always forces a copy. Without pruning it is a plain
    lexicographic depth-first search over edge multisets.
    """
    if mode not in ("simple", "multi"):
        raise PreconditionError(f"mode must be 'simple' or 'multi', got {mode!r}")
    if T.k != k:
        raise PreconditionError(f"tree has {T.k} edges, expected k={k}")
    _check_guard(n, r, max_n, max_candidates)
    empty = MultiHypergraph(n, r, ())
    if n < r:
        return TuranResult(0, [empty], n, r, k, T, mode, free_hypergraphs=[empty] if collect_free else [])
    cap = 1
    if mode == "multi":
        cap = _multiplicity_cap(r, k, T, deadline)
        if cap is None:
            return TuranResult(INFINITE, [], n, r, k, T, mode)
    candidates = list(combinations(range(n), r))
    if prune_isomorphs:
        return _levelwise(n, r, k, T, mode, candidates, cap, collect_free, deadline)
    return _plain_dfs(n, r, k, T, mode, candidates, cap, collect_free, deadline)


def _expired(deadline):
    if deadline is not None and time.monotonic() > deadline:
        raise BudgetExceeded("exhaustive search budget exceeded")


def _levelwise(n, r, k, T, mode, candidates, cap, collect_free, deadline) -> TuranResult:
    level = [MultiHypergraph(n, r, ())]
    seen_free = list(level) if collect_free else []
    while True:
        pool = _IsoPool()
        for H in level:
            for H2 in _extensions(H, candidates, cap):
                _expired(deadline)
                if find_berge_copy(H2, T, deadline) is None:
                    pool.add(H2)
        if not pool.items:
            return TuranResult(level[0].e, level, n, r, k, T, mode, free_hypergraphs=seen_free)
        level = pool.items
        if collect_free:
            seen_free.extend(level)


def _plain_dfs(n, r, k, T, mode, candidates, cap, collect_free, deadline) -> TuranResult:
    best: list[MultiHypergraph] = []
    best_e = -1
    free: list[MultiHypergraph] = []

    def grow(edges: list, start: int):
        nonlocal best, best_e
        _expired(deadline)
        H = MultiHypergraph(n, r, tuple(edges))
        if collect_free:
            free.append(H)
        if H.e > best_e:
            best, best_e = [H], H.e
        elif H.e == best_e:
            best.append(H)
        for i in range(start, len(candidates)):
            c = candidates[i]
            if edges.count(c) >= cap:
                continue
            edges.append(c)
            if find_berge_copy(MultiHypergraph(n, r, tuple(edges)), T, deadline) is None:
                grow(edges, i)
            edges.pop()

    grow([], 0)
    pool = _IsoPool()
    for H in best:
        pool.add(H)
    return TuranResult(best_e, pool.items, n, r, k, T, mode, free_hypergraphs=free)


def enumerate_hypergraphs(n: int, r: int, m: int, mode: str = "simple", cap: int | None = None) -> list[MultiHypergraph]:
    """All r-uniform hypergraphs on ``n`` vertices with ``m`` edges, one per
    isomorphism class. ``cap`` bounds multiplicities in multi mode."""
    limit = 1 if mode == "simple" else (cap if cap is not None else m)
    candidates = list(combinations(range(n), r))
    level = [MultiHypergraph(n, r, ())]
    for _ in range(m):
        pool = _IsoPool()
        for H in level:
            for H2 in _extensions(H, candidates, limit):
                pool.add(H2)
        level = pool.items
    return level


@dataclass
class ExtremalReport:
    """Comparison of oracle extremal hypergraphs with the predicted family.

    ``applicable`` is false when no equality clause covers the instance
    (value below the bound, infinite value, regime not met, or a star in
    simple mode). Any outlier is a falsification alarm.
    """

    result: TuranResult
    bound: Fraction | None
    applicable: bool
    matches: list[MultiHypergraph]
    outliers: list[MultiHypergraph]
    reason: str = ""

    @property
    def ok(self) -> bool:
        return not self.outliers


def _matches_family(H: MultiHypergraph, T: Tree, mode: str) -> bool:
    k = T.k
    if mode == "multi" and is_star(T):
        return all(d == k - 1 for d in degree_profile(H))
    return structure_certificate(H, k, mode, allow_two_sided=mode == "simple" and is_balanced_double_star(T)) is not None


def verify_extremal(
    n: int,
    r: int,
    k: int,
    T: Tree,
    mode: str,
    result: TuranResult | None = None,
    **search_kwargs,
) -> ExtremalReport:
    if result is None:
        result = brute_force_turan(n, r, k, T, mode, **search_kwargs)
    try:
        b = bound(n, r, k, mode)
    except RegimeError as exc:
        return ExtremalReport(result, None, False, [], [], f"regime not met: {exc}")
    if result.infinite:
        return ExtremalReport(result, b, False, [], [], "value is infinite")
    if mode == "simple" and is_star(T):
        return ExtremalReport(result, b, False, [], [], "no equality clause for the star in simple mode")
    if result.value > b:
        return ExtremalReport(result, b, True, [], list(result.extremal), f"value {result.value} exceeds bound {b}")
    if result.value < b:
        return ExtremalReport(result, b, False, [], [], f"value {result.value} below bound {b}")
    matches = [H for H in result.extremal if _matches_family(H, T, mode)]
    outliers = [H for H in result.extremal if not _matches_family(H, T, mode)]
    return ExtremalReport(result, b, True, matches, outliers)


@dataclass
class TreeProbe:
    tree: Tree
    result: TuranResult
    verdict: str
    counterexample: MultiHypergraph | None = None
    note: str = ""


@dataclass
class ProbeReport:
    n: int
    r: int
    k: int
    threshold: Fraction
    trees: list[TreeProbe]

    @property
    def confirmed(self) -> bool:
        return all(p.verdict == "confirmed" for p in self.trees)

    @property
    def counterexamples(self) -> list[TreeProbe]:
        return [p for p in self.trees if p.verdict != "confirmed"]

    @property
    def values(self) -> list[int | float]:
        return [p.result.value for p in self.trees]


def probe_conjecture(n: int, r: int, k: int, **search_kwargs) -> ProbeReport:
    """Test the claim that every k-edge tree has multi-hypergraph Turán
    number at most n(k-1)/r, with equality only for multiplicity blocks
    (or (k-1)-regular hypergraphs for the star), against the exhaustive
    oracle. Outside the open regime ``k+1 <= r < (k-1)(k-2)`` it runs as a
    regression check."""
    threshold = Fraction(n * (k - 1), r)
    probes = []
    for T in enumerate_trees(k):
        res = brute_force_turan(n, r, k, T, "multi", **search_kwargs)
        if res.infinite:
            witness = MultiHypergraph(max(n, r), r, (tuple(range(r)),) * k)
            probes.append(TreeProbe(T, res, "counterexample", witness, "value is infinite"))
        elif res.value > threshold:
            probes.append(TreeProbe(T, res, "counterexample", res.extremal[0], f"value {res.value} > {threshold}"))
        elif res.value == threshold:
            bad = [H for H in res.extremal if not _matches_family(H, T, "multi")]
            if bad:
                probes.append(TreeProbe(T, res, "counterexample", bad[0], "extremal hypergraph outside the family"))
            else:
                probes.append(TreeProbe(T, res, "confirmed"))
        else:
            probes.append(TreeProbe(T, res, "confirmed"))
    return ProbeReport(n, r, k, threshold, probes)


def in_open_regime(r: int, k: int) -> bool:
    try:
        check_regime(r, k, "multi")
    except RegimeError:
        return r >= k + 1
    return False
