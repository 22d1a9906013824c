"""Incidence-graph reduction pipeline and the prove-or-embed driver.

The driver follows the density argument: audit and strip (k-1)-clusters,
peel the remaining incidence graph down to a dense part, read a reduced
sub-hypergraph off it and either extract a new cluster or an explicit
Berge embedding. When the constructive route dead-ends, a generic search
takes over, and that hand-off is always recorded in the trace.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .berge import find_berge_copy, verify_embedding
from .bounds import bound
from .clusters import ClusterWitness, audit_cluster, build_strip_report, find_clusters, make_cluster
from .hypermodel import (
    BergeEmbedding,
    Graph,
    IncidenceGraph,
    MultiHypergraph,
    PreconditionError,
    Tree,
    degree_profile,
)
from .trees import is_balanced_double_star, is_star, prefix_order


class TheoremViolation(RuntimeError):
    """Neither an embedding nor an extremal certificate exists where the
    theorems promise one. Must never fire."""


def _as_graph(G) -> Graph:
    return G.as_graph() if isinstance(G, IncidenceGraph) else G


def check_average_deletion(G, removed) -> bool:
    """Whether ``removed`` meets at most ``d(G)/2 * |removed|`` edges.

    When it does, deleting it cannot lower the average degree; that
    consequence is recomputed and asserted.
    """
    G = _as_graph(G)
    removed = set(removed)
    if not removed <= set(G.adj):
        raise ValueError("removed set must be a subset of the vertex set")
    if removed == set(G.adj):
        raise ValueError("cannot remove every vertex")
    d = G.average_degree()
    touching = sum(1 for u in G.adj for w in G.adj[u] if u < w and (u in removed or w in removed))
    ok = touching <= d / 2 * len(removed)
    if ok:
        rest = G.without(removed)
        if rest.average_degree() < d:
            raise AssertionError(f"average degree fell from {d} to {rest.average_degree()}")
    return ok


def min_degree_subgraph(G, threshold: Fraction | int | None = None) -> Graph | None:
    """Peel vertices of degree ``<= threshold`` (lowest id first) until none
    is left; the survivors induce a subgraph of minimum degree above the
    threshold. The default threshold is ``d(G)/2``, for which a nonempty
    graph always leaves a nonempty subgraph."""
    G = _as_graph(G)
    theta = G.average_degree() / 2 if threshold is None else Fraction(threshold)
    deg = {v: len(nb) for v, nb in G.adj.items()}
    alive = set(G.adj)
    heap = [v for v in G.adj if deg[v] <= theta]
    heapq.heapify(heap)
    while heap:
        v = heapq.heappop(heap)
        if v not in alive:
            continue
        alive.discard(v)
        for w in G.adj[v]:
            if w in alive:
                deg[w] -= 1
                if deg[w] <= theta:
                    heapq.heappush(heap, w)
    if not alive:
        return None
    return G.induced(alive)


@dataclass(frozen=True)
class ReducedSubhypergraph:
    """Edges ``edges[i]`` are subsets of host edge ``correspondence[i]``."""

    vertices: frozenset[int]
    edges: tuple[frozenset[int], ...]
    correspondence: tuple[int, ...]

    def degree(self, v: int) -> int:
        return sum(1 for h in self.edges if v in h)

    def is_valid_for(self, H: MultiHypergraph) -> bool:
        if len(set(self.correspondence)) != len(self.correspondence):
            return False
        return all(h <= self.vertices and h <= set(H.edges[j]) for h, j in zip(self.edges, self.correspondence))


def reduced_from_bipartite(H: MultiHypergraph, G2: Graph, k: int) -> ReducedSubhypergraph:
    """Read a reduced sub-hypergraph off a subgraph ``G2`` of the incidence
    graph (nodes ``< n`` are vertices, ``n + j`` is hyperedge ``j``): keep the
    vertex side ``A`` and replace each hyperedge ``h`` on the edge side by
    ``h & A``."""
    if G2 is None or G2.num_nodes() == 0:
        raise PreconditionError("the incidence subgraph is empty")
    if G2.min_degree() < k - 1:
        raise PreconditionError(f"incidence subgraph has minimum degree {G2.min_degree()} < k-1 = {k - 1}")
    A = frozenset(v for v in G2.adj if v < H.n)
    B = sorted(v - H.n for v in G2.adj if v >= H.n)
    edges = tuple(frozenset(H.edges[j]) & A for j in B)
    R = ReducedSubhypergraph(A, edges, tuple(B))
    assert all(len(h) >= k - 1 for h in edges) and all(R.degree(v) >= k - 1 for v in A)
    return R


def cluster_or_embed(H: MultiHypergraph, R: ReducedSubhypergraph, T: Tree) -> ClusterWitness | BergeEmbedding:
    """Either every reduced edge has all its vertices in the same reduced
    edges, which yields a (k-1)-cluster whose host correspondents form a
    cluster of ``H``, or some pair ``v1, v2`` in an edge ``h2`` is separated
    by an edge ``h3`` containing ``v2`` but not ``v1``; that configuration is
    grown into a Berge copy of ``T`` along a connected-prefix order."""
    k = T.k
    if is_star(T):
        raise PreconditionError("cluster_or_embed needs a non-star tree")
    if H.r < k + 1:
        raise PreconditionError(f"host edges must have size >= k+1 = {k + 1}, got r={H.r}")
    if not R.is_valid_for(H):
        raise PreconditionError("not a reduced sub-hypergraph of H")
    if not R.edges or any(len(h) < k - 1 for h in R.edges) or any(R.degree(v) < k - 1 for v in R.vertices):
        raise PreconditionError(f"reduced sub-hypergraph needs edge sizes and degrees >= k-1 = {k - 1}")
    inc = {v: [i for i, h in enumerate(R.edges) if v in h] for v in R.vertices}
    for h2, edge in enumerate(R.edges):
        verts = sorted(edge)
        for v1 in verts:
            for v2 in verts:
                if v1 == v2:
                    continue
                for h3 in inc[v2]:
                    if v1 not in R.edges[h3]:
                        emb = _divergence_embedding(H, R, T, inc, v1, v2, h2, h3)
                        assert verify_embedding(H, T, emb), emb
                        return emb
    v = min(R.edges[0])
    members = [R.correspondence[i] for i in inc[v][: k - 1]]
    S = make_cluster(H, members)
    assert len(S.core) >= k - 1
    return S


def _divergence_embedding(H, R, T, inc, v1, v2, h2, h3) -> BergeEmbedding:
    k = T.k
    P = prefix_order(T)
    x = P.order
    img = {x[1]: v1, x[2]: v2}
    used_v = {v1, v2}
    edge_of = {P.parent_edge[2]: h2, P.parent_edge[3]: h3}
    used_r = {h2, h3}
    img[x[3]] = min(R.edges[h3] - used_v)
    used_v.add(img[x[3]])
    for i in range(4, k + 1):
        pv = img[P.parent[i]]
        hi = min(j for j in inc[pv] if j not in used_r)
        used_r.add(hi)
        edge_of[P.parent_edge[i]] = hi
        pool = R.edges[hi] if i <= k - 1 else set(H.edges[R.correspondence[hi]])
        img[x[i]] = min(set(pool) - used_v)
        used_v.add(img[x[i]])
    h1 = min(j for j in inc[v1] if j not in used_r)
    edge_of[P.parent_edge[1]] = h1
    img[x[0]] = min(set(H.edges[R.correspondence[h1]]) - used_v)
    return BergeEmbedding(
        tuple(img[t] for t in range(T.num_vertices)),
        tuple(R.correspondence[edge_of[i]] for i in range(T.k)),
    )


@dataclass(frozen=True)
class CertificateComponent:
    """One piece of an extremal decomposition.

    ``kind`` is ``clique`` (an (r+1)-set carrying k-1 distinct edges),
    ``multi_block`` (one r-set with multiplicity k-1) or ``two_sided``
    (blocks of r-1 vertices of degree k-1 plus singletons of degree (k-1)/2).
    """

    kind: str
    vertices: tuple[int, ...]
    edge_indices: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...] = ()
    singles: tuple[int, ...] = ()


@dataclass(frozen=True)
class StructureCertificate:
    components: tuple[CertificateComponent, ...]
    residual: tuple[int, ...] = ()

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for c in self.components:
            out[c.kind] = out.get(c.kind, 0) + 1
        return out


def _two_sided_component(H, verts, eids, k) -> CertificateComponent | None:
    if k % 2 == 0:
        return None
    half = (k - 1) // 2
    deg = degree_profile(H)
    edges = [H.edges[j] for j in eids]
    if len(set(edges)) != len(edges):
        return None
    incident = {v: frozenset(j for j in eids if v in H.edges[j]) for v in verts}
    singles = {v for v in verts if deg[v] == half}
    blocky = {v for v in verts if deg[v] == k - 1}
    if singles | blocky != set(verts):
        return None
    blocks = set()
    for j in eids:
        e = set(H.edges[j])
        if len(e & singles) != 1:
            return None
        B = frozenset(e & blocky)
        if len(B) != H.r - 1 or len({incident[v] for v in B}) != 1:
            return None
        if {v for v in blocky if incident[v] == incident[next(iter(B))]} != B:
            return None
        blocks.add(B)
    t = len(blocks)
    if len(singles) != 2 * t or len(verts) != t * (H.r + 1) or len(eids) != t * (k - 1):
        return None
    return CertificateComponent(
        "two_sided",
        tuple(sorted(verts)),
        tuple(sorted(eids)),
        tuple(sorted(tuple(sorted(b)) for b in blocks)),
        tuple(sorted(singles)),
    )


def structure_certificate(H: MultiHypergraph, k: int, mode: str, allow_two_sided: bool = False) -> StructureCertificate | None:
    """Decompose ``H`` into extremal pieces, or return ``None``.

    Simple mode accepts cliques, plus two-sided components when
    ``allow_two_sided``; multi mode accepts multiplicity blocks. Every
    vertex must be covered (an isolated vertex spoils equality).
    """
    pieces = []
    for verts, eids in H.components():
        if not eids:
            return None
        edges = [H.edges[j] for j in eids]
        if mode == "multi":
            if len(verts) == H.r and len(eids) == k - 1 and len(set(edges)) == 1:
                pieces.append(CertificateComponent("multi_block", tuple(verts), tuple(eids)))
                continue
            return None
        if len(verts) == H.r + 1 and len(eids) == k - 1 and len(set(edges)) == len(edges):
            pieces.append(CertificateComponent("clique", tuple(verts), tuple(eids)))
            continue
        if allow_two_sided:
            piece = _two_sided_component(H, verts, eids, k)
            if piece is not None:
                pieces.append(piece)
                continue
        return None
    return StructureCertificate(tuple(pieces))


def revalidate_certificate(H: MultiHypergraph, k: int, cert: StructureCertificate) -> bool:
    """Independent re-check of a certificate's counts and regularity."""
    if cert.residual:
        return False
    seen_v: set[int] = set()
    seen_e: set[int] = set()
    deg = degree_profile(H)
    for c in cert.components:
        if seen_v & set(c.vertices) or seen_e & set(c.edge_indices):
            return False
        seen_v |= set(c.vertices)
        seen_e |= set(c.edge_indices)
        edges = [H.edges[j] for j in c.edge_indices]
        if any(not set(e) <= set(c.vertices) for e in edges):
            return False
        if c.kind == "clique":
            ok = len(c.vertices) == H.r + 1 and len(set(edges)) == len(edges) == k - 1
        elif c.kind == "multi_block":
            ok = len(c.vertices) == H.r and len(edges) == k - 1 and len(set(edges)) == 1
        elif c.kind == "two_sided":
            t = len(c.blocks)
            ok = (
                len(c.singles) == 2 * t
                and len(edges) == t * (k - 1)
                and all(len(b) == H.r - 1 for b in c.blocks)
                and all(deg[v] == k - 1 for b in c.blocks for v in b)
                and all(deg[s] == (k - 1) // 2 for s in c.singles)
                and all(sum(1 for s in c.singles if set(e) == {s, *b}) == 1 for e in edges for b in [next(b for b in c.blocks if set(b) <= set(e))])
            )
        else:
            ok = False
        if not ok:
            return False
    return seen_v == set(range(H.n)) and seen_e == set(range(H.e))


def find_sparse_set(H: MultiHypergraph, k: int, clusters=(), full_scan_limit: int = 16) -> tuple[int, ...] | None:
    """An (r+1)-set of vertices met by at most k-1 edges, searched among
    padded cluster-private sets and edge-plus-one-vertex sets, then by full
    scan when ``n <= full_scan_limit``."""
    r = H.r
    if H.n < r + 1:
        return None
    deg = degree_profile(H)
    masks = H.masks

    def sparse(U) -> bool:
        m = sum(1 << v for v in U)
        return sum(1 for em in masks if em & m) <= k - 1

    by_degree = sorted(range(H.n), key=lambda v: (deg[v], v))
    if clusters:
        _, report = build_strip_report(H, k, clusters)
        for part in report.X:
            if not part:
                continue
            base = sorted(part, key=lambda v: (deg[v], v))[: r + 1]
            U = set(base)
            for v in by_degree:
                if len(U) == r + 1:
                    break
                U.add(v)
            if sparse(U):
                return tuple(sorted(U))
    for e in sorted(set(H.edges)):
        for v in range(H.n):
            if v not in e and sparse(e + (v,)):
                return tuple(sorted(e + (v,)))
    if H.n <= full_scan_limit:
        for U in combinations(range(H.n), r + 1):
            if sparse(U):
                return U
    return None


def _lift_embedding(emb: BergeEmbedding, vids, eids) -> BergeEmbedding:
    return BergeEmbedding(tuple(vids[v] for v in emb.vertex_map), tuple(eids[j] for j in emb.edge_map))


def _lift_certificate(cert: StructureCertificate, vids, eids) -> StructureCertificate:
    comps = []
    for c in cert.components:
        comps.append(
            CertificateComponent(
                c.kind,
                tuple(vids[v] for v in c.vertices),
                tuple(sorted(eids[j] for j in c.edge_indices)),
                tuple(tuple(vids[v] for v in b) for b in c.blocks),
                tuple(vids[v] for v in c.singles),
            )
        )
    return StructureCertificate(tuple(comps))


class _Driver:
    def __init__(self, T: Tree, mode: str, trace: list[str], deadline: float | None):
        self.T = T
        self.k = T.k
        self.mode = mode
        self.trace = trace
        self.deadline = deadline
        self.two_sided_ok = mode == "simple" and is_balanced_double_star(T)

    def log(self, depth: int, msg: str):
        self.trace.append("  " * depth + msg)

    def solve(self, H: MultiHypergraph, depth: int = 0):
        k = self.k
        self.log(depth, f"solve n={H.n} r={H.r} e={H.e}")
        if H.n == 0:
            return StructureCertificate(())
        if H.r < k + 1:
            self.log(depth, f"r={H.r} < k+1={k + 1}: cluster claims unavailable, constructive route skipped")
            return None
        clusters = find_clusters(H, k)
        self.log(depth, f"greedy clusters: {[S.edge_indices for S in clusters]}")
        for S in clusters:
            emb = audit_cluster(H, self.T, S)
            if emb is not None:
                self.log(depth, f"cluster {S.edge_indices} fails the degree audit: embedding extracted")
                return emb
        if self.mode == "simple":
            U = find_sparse_set(H, k, clusters)
            if U is not None:
                self.log(depth, f"sparse (r+1)-set {U}: removing it and recursing")
                return self._split(H, U, depth)
        extra: list[ClusterWitness] = []
        for _ in range(H.e + 1):
            _, report = build_strip_report(H, k, clusters + extra)
            G1 = report.remainder_graph
            self.log(
                depth,
                f"stripped t={report.t} |X|={len(report.X_all)} |Y|={len(report.Y)} a={report.a}; "
                f"remainder has {G1.num_edges()} incidences",
            )
            if G1.num_edges() == 0:
                cert = structure_certificate(H, k, self.mode, self.two_sided_ok)
                self.log(depth, "remainder empty: " + ("extremal structure" if cert else "no extremal structure"))
                return cert
            theta = G1.average_degree() / 2
            G2 = min_degree_subgraph(G1, theta)
            if G2 is None or G2.min_degree() < k - 1:
                self.log(depth, f"peeling at d/2={theta} leaves min degree < k-1; peeling to the (k-1)-core")
                G2 = min_degree_subgraph(G1, k - 2)
            if G2 is None:
                self.log(depth, "no subgraph of minimum degree k-1 survives peeling")
                return None
            self.log(depth, f"peeled to {G2.num_nodes()} nodes with minimum degree {G2.min_degree()}")
            R = reduced_from_bipartite(H, G2, k)
            res = cluster_or_embed(H, R, self.T)
            if isinstance(res, BergeEmbedding):
                self.log(depth, "reduced sub-hypergraph has a separated pair: embedding extracted")
                return res
            self.log(depth, f"reduced sub-hypergraph yields a new cluster {res.edge_indices}")
            emb = audit_cluster(H, self.T, res)
            if emb is not None:
                self.log(depth, "new cluster fails the degree audit: embedding extracted")
                return emb
            extra.append(res)
        return None

    def _split(self, H: MultiHypergraph, U, depth: int):
        k = self.k
        Uset = set(U)
        touching = [j for j, e in enumerate(H.edges) if Uset & set(e)]
        inside = [j for j in touching if set(H.edges[j]) <= Uset]
        sub, vids, eids = H.induced(v for v in range(H.n) if v not in Uset)
        res = self.solve(sub, depth + 1)
        if isinstance(res, BergeEmbedding):
            return _lift_embedding(res, vids, eids)
        if res is None:
            return None
        if len(inside) == len(touching) == k - 1:
            piece = CertificateComponent("clique", tuple(sorted(U)), tuple(inside))
            lifted = _lift_certificate(res, vids, eids)
            self.log(depth, f"sparse set {tuple(sorted(U))} is a clique block")
            return StructureCertificate(tuple(sorted(lifted.components + (piece,), key=lambda c: c.vertices)))
        self.log(depth, "an edge leaves the sparse set; no extremal structure here")
        return None


def prove_or_embed(
    H: MultiHypergraph,
    T: Tree,
    mode: str,
    trace: list[str] | None = None,
    deadline: float | None = None,
) -> BergeEmbedding | StructureCertificate:
    """For ``H`` at or above the extremal bound, return a verified Berge
    embedding of ``T`` or, at equality, a certificate that ``H`` is one of
    the extremal hypergraphs. Raises :class:`TheoremViolation` if neither
    exists."""
    k = T.k
    if mode not in ("simple", "multi"):
        raise PreconditionError(f"mode must be 'simple' or 'multi', got {mode!r}")
    if is_star(T):
        raise PreconditionError("prove_or_embed needs a non-star tree")
    b = bound(H.n, H.r, k, mode)
    if H.e < b:
        raise PreconditionError(f"e(H)={H.e} is below the bound {b}")
    if mode == "simple" and not H.is_simple():
        raise PreconditionError("simple mode needs a hypergraph without repeated edges")
    log = trace if trace is not None else []
    driver = _Driver(T, mode, log, deadline)
    res = driver.solve(H)
    if isinstance(res, BergeEmbedding):
        if not verify_embedding(H, T, res):
            raise AssertionError(f"constructive embedding failed verification: {res}")
        log.append("result: embedding (constructive)")
        return res
    if isinstance(res, StructureCertificate) and H.e == b and revalidate_certificate(H, k, res):
        _confirm_free(H, T, res, log, deadline)
        log.append(f"result: extremal certificate {res.counts()}")
        return res
    log.append("constructive route inconclusive: fallback to generic search")
    emb = find_berge_copy(H, T, deadline)
    if emb is not None:
        log.append("result: embedding (generic search fallback)")
        return emb
    if H.e == b:
        cert = structure_certificate(H, k, mode, driver.two_sided_ok)
        if cert is not None and revalidate_certificate(H, k, cert):
            log.append(f"result: extremal certificate {cert.counts()}")
            return cert
    raise TheoremViolation(
        f"H (n={H.n}, r={H.r}, e={H.e}) is Berge-free for the {k}-edge tree {T.edges} "
        f"with e >= {b} but is not extremal"
    )


def _confirm_free(H, T, cert, log, deadline):
    if find_berge_copy(H, T, deadline) is not None:
        raise TheoremViolation(f"extremal structure {cert.counts()} contains a Berge copy of {T.edges}")
    log.append("certificate confirmed Berge-free by search")
