"""(k-1)-clusters: detection, degree audits with constructive embeddings,
cluster stripping and the bookkeeping inequalities of the density argument."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .berge import verify_embedding
from .hypermodel import (
    BergeEmbedding,
    Graph,
    MultiHypergraph,
    PreconditionError,
    Tree,
    degree_profile,
    incidence_graph,
)
from .trees import is_star, low_degree_internal_vertex


@dataclass(frozen=True)
class ClusterWitness:
    edge_indices: tuple[int, ...]
    core: frozenset[int]
    span: frozenset[int]


def _bits(mask: int) -> frozenset[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def make_cluster(H: MultiHypergraph, edge_indices) -> ClusterWitness:
    idx = tuple(sorted(edge_indices))
    core = -1
    span = 0
    for j in idx:
        core &= H.masks[j]
        span |= H.masks[j]
    return ClusterWitness(idx, _bits(core if idx else 0), _bits(span))


def is_cluster(H: MultiHypergraph, S: ClusterWitness, k: int) -> bool:
    return (
        len(S.edge_indices) == k - 1
        and len(set(S.edge_indices)) == k - 1
        and all(0 <= j < H.e for j in S.edge_indices)
        and make_cluster(H, S.edge_indices) == S
        and len(S.core) >= k - 1
    )


def find_clusters(H: MultiHypergraph, k: int, exhaustive: bool = False) -> list[ClusterWitness]:
    """(k-1)-clusters of ``H``.

    By default a maximal family of pairwise edge-disjoint clusters is grown
    greedily from intersecting edge pairs in ascending index order. With
    ``exhaustive=True`` every (k-1)-subset of edge instances whose common
    intersection has at least k-1 vertices is returned, overlapping or not.
    """
    if k < 2:
        raise PreconditionError(f"clusters need k >= 2, got {k}")
    need = k - 1
    masks = H.masks
    if exhaustive:
        out = []
        for idx in combinations(range(H.e), need):
            core = -1
            for j in idx:
                core &= masks[j]
            if core.bit_count() >= need:
                out.append(make_cluster(H, idx))
        return out
    used: set[int] = set()
    out = []
    if need == 1:
        return [make_cluster(H, (j,)) for j in range(H.e)]
    for i, j in combinations(range(H.e), 2):
        if i in used or j in used:
            continue
        core = masks[i] & masks[j]
        if core.bit_count() < need:
            continue
        members = [i, j]
        for l in range(H.e):
            if len(members) == need:
                break
            if l in used or l in members:
                continue
            if (core & masks[l]).bit_count() >= need:
                members.append(l)
                core &= masks[l]
        if len(members) == need:
            used.update(members)
            out.append(make_cluster(H, members))
    return out


def _check_audit_pre(H: MultiHypergraph, T: Tree, S: ClusterWitness):
    k = T.k
    if H.r < k + 1:
        raise PreconditionError(f"cluster audits need r >= k+1 = {k + 1}, got r={H.r}")
    if not is_cluster(H, S, k):
        raise PreconditionError(f"{S} is not a ({k - 1})-cluster of H")


def _core_embedding(H: MultiHypergraph, T: Tree, S: ClusterWitness, v: int) -> BergeEmbedding:
    """Core vertex ``v`` has degree >= k: embed T minus two leaves inside the
    core with ``v`` in the role of one leaf's neighbor, then hang the two
    leaves on the spare cluster edge and on an edge outside the cluster."""
    x, y = T.leaves()[:2]
    x_nb, y_nb = T.adjacency[x][0], T.adjacency[y][0]
    rest = [t for t in range(T.num_vertices) if t not in (x, y)]
    core_pool = [c for c in sorted(S.core) if c != v]
    vmap = {x_nb: v}
    for t in rest:
        if t != x_nb:
            vmap[t] = core_pool.pop(0)
    inner = [i for i, (a, b) in enumerate(T.edges) if x not in (a, b) and y not in (a, b)]
    emap = dict(zip(inner, S.edge_indices))
    spare = S.edge_indices[len(inner)]
    used = set(vmap.values())
    vmap[y] = min(w for w in H.edges[spare] if w not in used)
    used.add(vmap[y])
    emap[T.edge_index(y, y_nb)] = spare
    outside = min(j for j in H.edges_containing(v) if j not in S.edge_indices)
    vmap[x] = min(w for w in H.edges[outside] if w not in used)
    emap[T.edge_index(x, x_nb)] = outside
    return BergeEmbedding(tuple(vmap[t] for t in range(T.num_vertices)), tuple(emap[i] for i in range(T.k)))


def _span_embedding(H: MultiHypergraph, T: Tree, S: ClusterWitness, v: int) -> BergeEmbedding:
    """Span vertex ``v`` outside the core, with an edge outside the cluster
    and degree >= floor((k+1)/2): put the low-degree internal tree vertex on
    ``v``, its leaves on the edges through ``v`` and the rest of the tree in
    the core using unused cluster edges."""
    x, s = low_degree_internal_vertex(T)
    y = next(w for w in T.adjacency[x] if T.degree(w) > 1)
    leaves = [w for w in T.adjacency[x] if w != y]
    in_s = set(S.edge_indices)
    through_v = H.edges_containing(v)
    h1 = min(j for j in through_v if j not in in_s)
    h2 = min(j for j in through_v if j in in_s)
    others = sorted((j for j in through_v if j not in (h1, h2)), key=lambda j: (j in in_s, j))[: s - 2]
    core = S.core
    u = min(core)
    w = min(c for c in H.edges[h1] if c not in core and c != v)
    vmap = {x: v, y: u, leaves[0]: w}
    emap = {T.edge_index(x, y): h2, T.edge_index(x, leaves[0]): h1}
    used = {v, u, w}
    for leaf, j in zip(leaves[1:], others):
        pick = min((c for c in H.edges[j] if c not in used), key=lambda c: (c in core, c))
        vmap[leaf] = pick
        used.add(pick)
        emap[T.edge_index(x, leaf)] = j
    spare_core = [c for c in sorted(core) if c not in used]
    spare_edges = [j for j in S.edge_indices if j not in emap.values()]
    stack = [y]
    seen = {x, y}
    while stack:
        p = stack.pop()
        for c in T.adjacency[p]:
            if c in seen:
                continue
            seen.add(c)
            vmap[c] = spare_core.pop(0)
            emap[T.edge_index(p, c)] = spare_edges.pop(0)
            stack.append(c)
    return BergeEmbedding(tuple(vmap[t] for t in range(T.num_vertices)), tuple(emap[i] for i in range(T.k)))


def audit_cluster(H: MultiHypergraph, T: Tree, S: ClusterWitness) -> BergeEmbedding | None:
    """Check the degree constraints a Berge-``T``-free hypergraph imposes on
    a cluster. Core vertices must have degree exactly k-1; span vertices
    touching an edge outside the cluster must have degree at most
    floor((k-1)/2) (non-star ``T`` only). A violation is turned into an
    explicit embedding of ``T``; ``None`` means the cluster is clean."""
    _check_audit_pre(H, T, S)
    k = T.k
    deg = degree_profile(H)
    for v in sorted(S.core):
        if deg[v] >= k:
            emb = _core_embedding(H, T, S, v)
            assert verify_embedding(H, T, emb), (S, v, emb)
            return emb
    if is_star(T):
        return None
    in_s = set(S.edge_indices)
    for v in sorted(S.span - S.core):
        if deg[v] < (k + 1) // 2:
            continue
        if all(j in in_s for j in H.edges_containing(v)):
            continue
        emb = _span_embedding(H, T, S, v)
        assert verify_embedding(H, T, emb), (S, v, emb)
        return emb
    return None


class ClusterViolation(Exception):
    """Stripping aborted: a cluster audit produced an embedding."""

    def __init__(self, cluster: ClusterWitness, embedding: BergeEmbedding):
        super().__init__(f"cluster {cluster.edge_indices} violates the degree audit")
        self.cluster = cluster
        self.embedding = embedding


@dataclass(frozen=True)
class StripReport:
    """Bookkeeping of one cluster-removal pass.

    ``X[i]`` holds the vertices incident only with edges of cluster ``i``;
    ``Y`` the other vertices touching a cluster edge. The removed part of
    the incidence graph has ``removed_vertices = |X| + t(k-1) + |Y|`` nodes
    and ``removed_incidences = sum of d(v) over X and Y`` edges.
    """

    r: int
    k: int
    clusters: tuple[ClusterWitness, ...]
    X: tuple[frozenset[int], ...]
    Y: frozenset[int]
    a: int
    sum_deg_X: int
    sum_deg_Y: int
    removed_incidences: int
    removed_vertices: int
    remainder_graph: Graph = field(repr=False)
    remainder_vertices: tuple[int, ...] = field(repr=False)
    remainder_edges: tuple[int, ...] = field(repr=False)
    trimmed_edges: tuple[int, ...] = ()

    @property
    def t(self) -> int:
        return len(self.clusters)

    @property
    def X_all(self) -> frozenset[int]:
        return frozenset().union(*self.X) if self.X else frozenset()

    @property
    def rhs_multi(self) -> Fraction:
        """d(G)/2 at the multi-hypergraph threshold times the removed nodes."""
        return Fraction(self.r * (self.k - 1), self.r + self.k - 1) * self.removed_vertices

    @property
    def rhs_simple(self) -> Fraction:
        return Fraction(self.r * (self.k - 1), self.r + self.k) * self.removed_vertices


def build_strip_report(H: MultiHypergraph, k: int, clusters) -> tuple[MultiHypergraph, StripReport]:
    clusters = tuple(clusters)
    owner = {j: i for i, S in enumerate(clusters) for j in S.edge_indices}
    deg = degree_profile(H)
    incident: list[set[int]] = [set() for _ in range(H.n)]
    for j, e in enumerate(H.edges):
        for v in e:
            incident[v].add(j)
    X: list[set[int]] = [set() for _ in clusters]
    Y: set[int] = set()
    for v in range(H.n):
        if not incident[v]:
            continue
        owners = {owner.get(j) for j in incident[v]}
        if len(owners) == 1 and None not in owners:
            X[owners.pop()].add(v)
        elif owners - {None}:
            Y.add(v)
    gone = set().union(*X, Y) if clusters else set()
    G = incidence_graph(H).as_graph()
    G1 = G.without(list(gone) + [H.n + j for j in owner])
    keep_v = [v for v in range(H.n) if v not in gone]
    trimmed = tuple(j for j in range(H.e) if j not in owner and any(v in gone for v in H.edges[j]))
    kept_e = [j for j in range(H.e) if j not in owner and j not in trimmed]
    new_id = {v: i for i, v in enumerate(keep_v)}
    remainder = MultiHypergraph(len(keep_v), H.r, tuple(tuple(new_id[v] for v in H.edges[j]) for j in kept_e))
    sum_x = sum(deg[v] for part in X for v in part)
    sum_y = sum(deg[v] for v in Y)
    report = StripReport(
        r=H.r,
        k=k,
        clusters=clusters,
        X=tuple(frozenset(p) for p in X),
        Y=frozenset(Y),
        a=sum(1 for p in X if len(p) == H.r),
        sum_deg_X=sum_x,
        sum_deg_Y=sum_y,
        removed_incidences=G.num_edges() - G1.num_edges(),
        removed_vertices=len(gone) + len(owner),
        remainder_graph=G1,
        remainder_vertices=tuple(keep_v),
        remainder_edges=tuple(sorted(kept_e, key=lambda j: H.edges[j])),
        trimmed_edges=trimmed,
    )
    return remainder, report


def strip_clusters(H: MultiHypergraph, T: Tree) -> tuple[MultiHypergraph, StripReport]:
    """Audit and remove all greedily found (k-1)-clusters.

    The remainder keeps the edges that are neither cluster edges nor touch a
    removed vertex, on the surviving vertices renumbered in increasing
    order. Raises :class:`ClusterViolation` if an audit finds an embedding.
    """
    k = T.k
    if is_star(T):
        raise PreconditionError("stripping is defined for non-star trees")
    if H.r < k + 1:
        raise PreconditionError(f"stripping needs r >= k+1 = {k + 1}, got r={H.r}")
    clusters = find_clusters(H, k)
    for S in clusters:
        emb = audit_cluster(H, T, S)
        if emb is not None:
            raise ClusterViolation(S, emb)
    return build_strip_report(H, k, clusters)


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: Fraction
    rhs: Fraction
    applicable: bool = True

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def tight(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class InequalityAudit:
    mode: str
    checks: tuple[InequalityCheck, ...]
    y_empty: bool
    x_equals_tr: bool
    a: int

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks if c.applicable)

    def __bool__(self) -> bool:
        return self.holds

    def check(self, name: str) -> InequalityCheck:
        return next(c for c in self.checks if c.name == name)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "n/a" if not c.applicable else ("tight" if c.tight else ("ok" if c.holds else "FAILS"))
            out.append(f"{c.name}: {c.lhs} <= {c.rhs} [{status}]")
        return out


def audit_strip_inequalities(report: StripReport, n: int, r: int, k: int, mode: str) -> InequalityAudit:
    """Evaluate the density bookkeeping of a strip pass with exact integers.

    In simple mode the per-cluster bounds that assume every ``|X_i| <= r``
    are marked not applicable when some ``X_i`` is larger (that situation
    is handled by removing an (r+1)-set instead).
    """
    if mode not in ("simple", "multi"):
        raise ValueError(f"mode must be 'simple' or 'multi', got {mode!r}")
    if (report.r, report.k) != (r, k):
        raise ValueError(f"report was built for r={report.r}, k={report.k}")
    if report.removed_vertices - report.t * (k - 1) > n:
        raise ValueError("report removes more vertices than n")
    F = Fraction
    t, a = report.t, report.a
    sx, sy = F(report.sum_deg_X), F(report.sum_deg_Y)
    nx_, ny = len(report.X_all), len(report.Y)
    removed = sx + sy
    checks = []
    if mode == "multi":
        checks += [
            InequalityCheck("X degrees <= |X|(k-1)", sx, F(nx_ * (k - 1))),
            InequalityCheck("X degrees <= tr(k-1)", sx, F(t * r * (k - 1))),
            InequalityCheck("Y degrees <= (k-1)|Y|/2", sy, F((k - 1) * ny, 2)),
            InequalityCheck("(1) removed <= r(k-1)/(r+k-1) * removed nodes", removed, report.rhs_multi),
        ]
    else:
        small = all(len(p) <= r for p in report.X)
        checks += [
            InequalityCheck("(2) X degrees <= t(r-1)(k-1) + a", sx, F(t * (r - 1) * (k - 1) + a), small),
            InequalityCheck("(3) X degrees <= |X|(k-1) - a(k-2)", sx, F(nx_ * (k - 1) - a * (k - 2))),
            InequalityCheck("(4a) tr(k-1) <= removed", F(t * r * (k - 1)), removed),
            InequalityCheck(
                "(4b) removed <= t(r-1)(k-1) + a + (k-1)|Y|/2",
                removed,
                F(t * (r - 1) * (k - 1) + a) + F((k - 1) * ny, 2),
                small,
            ),
            InequalityCheck("(5) t(k-1) <= a + |Y|(k-1)/2", F(t * (k - 1)), a + F(ny * (k - 1), 2), small),
            InequalityCheck("(6) r * X degrees <= |X|r(k-1) - ar(k-2)", sx * r, F(nx_ * r * (k - 1) - a * r * (k - 2))),
            InequalityCheck("(7) k * X degrees <= t(r-1)k(k-1) + ak", sx * k, F(t * (r - 1) * k * (k - 1) + a * k), small),
            InequalityCheck("(8) (k+r) * Y degrees <= |Y|(k-1)(k+r)/2", sy * (k + r), F(ny * (k - 1) * (k + r), 2)),
            InequalityCheck("(9) removed <= r(k-1)/(r+k) * removed nodes", removed, report.rhs_simple),
        ]
    return InequalityAudit(
        mode=mode,
        checks=tuple(checks),
        y_empty=not report.Y,
        x_equals_tr=nx_ == t * r,
        a=a,
    )
