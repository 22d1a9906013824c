"""Catalog of k-edge trees: enumeration up to isomorphism, canonical
labeling, classification and the structural facts about trees the
embedding constructions rely on."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .hypermodel import PreconditionError, Tree

MAX_K = 10


class TreeKind(str, Enum):
    STAR = "star"
    BALANCED_DOUBLE_STAR = "balanced_double_star"
    PATH = "path"
    OTHER = "other"


@dataclass(frozen=True)
class TreeClass:
    kind: TreeKind
    k: int


@dataclass(frozen=True)
class PrefixOrder:
    """Vertex order ``x_0..x_k`` whose prefixes induce subtrees.

    ``parent[i]`` is the unique earlier neighbor of ``x_i`` and
    ``parent_edge[i]`` the index in ``T.edges`` of the edge joining them
    (both ``None`` for ``i = 0``).
    """

    order: tuple[int, ...]
    parent: tuple[int | None, ...]
    parent_edge: tuple[int | None, ...]


def _centroids(adj) -> list[int]:
    n = len(adj)
    parent = [-1] * n
    parent[0] = 0
    order = [0]
    for v in order:
        for w in adj[v]:
            if parent[w] == -1:
                parent[w] = v
                order.append(w)
    size = [1] * n
    for v in reversed(order[1:]):
        size[parent[v]] += size[v]
    heaviest = []
    for v in range(n):
        branches = [size[w] for w in adj[v] if parent[w] == v and w != v]
        branches.append(n - size[v])
        heaviest.append(max(branches))
    best = min(heaviest)
    return [v for v in range(n) if heaviest[v] == best]


def _encode(adj, root: int) -> str:
    """AHU parenthesis code of the tree rooted at ``root``."""
    codes: dict[int, str] = {}
    parent = {root: None}
    order = [root]
    for v in order:
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
    for v in reversed(order):
        kids = sorted(codes[w] for w in adj[v] if parent.get(w) == v and w != root)
        codes[v] = "(" + "".join(kids) + ")"
    return codes[root]


def canonical_code(T: Tree) -> str:
    return min(_encode(T.adjacency, c) for c in _centroids(T.adjacency))


def canonical_form(T: Tree) -> Tree:
    """Relabel ``T`` canonically: root at the centroid giving the smallest
    code, then number vertices in preorder with children visited in code
    order. Isomorphic trees map to identical ``Tree`` values."""
    adj = T.adjacency
    root = min(_centroids(adj), key=lambda c: (_encode(adj, c), c))
    parent = {root: None}
    order = [root]
    for v in order:
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
    codes: dict[int, str] = {}
    for v in reversed(order):
        codes[v] = "(" + "".join(sorted(codes[w] for w in adj[v] if parent.get(w) == v)) + ")"
    label: dict[int, int] = {}
    stack = [root]
    while stack:
        v = stack.pop()
        label[v] = len(label)
        kids = sorted((w for w in adj[v] if parent.get(w) == v), key=lambda w: codes[w])
        stack.extend(reversed(kids))
    return Tree(T.k, tuple((label[u], label[v]) for u, v in T.edges))


def enumerate_trees(k: int) -> list[Tree]:
    """One canonically labeled representative per isomorphism class of trees
    with ``k`` edges, ordered by maximum degree and then canonical code
    (the path comes first, the star last)."""
    if not 1 <= k <= MAX_K:
        raise PreconditionError(f"enumerate_trees supports 1 <= k <= {MAX_K}, got {k}")
    layer = {canonical_code(t): t for t in [Tree(1, ((0, 1),))]}
    for size in range(2, k + 1):
        grown: dict[str, Tree] = {}
        for t in layer.values():
            for v in range(t.num_vertices):
                bigger = canonical_form(Tree(size, t.edges + ((v, size),)))
                grown.setdefault(canonical_code(bigger), bigger)
        layer = grown
    return sorted(layer.values(), key=lambda t: (max(t.degrees), canonical_code(t)))


def is_star(T: Tree) -> bool:
    return max(T.degrees) == T.k


def is_path(T: Tree) -> bool:
    return max(T.degrees) <= 2


def is_balanced_double_star(T: Tree) -> bool:
    if T.k < 3 or T.k % 2 == 0:
        return False
    half = (T.k - 1) // 2
    for u, v in T.edges:
        if T.degree(u) == T.degree(v) == half + 1:
            others = [w for w in range(T.num_vertices) if w not in (u, v)]
            if all(T.degree(w) == 1 for w in others):
                return True
    return False


def classify_tree(T: Tree) -> TreeClass:
    # For k <= 2 the path is also a star, and for k = 3 the path is also the
    # balanced double star; star beats path beats double star. Callers that
    # care about the double-star role use is_balanced_double_star directly.
    if is_star(T):
        kind = TreeKind.STAR
    elif is_path(T):
        kind = TreeKind.PATH
    elif is_balanced_double_star(T):
        kind = TreeKind.BALANCED_DOUBLE_STAR
    else:
        kind = TreeKind.OTHER
    return TreeClass(kind, T.k)


def low_degree_internal_vertex(T: Tree) -> tuple[int, int]:
    """An internal vertex of degree ``s <= floor((k+1)/2)`` all of whose
    neighbors but one are leaves. Returns ``(vertex, s)``; the smallest
    qualifying vertex id wins."""
    if is_star(T):
        raise PreconditionError("tree is a star; no such vertex is guaranteed")
    bound = (T.k + 1) // 2
    deg = T.degrees
    for v in range(T.num_vertices):
        if deg[v] < 2 or deg[v] > bound:
            continue
        if sum(1 for w in T.adjacency[v] if deg[w] > 1) == 1:
            return v, deg[v]
    raise AssertionError(f"no low-degree internal vertex in non-star tree {T.edges}")


def prefix_order(T: Tree) -> PrefixOrder:
    """Connected-prefix order starting with a leaf-anchored path of length 3.

    The lexicographically smallest path ``x_0 x_1 x_2 x_3`` with ``x_0`` a
    leaf is used; the remaining vertices follow by repeatedly taking the
    smallest vertex adjacent to the placed set.
    """
    if is_star(T):
        raise PreconditionError("a star has no path of length 3")
    adj = T.adjacency
    start = None
    for x0 in T.leaves():
        x1 = adj[x0][0]
        for x2 in adj[x1]:
            if x2 == x0:
                continue
            for x3 in adj[x2]:
                if x3 != x1:
                    start = (x0, x1, x2, x3)
                    break
            if start:
                break
        if start:
            break
    assert start is not None
    order = list(start)
    placed = set(order)
    parent: dict[int, int | None] = {start[0]: None, start[1]: start[0], start[2]: start[1], start[3]: start[2]}
    while len(order) < T.num_vertices:
        nxt = min(w for v in order for w in adj[v] if w not in placed)
        parent[nxt] = next(v for v in adj[nxt] if v in placed)
        order.append(nxt)
        placed.add(nxt)
    parents = tuple(parent[v] for v in order)
    edges = tuple(None if p is None else T.edge_index(v, p) for v, p in zip(order, parents))
    return PrefixOrder(tuple(order), parents, edges)
