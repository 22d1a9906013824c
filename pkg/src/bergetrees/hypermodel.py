"""Core data model: uniform multi-hypergraphs, trees, incidence graphs and
Berge embeddings, together with their text formats."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class FormatError(ValueError):
    """Raised for malformed hypergraph, tree or embedding input."""


class PreconditionError(ValueError):
    """Raised when an operation is called outside its documented regime."""


def _content_lines(text: str | bytes) -> list[tuple[int, str]]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append((lineno, line))
    return out


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise FormatError(f"line {lineno}: expected integers, got {line!r}") from None


@dataclass(frozen=True)
class MultiHypergraph:
    """An r-uniform multi-hypergraph on vertices ``0..n-1``.

    Multiplicity is carried by repetition: two equal tuples in ``edges`` are
    two distinct edge instances. Instances are always kept normalized (each
    edge sorted, edge list sorted), so equal hypergraphs compare and
    serialize identically.
    """

    n: int
    r: int
    edges: tuple[tuple[int, ...], ...] = ()
    masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0 or self.r < 1:
            raise FormatError(f"need n >= 0 and r >= 1, got n={self.n}, r={self.r}")
        normalized = []
        for edge in self.edges:
            e = tuple(sorted(int(v) for v in edge))
            if len(e) != self.r:
                raise FormatError(f"edge {tuple(edge)} has {len(e)} vertices, expected r={self.r}")
            if len(set(e)) != len(e):
                raise FormatError(f"edge {tuple(edge)} repeats a vertex")
            if e and (e[0] < 0 or e[-1] >= self.n):
                raise FormatError(f"edge {tuple(edge)} has a vertex id outside 0..{self.n - 1}")
            normalized.append(e)
        normalized.sort()
        object.__setattr__(self, "edges", tuple(normalized))
        object.__setattr__(self, "masks", tuple(sum(1 << v for v in e) for e in normalized))

    @property
    def e(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        return degree_profile(self)

    def multiplicities(self) -> Counter:
        return Counter(self.edges)

    def is_simple(self) -> bool:
        return len(set(self.edges)) == len(self.edges)

    def add_edges(self, new_edges: Iterable[Sequence[int]]) -> MultiHypergraph:
        return MultiHypergraph(self.n, self.r, self.edges + tuple(tuple(e) for e in new_edges))

    def without_edges(self, indices: Iterable[int]) -> MultiHypergraph:
        drop = set(indices)
        return MultiHypergraph(self.n, self.r, tuple(e for i, e in enumerate(self.edges) if i not in drop))

    def edges_containing(self, v: int) -> list[int]:
        bit = 1 << v
        return [i for i, m in enumerate(self.masks) if m & bit]

    def components(self) -> list[tuple[list[int], list[int]]]:
        """Connected components as ``(vertices, edge indices)`` pairs.

        Isolated vertices form components without edges. Components are
        listed by their smallest vertex.
        """
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            root = find(e[0])
            for v in e[1:]:
                other = find(v)
                if other != root:
                    parent[other] = root
        groups: dict[int, tuple[list[int], list[int]]] = {}
        for v in range(self.n):
            groups.setdefault(find(v), ([], []))[0].append(v)
        for i, e in enumerate(self.edges):
            groups[find(e[0])][1].append(i)
        return sorted(groups.values(), key=lambda g: g[0][0])

    def induced(self, vertices: Iterable[int]) -> tuple[MultiHypergraph, list[int], list[int]]:
        """Sub-hypergraph induced by ``vertices`` with compacted ids.

        Returns ``(sub, vertex_ids, edge_ids)`` where ``vertex_ids[i]`` and
        ``edge_ids[j]`` are the host ids of the new vertex ``i`` and edge ``j``.
        """
        keep = sorted(set(vertices))
        new_id = {v: i for i, v in enumerate(keep)}
        kept = [(i, e) for i, e in enumerate(self.edges) if all(v in new_id for v in e)]
        # the constructor re-sorts edges, so the order is fixed up front
        relabeled = sorted(((tuple(new_id[v] for v in e), i) for i, e in kept))
        sub = MultiHypergraph(len(keep), self.r, tuple(e for e, _ in relabeled))
        return sub, keep, [i for _, i in relabeled]


def parse_hypergraph(text: str | bytes) -> MultiHypergraph:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("missing header line 'n r'")
    lineno, header = lines[0]
    head = _ints(header, lineno)
    if len(head) != 2:
        raise FormatError(f"line {lineno}: header must be 'n r', got {header!r}")
    n, r = head
    edges = []
    for lineno, line in lines[1:]:
        ids = _ints(line, lineno)
        if len(ids) != r:
            raise FormatError(f"line {lineno}: edge has {len(ids)} vertices, expected r={r}")
        if len(set(ids)) != r:
            raise FormatError(f"line {lineno}: duplicate vertex in edge {line!r}")
        if any(v < 0 or v >= n for v in ids):
            raise FormatError(f"line {lineno}: vertex id out of range 0..{n - 1}")
        edges.append(tuple(ids))
    return MultiHypergraph(n, r, tuple(edges))


def serialize_hypergraph(H: MultiHypergraph) -> str:
    lines = [f"{H.n} {H.r}"]
    lines.extend(" ".join(map(str, e)) for e in H.edges)
    return "\n".join(lines) + "\n"


def degree_profile(H: MultiHypergraph) -> list[int]:
    deg = [0] * H.n
    for e in H.edges:
        for v in e:
            deg[v] += 1
    return deg


@dataclass(frozen=True)
class Tree:
    """A tree with ``k`` edges on vertices ``0..k``."""

    k: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.k < 1:
            raise FormatError("a tree needs at least one edge")
        edges = tuple(sorted(tuple(sorted((int(u), int(v)))) for u, v in self.edges))
        if len(edges) != self.k:
            raise FormatError(f"expected {self.k} edges, got {len(edges)}")
        adj: list[list[int]] = [[] for _ in range(self.k + 1)]
        for u, v in edges:
            if u == v or u < 0 or v > self.k:
                raise FormatError(f"bad tree edge ({u}, {v}) for vertices 0..{self.k}")
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        # k+1 vertices, k edges and connected implies acyclic
        if len(seen) != self.k + 1 or len(set(edges)) != len(edges):
            raise FormatError("edges do not form a tree")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))

    @property
    def num_vertices(self) -> int:
        return self.k + 1

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def leaves(self) -> list[int]:
        return [v for v, a in enumerate(self.adjacency) if len(a) == 1]

    def edge_index(self, u: int, v: int) -> int:
        return self.edges.index((min(u, v), max(u, v)))


def parse_tree(text: str | bytes) -> Tree:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("missing tree header 'k'")
    lineno, header = lines[0]
    head = _ints(header, lineno)
    if len(head) != 1:
        raise FormatError(f"line {lineno}: tree header must be a single integer k")
    k = head[0]
    if k < 1:
        raise FormatError("tree must have k >= 1 edges")
    edges = []
    for lineno, line in lines[1:]:
        pair = _ints(line, lineno)
        if len(pair) != 2:
            raise FormatError(f"line {lineno}: expected 'u v'")
        edges.append(tuple(pair))
    return Tree(k, tuple(edges))


def serialize_tree(T: Tree) -> str:
    return "\n".join([str(T.k)] + [f"{u} {v}" for u, v in T.edges]) + "\n"


@dataclass(frozen=True)
class Graph:
    """A finite simple graph on integer node ids."""

    adj: Mapping[int, frozenset[int]]

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], nodes: Iterable[int] = ()) -> Graph:
        adj: dict[int, set[int]] = {v: set() for v in nodes}
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return cls({v: frozenset(nb) for v, nb in adj.items()})

    @property
    def nodes(self) -> list[int]:
        return sorted(self.adj)

    def num_nodes(self) -> int:
        return len(self.adj)

    def num_edges(self) -> int:
        return sum(len(nb) for nb in self.adj.values()) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def min_degree(self) -> int:
        return min((len(nb) for nb in self.adj.values()), default=0)

    def average_degree(self) -> Fraction:
        if not self.adj:
            return Fraction(0)
        return Fraction(2 * self.num_edges(), len(self.adj))

    def induced(self, nodes: Iterable[int]) -> Graph:
        keep = set(nodes) & set(self.adj)
        return Graph({v: frozenset(self.adj[v] & keep) for v in keep})

    def without(self, nodes: Iterable[int]) -> Graph:
        return self.induced(set(self.adj) - set(nodes))


@dataclass(frozen=True)
class IncidenceGraph:
    """Vertex/hyperedge incidence bipartite graph of a multi-hypergraph.

    Hypergraph vertex ``v`` is node ``v``; hyperedge instance ``j`` is node
    ``n + j`` in :meth:`as_graph`.
    """

    n: int
    left: tuple[int, ...]
    right: tuple[int, ...]
    adjacency: tuple[tuple[int, ...], ...]  # right index -> vertices

    @property
    def num_nodes(self) -> int:
        return len(self.left) + len(self.right)

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency)

    def average_degree(self) -> Fraction:
        if self.num_nodes == 0:
            return Fraction(0)
        return Fraction(2 * self.num_edges, self.num_nodes)

    def as_graph(self) -> Graph:
        pairs = [(v, self.n + j) for j, verts in zip(self.right, self.adjacency) for v in verts]
        return Graph.from_edges(pairs, nodes=list(self.left) + [self.n + j for j in self.right])


def incidence_graph(H: MultiHypergraph) -> IncidenceGraph:
    return IncidenceGraph(
        n=H.n,
        left=tuple(range(H.n)),
        right=tuple(range(H.e)),
        adjacency=tuple(H.edges),
    )


@dataclass(frozen=True)
class BergeEmbedding:
    """Witness of a Berge copy: ``vertex_map[t]`` is the image of tree vertex
    ``t`` and ``edge_map[i]`` the hyperedge instance assigned to ``T.edges[i]``."""

    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]


def serialize_embedding(emb: BergeEmbedding) -> str:
    vmap = " ".join(f"{t}→{h}" for t, h in enumerate(emb.vertex_map))
    emap = " ".join(f"{i}→{j}" for i, j in enumerate(emb.edge_map))
    return f"vmap: {vmap}\nemap: {emap}\n"


def parse_embedding(text: str | bytes) -> BergeEmbedding:
    maps: dict[str, list[int]] = {}
    for lineno, line in _content_lines(text):
        tag, _, rest = line.partition(":")
        if tag not in ("vmap", "emap"):
            raise FormatError(f"line {lineno}: expected 'vmap:' or 'emap:'")
        pairs = []
        for tok in rest.split():
            src, sep, dst = tok.partition("→")
            if not sep:
                raise FormatError(f"line {lineno}: bad pair {tok!r}")
            pairs.append((int(src), int(dst)))
        if [s for s, _ in pairs] != list(range(len(pairs))):
            raise FormatError(f"line {lineno}: pairs must be listed in index order")
        maps[tag] = [d for _, d in pairs]
    if set(maps) != {"vmap", "emap"}:
        raise FormatError("embedding needs both 'vmap:' and 'emap:' lines")
    return BergeEmbedding(tuple(maps["vmap"]), tuple(maps["emap"]))
