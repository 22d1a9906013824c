"""Exact search for Berge copies of trees in uniform multi-hypergraphs."""

from __future__ import annotations

import time

from .hypermodel import BergeEmbedding, MultiHypergraph, Tree


class BudgetExceeded(RuntimeError):
    """The search ran past its wall-clock deadline."""


class EmbeddingIndexError(IndexError):
    """An embedding refers to a vertex or edge that does not exist."""


def verify_embedding(H: MultiHypergraph, T: Tree, emb: BergeEmbedding) -> bool:
    """Check ``emb`` against the Berge-copy definition.

    Returns ``False`` for a logically invalid witness and raises
    :class:`EmbeddingIndexError` when the witness does not even fit ``H``/``T``.
    """
    if len(emb.vertex_map) != T.num_vertices or len(emb.edge_map) != T.k:
        raise EmbeddingIndexError(
            f"embedding shape ({len(emb.vertex_map)}, {len(emb.edge_map)}) "
            f"does not match tree with {T.num_vertices} vertices and {T.k} edges"
        )
    for v in emb.vertex_map:
        if not 0 <= v < H.n:
            raise EmbeddingIndexError(f"vertex {v} outside 0..{H.n - 1}")
    for j in emb.edge_map:
        if not 0 <= j < H.e:
            raise EmbeddingIndexError(f"edge index {j} outside 0..{H.e - 1}")
    if len(set(emb.vertex_map)) != len(emb.vertex_map):
        return False
    if len(set(emb.edge_map)) != len(emb.edge_map):
        return False
    for (u, v), j in zip(T.edges, emb.edge_map):
        need = (1 << emb.vertex_map[u]) | (1 << emb.vertex_map[v])
        if H.masks[j] & need != need:
            return False
    return True


def _max_matching(candidates: list[list[int]]) -> tuple[int, list[int]]:
    """Kuhn's augmenting-path matching. ``candidates[i]`` lists the right
    nodes left node ``i`` may take; returns (size, match_of_left)."""
    owner: dict[int, int] = {}
    match = [-1] * len(candidates)

    def augment(i, seen):
        for j in candidates[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in owner or augment(owner[j], seen):
                owner[j] = i
                match[i] = j
                return True
        return False

    size = 0
    for i in range(len(candidates)):
        if augment(i, set()):
            size += 1
    return size, match


class BergeSearch:
    """Backtracking search for one Berge copy of ``T`` in ``H``.

    Tree edges are embedded in BFS order from a maximum-degree root. Each
    step picks the hyperedge for the next tree edge and, for internal tree
    vertices, its image. Leaf images are deferred: once every internal
    vertex is placed they only need distinct unused vertices from their
    hyperedges, which is a bipartite matching. Before each descent the
    unassigned tree edges must still be matchable to unused hyperedges.
    """

    def __init__(self, H: MultiHypergraph, T: Tree, deadline: float | None = None):
        self.H = H
        self.T = T
        self.deadline = deadline
        self.nodes = 0
        tdeg = T.degrees
        self.tdeg = tdeg
        self.hdeg = H.degrees()
        root = max(range(T.num_vertices), key=lambda v: (tdeg[v], -v))
        self.root = root
        # BFS; per parent, internal children first so sibling leaves are adjacent
        steps: list[tuple[int, int, int]] = []
        seen = {root}
        queue = [root]
        for p in queue:
            kids = [w for w in T.adjacency[p] if w not in seen]
            kids.sort(key=lambda w: (tdeg[w] == 1, w))
            for c in kids:
                seen.add(c)
                queue.append(c)
                steps.append((p, c, T.edge_index(p, c)))
        self.steps = steps
        self.is_leaf = [tdeg[v] == 1 and v != root for v in range(T.num_vertices)]
        # identical edge instances are contiguous after normalization
        self.same_as_prev = [j > 0 and H.edges[j] == H.edges[j - 1] for j in range(H.e)]

    def _tick(self):
        self.nodes += 1
        if self.deadline is not None and self.nodes % 512 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("Berge search budget exceeded")

    def run(self) -> BergeEmbedding | None:
        H, T = self.H, self.T
        if T.num_vertices > H.n or T.k > H.e:
            return None
        for verts, edge_ids in H.components():
            if len(edge_ids) < T.k or len(verts) < T.num_vertices:
                continue
            for v in verts:
                if self.hdeg[v] < self.tdeg[self.root]:
                    continue
                vimg = {self.root: v}
                found = self._extend(0, vimg, {}, 1 << v, 0, [])
                if found is not None:
                    return found
        return None

    def _hall_ok(self, step: int, vimg: dict[int, int], used_edges: int) -> bool:
        H = self.H
        free = [j for j in range(H.e) if not used_edges >> j & 1]
        cands = []
        for p, _c, _ in self.steps[step:]:
            if p in vimg:
                bit = 1 << vimg[p]
                cands.append([j for j in free if H.masks[j] & bit])
            else:
                cands.append(free)
        size, _ = _max_matching(cands)
        return size == len(cands)

    def _extend(self, step, vimg, assign, used_v, used_e, deferred):
        self._tick()
        if step == len(self.steps):
            return self._finish(vimg, assign, used_v, deferred)
        if not self._hall_ok(step, vimg, used_e):
            return None
        H = self.H
        p, c, tedge = self.steps[step]
        bit = 1 << vimg[p]
        floor = -1
        if self.is_leaf[c] and step > 0:
            pp, pc, pedge = self.steps[step - 1]
            if pp == p and self.is_leaf[pc]:
                floor = assign[pedge]
        for j in range(floor + 1, H.e):
            if used_e >> j & 1 or not H.masks[j] & bit:
                continue
            if self.same_as_prev[j] and not used_e >> (j - 1) & 1:
                continue
            assign[tedge] = j
            if self.is_leaf[c]:
                deferred.append((c, j))
                found = self._extend(step + 1, vimg, assign, used_v, used_e | 1 << j, deferred)
                deferred.pop()
            else:
                found = None
                for w in H.edges[j]:
                    if used_v >> w & 1 or self.hdeg[w] < self.tdeg[c]:
                        continue
                    vimg[c] = w
                    found = self._extend(step + 1, vimg, assign, used_v | 1 << w, used_e | 1 << j, deferred)
                    del vimg[c]
                    if found is not None:
                        break
            del assign[tedge]
            if found is not None:
                return found
        return None

    def _finish(self, vimg, assign, used_v, deferred):
        H = self.H
        cands = [[w for w in H.edges[j] if not used_v >> w & 1] for _, j in deferred]
        size, match = _max_matching(cands)
        if size < len(deferred):
            return None
        full = dict(vimg)
        for (leaf, _), w in zip(deferred, match):
            full[leaf] = w
        return BergeEmbedding(
            tuple(full[t] for t in range(self.T.num_vertices)),
            tuple(assign[i] for i in range(self.T.k)),
        )


def find_berge_copy(H: MultiHypergraph, T: Tree, deadline: float | None = None) -> BergeEmbedding | None:
    """Return a verified Berge embedding of ``T`` in ``H`` or ``None`` if
    ``H`` is Berge-``T``-free. The search is complete."""
    emb = BergeSearch(H, T, deadline).run()
    if emb is not None and not verify_embedding(H, T, emb):
        raise AssertionError(f"search produced an invalid witness {emb}")
    return emb


def is_berge_free(H: MultiHypergraph, T: Tree, deadline: float | None = None) -> bool:
    return find_berge_copy(H, T, deadline) is None
