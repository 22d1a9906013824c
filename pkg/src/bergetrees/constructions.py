"""Generators for the extremal families and the named trees."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, islice
from typing import Sequence

from .hypermodel import MultiHypergraph, PreconditionError, Tree
from .trees import canonical_form


def disjoint_cliques(n: int, r: int, k: int) -> MultiHypergraph:
    """``n/(r+1)`` disjoint (r+1)-sets, each carrying its k-1
    lexicographically first r-subsets."""
    if k < 2:
        raise PreconditionError(f"need k >= 2, got {k}")
    if n % (r + 1):
        raise PreconditionError(f"r+1={r + 1} does not divide n={n}")
    if k - 1 > r + 1:
        raise PreconditionError(f"an (r+1)-set has only {r + 1} r-subsets, need k-1={k - 1}")
    edges = []
    for base in range(0, n, r + 1):
        edges.extend(islice(combinations(range(base, base + r + 1), r), k - 1))
    return MultiHypergraph(n, r, tuple(edges))


def multi_blocks(n: int, r: int, k: int) -> MultiHypergraph:
    """``n/r`` disjoint r-sets, each repeated k-1 times."""
    if k < 2:
        raise PreconditionError(f"need k >= 2, got {k}")
    if n % r:
        raise PreconditionError(f"r={r} does not divide n={n}")
    edges = [tuple(range(base, base + r)) for base in range(0, n, r) for _ in range(k - 1)]
    return MultiHypergraph(n, r, tuple(edges))


@dataclass(frozen=True)
class TwoSidedSpec:
    """Blocks ``A_0..A_{t-1}`` of size r-1 followed by 2t singleton vertices.

    ``bipartite[j]`` lists the blocks singleton ``j`` is joined to; every
    hyperedge is one singleton plus one whole block. Block vertices have
    degree k-1 and singletons degree (k-1)/2.
    """

    t: int
    r: int
    k: int
    bipartite: tuple[tuple[int, ...], ...]

    def block(self, i: int) -> tuple[int, ...]:
        return tuple(range(i * (self.r - 1), (i + 1) * (self.r - 1)))

    def singleton(self, j: int) -> int:
        return self.t * (self.r - 1) + j

    @property
    def n(self) -> int:
        return self.t * (self.r + 1)

    def hypergraph(self) -> MultiHypergraph:
        edges = [(self.singleton(j),) + self.block(i) for j, blocks in enumerate(self.bipartite) for i in blocks]
        return MultiHypergraph(self.n, self.r, tuple(edges))


def circulant_bipartite(t: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Singleton ``j`` joined to blocks ``floor(j/2) + i (mod t)`` for
    ``i < (k-1)/2``; biregular whenever ``t >= (k-1)/2`` and equal to the
    complete bipartite graph when ``t = (k-1)/2``."""
    half = (k - 1) // 2
    return tuple(tuple(sorted((j // 2 + i) % t for i in range(half))) for j in range(2 * t))


def two_sided_spec(t: int, r: int, k: int, bipartite: Sequence[Sequence[int]] | None = None) -> TwoSidedSpec:
    if k < 3 or k % 2 == 0:
        raise PreconditionError(f"two-sided extremal hypergraphs need odd k >= 3, got k={k}")
    if r < k * (k - 2):
        raise PreconditionError(f"need r >= k(k-2) = {k * (k - 2)}, got r={r}")
    if t < 1:
        raise PreconditionError("need at least one block")
    half = (k - 1) // 2
    if bipartite is None:
        if t < half:
            raise PreconditionError(
                f"block degree k-1={k - 1} needs {k - 1} distinct singletons per block "
                f"but a simple hypergraph with t={t} blocks gives each singleton at most t={t} blocks "
                f"(need t >= {half})"
            )
        bipartite = circulant_bipartite(t, k)
    adjacency = tuple(tuple(sorted(b)) for b in bipartite)
    if len(adjacency) != 2 * t:
        raise PreconditionError(f"need 2t={2 * t} singletons, got {len(adjacency)}")
    block_deg = [0] * t
    for j, blocks in enumerate(adjacency):
        if len(set(blocks)) != len(blocks) or any(not 0 <= i < t for i in blocks):
            raise PreconditionError(f"singleton {j}: invalid block list {blocks}")
        if len(blocks) != half:
            raise PreconditionError(f"singleton {j} has degree {len(blocks)}, need (k-1)/2={half}")
        for i in blocks:
            block_deg[i] += 1
    if any(d != k - 1 for d in block_deg):
        raise PreconditionError(f"block degrees {block_deg} are not all k-1={k - 1}")
    return TwoSidedSpec(t, r, k, adjacency)


def two_sided(t: int, r: int, k: int, bipartite: Sequence[Sequence[int]] | None = None) -> MultiHypergraph:
    return two_sided_spec(t, r, k, bipartite).hypergraph()


TREE_KINDS = ("path", "star", "balanced_double_star")


def make_tree(kind: str, k: int) -> Tree:
    if k < 1:
        raise PreconditionError("need k >= 1")
    if kind == "path":
        edges = [(i, i + 1) for i in range(k)]
    elif kind == "star":
        edges = [(0, i) for i in range(1, k + 1)]
    elif kind in ("balanced_double_star", "dstar"):
        if k < 3 or k % 2 == 0:
            raise PreconditionError(f"the balanced double star needs odd k >= 3, got k={k}")
        half = (k - 1) // 2
        edges = [(0, 1)]
        edges += [(0, 2 + i) for i in range(half)]
        edges += [(1, 2 + half + i) for i in range(half)]
    else:
        raise PreconditionError(f"unknown tree kind {kind!r}; expected one of {TREE_KINDS}")
    return canonical_form(Tree(k, tuple(edges)))
