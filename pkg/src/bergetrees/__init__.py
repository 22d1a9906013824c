"""Berge copies of trees in uniform hypergraphs and multi-hypergraphs."""

from .berge import BudgetExceeded, find_berge_copy, is_berge_free, verify_embedding
from .bounds import RegimeError, bound
from .clusters import (
    ClusterViolation,
    ClusterWitness,
    audit_cluster,
    audit_strip_inequalities,
    find_clusters,
    strip_clusters,
)
from .constructions import disjoint_cliques, make_tree, multi_blocks, two_sided
from .hypermodel import (
    BergeEmbedding,
    FormatError,
    MultiHypergraph,
    PreconditionError,
    Tree,
    incidence_graph,
    parse_hypergraph,
    parse_tree,
    serialize_hypergraph,
    serialize_tree,
)
from .reduction import (
    StructureCertificate,
    TheoremViolation,
    check_average_deletion,
    cluster_or_embed,
    min_degree_subgraph,
    prove_or_embed,
    reduced_from_bipartite,
)
from .trees import classify_tree, enumerate_trees, low_degree_internal_vertex, prefix_order
from .turan import TuranResult, brute_force_turan, probe_conjecture, verify_extremal

__version__ = "0.1.0"
