"""Command-line front end.

Exit codes: 0 success or copy found, 1 negative result (Berge-free, or an
extremal certificate at the bound), 2 usage, input or budget error, 3 an
extremal theorem appears violated.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import redirect_stdout

from .berge import BudgetExceeded, find_berge_copy
from .clusters import audit_cluster, audit_strip_inequalities, build_strip_report, find_clusters
from .constructions import disjoint_cliques, make_tree, multi_blocks, two_sided
from .hypermodel import (
    BergeEmbedding,
    FormatError,
    MultiHypergraph,
    PreconditionError,
    Tree,
    parse_hypergraph,
    parse_tree,
    serialize_embedding,
    serialize_hypergraph,
)
from .reduction import StructureCertificate, TheoremViolation, prove_or_embed
from .trees import MAX_K, canonical_code, classify_tree, enumerate_trees, is_star
from .turan import brute_force_turan, verify_extremal

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _deadline(budget: float | None) -> float | None:
    env = os.environ.get("BERGE_BUDGET_SECS")
    if budget is None and env:
        try:
            budget = float(env)
        except ValueError:
            raise UsageError(f"BERGE_BUDGET_SECS must be a number, got {env!r}") from None
    return None if budget is None else time.monotonic() + budget


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(args) -> tuple[MultiHypergraph, Tree]:
    return parse_hypergraph(_read(args.hypergraph)), parse_tree(_read(args.tree))


def _print_certificate(cert: StructureCertificate) -> None:
    print(f"certificate: {len(cert.components)} component(s)")
    for c in cert.components:
        line = f"  {c.kind}: vertices={list(c.vertices)} edges={list(c.edge_indices)}"
        if c.kind == "two_sided":
            line += f" blocks={len(c.blocks)} singletons={list(c.singles)}"
        print(line)


def cmd_gen(args) -> int:
    if args.family == "cliques":
        if args.n is None:
            raise UsageError("--n is required for the cliques family")
        H = disjoint_cliques(args.n, args.r, args.k)
    elif args.family == "multiblocks":
        if args.n is None:
            raise UsageError("--n is required for the multiblocks family")
        H = multi_blocks(args.n, args.r, args.k)
    else:
        if args.t is None:
            raise UsageError("--t is required for the twosided family")
        H = two_sided(args.t, args.r, args.k)
    text = serialize_hypergraph(H)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_trees(args) -> int:
    if not 1 <= args.k <= MAX_K:
        raise UsageError(f"--k must be in 1..{MAX_K}")
    for i, T in enumerate(enumerate_trees(args.k)):
        if args.non_star and is_star(T):
            continue
        edges = " ".join(f"{u}-{v}" for u, v in T.edges)
        print(f"{i} {classify_tree(T).kind.value} {canonical_code(T)} {edges}")
    return EXIT_OK


def cmd_search(args) -> int:
    H, T = _load(args)
    emb = find_berge_copy(H, T, _deadline(None))
    if emb is None:
        print("berge-free")
        return EXIT_NEGATIVE
    text = serialize_embedding(emb)
    print("found")
    sys.stdout.write(text)
    if args.witness:
        with open(args.witness, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_audit(args) -> int:
    H, T = _load(args)
    k = args.k if args.k is not None else T.k
    if k != T.k:
        raise UsageError(f"--k {k} does not match the tree's {T.k} edges")
    clusters = find_clusters(H, k)
    print(f"clusters: {len(clusters)}")
    found = None
    for S in clusters:
        emb = audit_cluster(H, T, S)
        status = "clean" if emb is None else "violation"
        print(f"  edges={list(S.edge_indices)} core={sorted(S.core)} span_size={len(S.span)} {status}")
        if emb is not None and found is None:
            found = emb
    if found is not None:
        print("audit embedding:")
        sys.stdout.write(serialize_embedding(found))
        return EXIT_OK
    _, report = build_strip_report(H, k, clusters)
    print(
        f"strip: t={report.t} |X|={len(report.X_all)} |Y|={len(report.Y)} a={report.a} "
        f"removed_incidences={report.removed_incidences} removed_nodes={report.removed_vertices} "
        f"remainder_incidences={report.remainder_graph.num_edges()}"
    )
    mode = args.mode or ("simple" if H.is_simple() else "multi")
    audit = audit_strip_inequalities(report, H.n, H.r, k, mode)
    print(f"inequalities ({mode}):")
    for line in audit.lines():
        print("  " + line)
    return EXIT_OK


def cmd_prove(args) -> int:
    H, T = _load(args)
    trace: list[str] = []
    try:
        res = prove_or_embed(H, T, args.mode, trace, _deadline(None))
    finally:
        if args.trace:
            for line in trace:
                print("trace: " + line)
    if isinstance(res, BergeEmbedding):
        print("embedding")
        sys.stdout.write(serialize_embedding(res))
        return EXIT_OK
    _print_certificate(res)
    return EXIT_NEGATIVE


TREE_CHOICES = ("path", "star", "dstar", "all")


def _turan_job(job):
    n, r, k, edges, name, mode, extremal, deadline = job
    T = Tree(k, edges)
    res = brute_force_turan(n, r, k, T, mode, deadline=deadline)
    out = [res.line(name)]
    if extremal:
        rep = verify_extremal(n, r, k, T, mode, result=res)
        if rep.applicable:
            out.append(f"  family check: {len(rep.matches)} match, {len(rep.outliers)} outlier")
        else:
            out.append(f"  family check: not applicable ({rep.reason})")
        for i, H in enumerate(res.extremal):
            out.append(f"  extremal {i}:")
            out.extend("    " + line for line in serialize_hypergraph(H).splitlines())
        if rep.outliers:
            return out, True
    return out, False


def cmd_turan(args) -> int:
    if args.tree == "all":
        trees = [(f"{classify_tree(T).kind.value}:{canonical_code(T)}", T) for T in enumerate_trees(args.k)]
    else:
        trees = [(args.tree, make_tree(args.tree, args.k))]
    deadline = _deadline(args.budget)
    jobs = [(args.n, args.r, args.k, T.edges, name, args.mode, args.extremal, deadline) for name, T in trees]
    workers = max(1, min(args.jobs or os.cpu_count() or 1, len(jobs)))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_turan_job, jobs))
    else:
        results = [_turan_job(j) for j in jobs]
    alarm = False
    for lines, outlier in results:
        print("\n".join(lines))
        alarm |= outlier
    return EXIT_VIOLATION if alarm else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bergetrees", description="Berge trees in uniform hypergraphs")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="write an extremal hypergraph")
    g.add_argument("--family", choices=("cliques", "multiblocks", "twosided"), required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--t", type=int)
    g.add_argument("--r", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("trees", parents=[common], help="list k-edge trees up to isomorphism")
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--non-star", action="store_true")
    t.set_defaults(func=cmd_trees)

    s = sub.add_parser("search", parents=[common], help="look for a Berge copy of a tree")
    s.add_argument("--hypergraph", required=True)
    s.add_argument("--tree", required=True)
    s.add_argument("--witness")
    s.set_defaults(func=cmd_search)

    a = sub.add_parser("audit", parents=[common], help="cluster audits and strip bookkeeping")
    a.add_argument("--hypergraph", required=True)
    a.add_argument("--tree", required=True)
    a.add_argument("--k", type=int)
    a.add_argument("--mode", choices=("simple", "multi"))
    a.set_defaults(func=cmd_audit)

    pe = sub.add_parser("prove-or-embed", parents=[common], help="embedding or extremal certificate")
    pe.add_argument("--hypergraph", required=True)
    pe.add_argument("--tree", required=True)
    pe.add_argument("--mode", choices=("simple", "multi"), required=True)
    pe.add_argument("--trace", action="store_true")
    pe.set_defaults(func=cmd_prove)

    tu = sub.add_parser("turan", parents=[common], help="exhaustive Turán number")
    tu.add_argument("--n", type=int, required=True)
    tu.add_argument("--r", type=int, required=True)
    tu.add_argument("--k", type=int, required=True)
    tu.add_argument("--tree", choices=TREE_CHOICES, required=True)
    tu.add_argument("--mode", choices=("simple", "multi"), default="simple")
    tu.add_argument("--extremal", action="store_true")
    tu.add_argument("--budget", type=float)
    tu.set_defaults(func=cmd_turan)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except TheoremViolation as exc:
        print(f"THEOREM VIOLATION: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, FormatError, PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run(argv: list[str]) -> tuple[int, str]:
    """Run the CLI in-process and capture standard output."""
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
