"""Command-line front end.

Results go to stdout (or ``--out``), diagnostics to stderr.  Exit codes:
0 success, 1 validation failure, 2 malformed input, 3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys

from .classify import classify, critical_graph
from .cones import codim_report, psi_complete
from .digraph import Digraph
from .enumeration import (MAX_CCF_N, ResourceLimit, element_stats, enumerate_ccf, face_lattice, n_table,
                          orbits)
from .relations import CompleteSet, ConnectedRelation, Violation, join, validate_complete
from .tropical import (TropMatrix, eigenspace_vertices, eigenvalue, kleene_star, normalize,
                       polytrope_vertices)

EXIT_OK, EXIT_INVALID, EXIT_MALFORMED, EXIT_RESOURCE = 0, 1, 2, 3


class Malformed(ValueError):
    pass


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise Malformed(f"{path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise Malformed(f"{path}: {e}") from e


def _matrix(path: str) -> TropMatrix:
    try:
        return TropMatrix.from_json(_load(path))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise Malformed(f"{path}: not a matrix: {e}") from e


def _graphs(path: str) -> tuple[int, list[Digraph]]:
    obj = _load(path)
    try:
        n = int(obj["n"])
        graphs = []
        for p in obj["parts"]:
            edges = [(int(u) - 1, int(v) - 1) for u, v in p["edges"]]
            if any(not (0 <= x < n) for e in edges for x in e):
                raise ValueError("node out of range")
            graphs.append(Digraph.from_edges(n, edges))
    except (KeyError, TypeError, ValueError) as e:
        raise Malformed(f"{path}: not a complete set: {e}") from e
    return n, graphs


def _complete_set(path: str) -> CompleteSet:
    n, graphs = _graphs(path)
    try:
        parts = [ConnectedRelation.of(g) for g in graphs]
    except ValueError as e:
        raise Malformed(f"{path}: {e}") from e
    res = validate_complete(parts)
    if isinstance(res, Violation):
        raise Malformed(f"{path}: condition ({res.clause}) fails: {res.message}")
    return res


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands

def cmd_eig(args) -> int:
    A = _matrix(args.matrix)
    _emit(args, {"eigenvalue": str(eigenvalue(A)),
                 "eigenspace_vertices": [p.to_json() for p in eigenspace_vertices(A)]})
    return EXIT_OK


def cmd_star(args) -> int:
    A = _matrix(args.matrix)
    _emit(args, kleene_star(normalize(A)).to_json())
    return EXIT_OK


def cmd_polytrope(args) -> int:
    A = _matrix(args.matrix)
    crit = critical_graph(A)
    _emit(args, {"eigenvalue": str(eigenvalue(A)),
                 "vertices": [p.to_json() for p in polytrope_vertices(A)],
                 "critical_graph_dot": crit.graph.to_dot("critical")})
    return EXIT_OK


def cmd_classify(args) -> int:
    A = _matrix(args.matrix)
    G = classify(A)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(critical_graph(A).graph.to_dot("critical") + "\n")
    _emit(args, G.to_json())
    return EXIT_OK


def cmd_cone(args) -> int:
    G = _complete_set(args.complete_set)
    K = psi_complete(G)
    out = K.to_json()
    if args.pretty:
        out["pretty"] = [f.pretty() for f in K.forms()]
    _emit(args, out)
    return EXIT_OK


def cmd_join(args) -> int:
    G, H = _complete_set(args.first), _complete_set(args.second)
    if G.n != H.n:
        raise Malformed("complete sets on different node counts")
    _emit(args, join(G, H).to_json())
    return EXIT_OK


def cmd_validate(args) -> int:
    n, graphs = _graphs(args.complete_set)
    parts = []
    for idx, g in enumerate(graphs):
        try:
            parts.append(ConnectedRelation.of(g))
        except ValueError as e:
            res = Violation("part", f"part {idx + 1}: {e}", (idx,))
            break
    else:
        res = validate_complete(parts, check_parts=False)
    if isinstance(res, Violation):
        _emit(args, {"valid": False, "clause": res.clause, "message": res.message,
                     "witness": json.loads(json.dumps(res.witness, default=list))})
        print(f"invalid: condition ({res.clause}): {res.message}", file=sys.stderr)
        return EXIT_INVALID
    _emit(args, {"valid": True, "complete_set": res.to_json()})
    return EXIT_OK


def cmd_enumerate(args) -> int:
    if args.open_only:
        elems = enumerate_ccf(args.n)
        _emit(args, {"n": args.n, "elements": [G.to_json() for G in elems]})
        return EXIT_OK
    L = face_lattice(args.n, args.threads, with_order=True, limit=args.limit)
    order = [[i, j] for i in range(len(L.elements)) for j in range(len(L.elements))
             if i != j and L.order[i][j]]
    _emit(args, {"n": args.n, "f_vector": list(L.f_vector()), "codims": list(L.codims),
                 "elements": [G.to_json() for G in L.elements], "order": order})
    return EXIT_OK


def _lam_str(lam: tuple[int, ...]) -> str:
    return "+".join(str(x) for x in lam)


def cmd_table(args) -> int:
    T = n_table(args.n, threads=args.threads)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["codim", "sinks", "p", "c", "count"])
    for (k, lam, p, c), v in sorted(T.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2] or 0, kv[0][3] or 0)):
        w.writerow([k, _lam_str(lam), "" if p is None else p, "" if c is None else c, v])
    _emit(args, buf.getvalue())
    return EXIT_OK


def _loopless_json(G: CompleteSet) -> list[dict]:
    return [{"edges": p.graph.without_loops().to_json()["edges"], "sink": sorted(u + 1 for u in p.sink)}
            for p in G.parts]


def _parse_sinks(s: str | None) -> tuple[int, ...] | None:
    if s is None:
        return None
    return tuple(sorted((int(x) for x in s.replace("+", ",").split(",")), reverse=True))


def cmd_orbits(args) -> int:
    if args.lattice:
        elems = list(face_lattice(args.n, args.threads, with_order=False, limit=args.limit).elements)
    else:
        elems = enumerate_ccf(args.n)
    lam = _parse_sinks(args.sinks)
    sel = []
    for G in elems:
        k, l, p, c = element_stats(G)
        if args.codim is not None and k != args.codim:
            continue
        if lam is not None and l != lam:
            continue
        if args.p is not None and p != args.p:
            continue
        if args.c is not None and c != args.c:
            continue
        sel.append(G)
    if args.ignore_loops:
        reps: dict = {}
        for G in sel:
            reps.setdefault(G.without_loops(), G)
        classes = orbits(sel, args.reversal, key=lambda G: G.without_loops())
        out = [[_loopless_json(reps[k]) for k in cls] for cls in classes]
    else:
        classes = orbits(sel, args.reversal)
        out = [[G.to_json() for G in cls] for cls in classes]
    _emit(args, {"n": args.n, "selected": len(sel), "keys": sum(len(c) for c in classes),
                 "class_sizes": [len(c) for c in classes], "classes": out})
    return EXIT_OK


# ---------------------------------------------------------------- verify

def _suite_eigen(n, trials, rng):
    from .cones import cycle_polytope_support
    from .oracle import bf_eigenvalue, random_matrix
    bad = []
    for _ in range(trials):
        A = random_matrix(rng, n)
        lam = eigenvalue(A)
        if lam != bf_eigenvalue(A) or lam != cycle_polytope_support(A):
            bad.append(A.to_json())
    return bad


def _suite_star(n, trials, rng):
    from .oracle import bf_longest_path, random_matrix
    bad = []
    for _ in range(trials):
        A = normalize(random_matrix(rng, n))
        S = kleene_star(A)
        if any(S.rows[u][v] != bf_longest_path(A, u, v) for u in range(n) for v in range(n)):
            bad.append(A.to_json())
    return bad


def _suite_lp(n, trials, rng):
    from .oracle import bf_lp_longest_path, random_matrix
    bad = []
    for _ in range(trials):
        A = normalize(random_matrix(rng, n))
        S = kleene_star(A)
        for t in range(n):
            rep = bf_lp_longest_path(A, t)
            if any(rep.node_values[u] != S.rows[u][t] for u in range(n)):
                bad.append(A.to_json())
                break
    return bad


def _suite_linearity(n, trials, rng):
    from .oracle import bf_linearity_check
    bad = []
    for G in enumerate_ccf(n):
        rep = bf_linearity_check(G, trials, rng.randrange(1 << 30))
        if not rep.passed:
            A1, A2, t = rep.counterexample
            bad.append({"element": G.to_json(), "A1": A1.to_json(), "A2": A2.to_json(), "t": str(t)})
    return bad


def cmd_verify(args) -> int:
    rng = random.Random(args.seed)
    n, trials = args.n, args.trials
    if args.suite == "codim":
        if n > 3:
            raise ResourceLimit("codimension check is limited to n <= 3")
        L = face_lattice(n, args.threads, with_order=False, limit=args.limit)
        reports = [codim_report(G) for G in L.elements]
        mism = [r for r in reports if not r["match"]]
        _emit(args, {"suite": "codim", "n": n, "elements": len(reports), "mismatches": len(mism),
                     "unexplained": sum(not r["explained"] for r in mism), "discrepancies": mism})
        return EXIT_INVALID if any(not r["explained"] for r in mism) else EXIT_OK
    suites = {"eigen": _suite_eigen, "star": _suite_star, "lp": _suite_lp, "linearity": _suite_linearity}
    bad = suites[args.suite](n, trials, rng)
    _emit(args, {"suite": args.suite, "n": n, "trials": trials, "seed": args.seed,
                 "mismatches": len(bad), "counterexamples": bad})
    if bad:
        print(f"{args.suite}: {len(bad)} mismatches", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes (default: $POLYTROPE_THREADS or 1)")
    common.add_argument("--limit", type=int, default=None, help="cap on lattice size; exceeding it exits 3")

    ap = argparse.ArgumentParser(prog="polytrope", description="Exact max-plus polytropes and their fan.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    for name, fn, help_ in (("eig", cmd_eig, "eigenvalue and eigenspace vertices"),
                            ("star", cmd_star, "Kleene star of the normalized matrix"),
                            ("polytrope", cmd_polytrope, "polytrope vertices and critical graph DOT")):
        add(name, fn, help_).add_argument("matrix")
    p = add("classify", cmd_classify, "complete set indexing the cone containing a matrix")
    p.add_argument("matrix", nargs="?")
    p.add_argument("--matrix", dest="matrix_opt")
    p.add_argument("--dot", help="also write the critical graph as DOT")
    p = add("cone", cmd_cone, "minimal tagged H-representation of a complete set's cone")
    p.add_argument("complete_set")
    p.add_argument("--pretty", action="store_true", help="add human-readable forms")
    p = add("join", cmd_join, "join of two complete sets")
    p.add_argument("first")
    p.add_argument("second")
    add("validate", cmd_validate, "check the completeness conditions").add_argument("complete_set")
    p = add("enumerate", cmd_enumerate, "face lattice (or open cones) for small n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--open-only", action="store_true", help=f"only the open cones (n <= {MAX_CCF_N})")
    p = add("table", cmd_table, "element counts by codim, sink sizes, p, c as CSV")
    p.add_argument("--n", type=int, default=3)
    p = add("orbits", cmd_orbits, "orbit classes under relabeling (and reversal)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reversal", action="store_true")
    p.add_argument("--lattice", action="store_true", help="use all lattice elements, not just open cones")
    p.add_argument("--codim", type=int)
    p.add_argument("--sinks", help="sink sizes, e.g. 1,1,1")
    p.add_argument("--p", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--ignore-loops", action="store_true")
    p = add("verify", cmd_verify, "compare fast paths against brute-force oracles")
    p.add_argument("--suite", choices=["eigen", "star", "linearity", "lp", "codim"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "classify":
        args.matrix = args.matrix_opt or args.matrix
        if not args.matrix:
            print("classify: a matrix file is required", file=sys.stderr)
            return EXIT_MALFORMED
    try:
        return args.fn(args)
    except (Malformed, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MALFORMED
    except ResourceLimit as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
