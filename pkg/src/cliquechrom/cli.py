"""``cliquechrom`` command line: gen, solve, verify, certify, bounds, sweep.

Exit codes: 0 success, 1 usage, 2 input error, 3 budget exceeded,
4 verification failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import __version__
from .bounds import janson_report, lemma21_bounds, lemma22_bounds, lower_bound_coefficient, reports_to_csv
from .certificates import get_profile
from .cliques import CliqueLimitExceeded
from .coloring import Coloring, ColoringFormatError, chi_c_exact, greedy_clique_coloring, verify_coloring
from .experiments import (
    SWEEP_COLUMNS,
    certify_cell,
    derive_seed,
    dumps_csv,
    dumps_jsonl,
    gnuplot_script,
    make_record,
    run_cells,
    summarize_certify,
    summarize_sweep,
    sweep_cell,
)
from .graph import gen_gnp, load_graph, make_rng, save_graph

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_BUDGET, EXIT_INVALID = 0, 1, 2, 3, 4

log = logging.getLogger("cliquechrom")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, records: list[dict], columns=None) -> None:
    for r in records:
        r["argv"] = args.argv
        if args.no_timing:
            r["wall_time"] = None
    text = dumps_csv(records, columns) if args.format == "csv" else dumps_jsonl(records)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    t0 = time.perf_counter()
    g = gen_gnp(args.n, args.p, make_rng(args.seed))
    save_graph(g, args.output, args.graph_format)
    rec = make_record("gen", args.n, args.p, args.seed, {"edges": g.n_edges(), "file": args.output},
                      wall_time=time.perf_counter() - t0)
    _emit(args, [rec])
    return EXIT_OK


def cmd_solve(args) -> int:
    t0 = time.perf_counter()
    g = load_graph(args.graph, args.graph_format)
    payload: dict = {"graph": args.graph}
    code = EXIT_OK
    heur = greedy_clique_coloring(g, make_rng(args.seed), restarts=args.restarts)
    payload["heuristic_k"] = heur.k
    best = heur
    if not args.heuristic:
        try:
            res = chi_c_exact(g, node_limit=args.node_limit, clique_limit=args.clique_limit)
        except CliqueLimitExceeded as exc:
            print(f"budget exceeded: {exc}", file=sys.stderr)
            payload.update(status="clique_limit")
            code = EXIT_BUDGET
        else:
            payload.update(exact_k=res.k, status=res.status, lower=res.lower, upper=res.upper, nodes=res.nodes)
            if res.k <= best.k:
                best = res.coloring
            if res.status != "proved":
                code = EXIT_BUDGET
    payload["k"] = best.k
    coloring_path = args.coloring_out or args.graph + ".coloring"
    with open(coloring_path, "w") as fh:
        fh.write(best.dumps())
    payload["coloring_file"] = coloring_path
    print(f"k={best.k}", file=sys.stderr)
    _emit(args, [make_record("solve", g.n, None, args.seed, payload, wall_time=time.perf_counter() - t0)])
    return code


def cmd_verify(args) -> int:
    g = load_graph(args.graph, args.graph_format)
    with open(args.coloring) as fh:
        col = Coloring.loads(fh.read())
    if col.n != g.n:
        raise ColoringFormatError(f"coloring has {col.n} entries, graph has {g.n} vertices")
    verdict = verify_coloring(g, col)
    if verdict.valid:
        print("valid")
        return EXIT_OK
    print("invalid")
    print("witness: " + " ".join(map(str, verdict.witness.sorted())))
    return EXIT_INVALID


def cmd_certify(args) -> int:
    profile = get_profile(args.profile)
    cells = [(args.n, args.p, derive_seed(args.seed, args.n, i), profile, args.halves, args.trials, args.effort)
             for i in range(args.seeds)]
    records = run_cells(certify_cell, cells, args.jobs)
    summary = summarize_certify(records)
    _emit(args, records)
    print(json.dumps(summary, indent=2, sort_keys=True), file=sys.stderr)
    if args.summary:
        with open(args.summary, "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
    return EXIT_OK


def cmd_bounds(args) -> int:
    reports = []
    for L in args.L:
        reports += [lemma21_bounds(L), lemma22_bounds(L), janson_report(L)]
    coeffs = {p: lower_bound_coefficient(p) for p in args.p}
    if args.format == "csv":
        text = reports_to_csv(reports)
        text += "".join(f"coefficient,{p},lower_bound_coefficient,{c!r},\n" for p, c in coeffs.items())
    else:
        text = "".join(r.table() + "\n" for r in reports)
        text += "# lower-bound coefficient 1/log2(1/p)\n"
        text += "".join(f"p={p:<8} {c:.6f}\n" for p, c in coeffs.items())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.mode == "exact" and max(args.n) > args.exact_max_n:
        raise UsageError(f"exact mode guarded to n <= {args.exact_max_n}; raise --exact-max-n to override")
    cells = [(n, args.p, derive_seed(args.seed, n, i), args.mode, args.restarts, args.node_limit,
              args.clique_limit, args.check_bruteforce)
             for n in args.n for i in range(args.seeds)]
    records = run_cells(sweep_cell, cells, args.jobs)
    summary = summarize_sweep(records)
    _emit(args, records, SWEEP_COLUMNS if args.format == "csv" else None)
    sys.stderr.write(summary.text())
    if args.summary:
        with open(args.summary, "w") as fh:
            json.dump(summary.to_dict(), fh, indent=2, sort_keys=True)
    if args.gnuplot:
        if not args.out or args.format != "csv":
            raise UsageError("--gnuplot needs --format csv and --out")
        with open(args.out + ".gp", "w") as fh:
            fh.write(gnuplot_script(args.out))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    common.add_argument("--profile", default="desk", help="paper, desk, or a key=value profile file")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--out", help="write records here instead of stdout")
    common.add_argument("--no-timing", action="store_true", help="blank wall_time so output is byte-stable")
    common.add_argument("-v", "--verbose", action="store_true")

    graph_fmt = argparse.ArgumentParser(add_help=False)
    graph_fmt.add_argument("--graph-format", choices=("edgelist", "dimacs"),
                           help="default: by extension (.col/.dimacs/.clq are DIMACS)")

    def records_format(sp):
        sp.add_argument("--format", choices=("csv", "jsonl"), default="jsonl")

    p = _Parser(prog="cliquechrom", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("gen", parents=[common, graph_fmt], help="sample G(n, p) to a file")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-p", type=float, default=0.5)
    s.add_argument("-o", "--output", required=True)
    records_format(s)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", parents=[common, graph_fmt], help="compute a clique colouring")
    s.add_argument("graph")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="branch and bound (default)")
    mode.add_argument("--heuristic", action="store_true", help="greedy upper bound only")
    s.add_argument("-c", "--coloring-out", help="default: <graph>.coloring")
    s.add_argument("--restarts", type=int, default=1)
    s.add_argument("--node-limit", type=int, default=2_000_000)
    s.add_argument("--clique-limit", type=int, default=10**7)
    records_format(s)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("verify", parents=[common, graph_fmt], help="check a colouring file")
    s.add_argument("graph")
    s.add_argument("coloring")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("certify", parents=[common], help="run the certificate checks on sampled graphs")
    s.add_argument("-n", type=int, default=512)
    s.add_argument("-p", type=float, default=0.5)
    s.add_argument("--seeds", type=int, default=20)
    s.add_argument("--halves", type=int, default=5, help="random half-sets Y per graph")
    s.add_argument("--trials", type=int, default=200, help="sampled sets S per size")
    s.add_argument("--effort", type=int, default=200_000, help="transversal search node budget")
    s.add_argument("--summary", help="write aggregated counts as JSON")
    records_format(s)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("bounds", parents=[common], help="evaluate the union/Janson bounds at L = log2 n")
    s.add_argument("--L", type=float, nargs="+", default=[50, 100, 150, 200, 300])
    s.add_argument("--p", type=float, nargs="+", default=[0.5, 0.25, 0.1])
    s.add_argument("--format", choices=("table", "csv"), default="table")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("sweep", parents=[common], help="chi_c over a grid of n and seeds")
    s.add_argument("--n", type=int, nargs="+", default=[32, 64, 128, 256])
    s.add_argument("-p", type=float, default=0.5)
    s.add_argument("--seeds", type=int, default=20)
    s.add_argument("--mode", choices=("heuristic", "exact"), default="heuristic")
    s.add_argument("--restarts", type=int, default=1)
    s.add_argument("--node-limit", type=int, default=2_000_000)
    s.add_argument("--clique-limit", type=int, default=10**6)
    s.add_argument("--exact-max-n", type=int, default=64)
    s.add_argument("--check-bruteforce", action="store_true", help="also run brute force for n <= 12")
    s.add_argument("--summary", help="write the per-n summary and fit as JSON")
    s.add_argument("--gnuplot", action="store_true", help="write <out>.gp next to the CSV")
    records_format(s)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CliqueLimitExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
