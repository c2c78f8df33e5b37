"""Simulate or check partitioned aggregations from the shell.

Exit codes: 0 deterministic or success, 1 non-determinism detected,
2 usage or parse error, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

from . import combinators as C
from .casestudies import STUDIES, CaseResult
from .chaos import MASK64, ChaosSource, trial_sources
from .core import repartition, repartition_into
from .detcheck import checks
from .detcheck.domain import parse_domain
from .detcheck.oracle import oracle
from .detcheck.runner import (
    AGGREGATE,
    AGGREGATE_BY_KEY,
    AGGREGATE_MESSAGES,
    BY_KEY_COMBINATORS,
    COMBINATORS,
    REDUCE,
    REDUCE_BY_KEY,
    TREE_AGGREGATE,
    TREE_REDUCE,
    needs_triple,
    normalize_by_key,
    reference,
)
from .detcheck.shrink import shrink
from .detcheck.verdict import DETERMINISTIC, NON_DETERMINISTIC, Failure, Verdict, attempt, render_outcome
from .errors import SparkdetError
from .graphx import algorithms as A
from .graphx import oracles as O
from .graphx.graph import GraphRdd, message_map
from .io import load_graph, parse_input, parse_value, read_text
from .opdsl import OperatorTriple, resolve
from .report import RunReport
from .values import Pair, render, to_json

EXIT_OK, EXIT_NONDET, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3

CHAOTIC = {
    AGGREGATE: C.aggregate,
    REDUCE: C.reduce,
    TREE_AGGREGATE: C.tree_aggregate,
    TREE_REDUCE: C.tree_reduce,
    AGGREGATE_BY_KEY: C.aggregate_by_key,
    REDUCE_BY_KEY: C.reduce_by_key,
}
GRAPH_ALGORITHMS = ("indegrees", "components", "triangle", "cfl")


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v <= MASK64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--seed", type=_u64, default=0, help="root seed for every chaotic choice (default 0)")
    g.add_argument("--trials", type=_positive, default=None, help="number of seeded runs")
    g.add_argument("--partitions", type=_positive, default=None,
                   help="repartition flat input into this many partitions per trial")
    g.add_argument("--cap", type=_positive, default=6, help="largest input the oracle enumerates exhaustively")
    g.add_argument("--json", metavar="PATH", default=None, help="write the JSON report here ('-' for stdout)")
    g.add_argument("--domain", default="-2..2", help="lo..hi, a JSON array of values, or a file holding either")
    return p


def _operators(p: argparse.ArgumentParser) -> None:
    p.add_argument("--z", help="zero element as JSON ('none' for the absent optional)")
    p.add_argument("--seq", help="seq operator name")
    p.add_argument("--comb", help="comb operator name (the merge for reduce-style combinators)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="sparkdet", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", parents=[common], help="run a chaotic combinator over seeded trials")
    sim.add_argument("combinator", choices=COMBINATORS)
    _operators(sim)
    sim.add_argument("--input", required=True, help="JSON list, list of partitions, or a file")

    chk = sub.add_parser("check", parents=[common], help="decide determinism from algebraic laws on a domain")
    chk.add_argument("combinator", choices=COMBINATORS + (AGGREGATE_MESSAGES,))
    _operators(chk)
    chk.add_argument("--grade", type=_positive, default=None,
                     help="only check law instances whose inputs total at most this many elements")
    chk.add_argument("--steps", type=_positive, default=checks.DEFAULT_STEPS, help="closure depth")
    chk.add_argument("--max-size", type=_positive, default=checks.DEFAULT_MAX_SIZE, help="closure size cap")
    chk.add_argument("--budget", type=_positive, default=10**6, help="law instances before sampling")

    orc = sub.add_parser("oracle", parents=[common], help="enumerate every partitioning and plan of one input")
    orc.add_argument("combinator", choices=COMBINATORS)
    _operators(orc)
    orc.add_argument("--input", required=True, help="JSON list or a file")
    orc.add_argument("--no-shrink", action="store_true", help="report the first counterexample as found")

    cs = sub.add_parser("case-study", parents=[common], help="reproduce a numerical or graph case study")
    cs.add_argument("name", choices=tuple(STUDIES))
    cs.add_argument("--points", type=_positive, default=None, help="odd-integral sample count (default 10^6)")
    cs.add_argument("--n", type=_positive, default=None, help="copies of each data value")
    cs.add_argument("--edges", default=None, help="graph studies: edge TSV instead of the bundled graph")
    cs.add_argument("--vertices", default=None, help="graph studies: vertex TSV")
    cs.add_argument("--k", type=_positive, default=None, help="cfl: number of colours (default max degree + 1)")
    cs.add_argument("--beta", default="0.5", help="cfl: damping in (0, 1)")

    gr = sub.add_parser("graph", parents=[common], help="run a graph algorithm on TSV files")
    gr.add_argument("algorithm", choices=GRAPH_ALGORITHMS)
    gr.add_argument("--edges", required=True, help="edge TSV: src<TAB>dst[<TAB>attr]")
    gr.add_argument("--vertices", default=None, help="vertex TSV: id<TAB>attr")
    gr.add_argument("--k", type=_positive, default=None, help="cfl: number of colours")
    gr.add_argument("--beta", default="0.5", help="cfl: damping in (0, 1)")
    gr.add_argument("--max-iters", type=int, default=10_000, help="pregel iteration cap")
    return parser


# helpers -----------------------------------------------------------------


class UsageError(Exception):
    pass


def build_ops(args, combinator: str) -> Any:
    if needs_triple(combinator):
        missing = [f"--{n}" for n in ("z", "seq", "comb") if getattr(args, n) is None]
        if missing:
            raise UsageError(f"{combinator} needs {', '.join(missing)}")
        seq, comb = resolve(args.seq), resolve(args.comb)
        zero = parse_value(args.z)
        # JSON has one number type; "--z 0" for an f64 accumulator means 0.0
        if type(zero) is int and "f64" in (seq.in_sorts[0], seq.out_sort):
            zero = float(zero)
        return OperatorTriple(zero, seq, comb)
    if args.comb is None:
        raise UsageError(f"{combinator} needs --comb")
    return resolve(args.comb)


def _ops_params(args) -> dict:
    return {k: getattr(args, k) for k in ("z", "seq", "comb") if getattr(args, k, None) is not None}


def _print_verdict(v: Verdict, out) -> None:
    print(f"verdict: {v.status} ({v.label or v.method})", file=out)
    if v.domain:
        print(f"  scope: {v.domain}", file=out)
    for r in v.law_reports:
        line = f"  {r.law:<14} {r.status:<8} [{r.approximation}, {r.checked} checked]"
        if r.witness is not None:
            w = ", ".join(render_outcome(x) for x in r.witness)
            line += f" witness ({w}): {render_outcome(r.lhs)} vs {render_outcome(r.rhs)}"
        print(line, file=out)
        if r.note:
            print(f"      {r.note}", file=out)
    if v.counterexample is not None:
        print(f"  counterexample: {v.counterexample.summary()}", file=out)
    for w in v.warnings:
        print(f"  warning: {w}", file=out)


def _status_code(status: str) -> int:
    if status == DETERMINISTIC:
        return EXIT_OK
    if status == NON_DETERMINISTIC:
        return EXIT_NONDET
    return EXIT_UNKNOWN


def _json_value(v) -> Any:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Failure):
        return v.to_json()
    return to_json(v)


# subcommands -------------------------------------------------------------


def cmd_simulate(args, report: RunReport, out) -> int:
    combinator = args.combinator
    ops = build_ops(args, combinator)
    parsed = parse_input(args.input, pairs=combinator in BY_KEY_COMBINATORS)
    trials = args.trials or 100
    report.params.update({"combinator": combinator, **_ops_params(args), "trials": trials,
                          "partitions": args.partitions, "explicitPartitions": parsed.explicit})
    run = CHAOTIC[combinator]
    for i, ch in enumerate(trial_sources(args.seed, trials)):
        state = ch.state()
        if parsed.explicit:
            rdd = parsed.partitions
        elif args.partitions:
            rdd = repartition_into(ch, parsed.values, args.partitions)
        else:
            rdd = repartition(ch, parsed.values)
        result = attempt(run, ch, ops, rdd)
        if combinator in BY_KEY_COMBINATORS and type(result) is not Failure:
            result = normalize_by_key(result)
        report.add_trial(i, state, result)
    ref = attempt(reference, combinator, ops, parsed.values)
    report.extra["reference"] = _json_value(ref)
    doc = report.to_json()
    print(f"{combinator}: {trials} trials, {doc['distinct']} distinct output(s); reference {render_outcome(ref)}",
          file=out)
    for row in doc["census"]:
        print(f"  {row['count']:>6}  {render_outcome_json(row['value'])}", file=out)
    return EXIT_OK


def render_outcome_json(v) -> str:
    import json

    return json.dumps(v, separators=(",", ":"))


def cmd_check(args, report: RunReport, out) -> int:
    combinator = args.combinator
    ops = build_ops(args, REDUCE_BY_KEY if combinator == AGGREGATE_MESSAGES else combinator)
    text, _ = read_text(args.domain)
    dom = parse_domain(text.strip())
    v = checks.check(combinator, ops, dom, grade=args.grade, steps=args.steps, max_size=args.max_size,
                     budget=args.budget, seed=args.seed, cap=args.cap)
    report.params.update({"combinator": combinator, **_ops_params(args), "domain": dom.describe(),
                          "grade": args.grade, "steps": args.steps, "maxSize": args.max_size,
                          "budget": args.budget})
    report.verdicts.append(v)
    _print_verdict(v, out)
    return _status_code(v.status)


def cmd_oracle(args, report: RunReport, out) -> int:
    combinator = args.combinator
    ops = build_ops(args, combinator)
    parsed = parse_input(args.input, pairs=combinator in BY_KEY_COMBINATORS)
    v = oracle(combinator, ops, parsed.values, cap=args.cap, samples=(args.trials or 2000), seed=args.seed)
    if v.counterexample is not None and not args.no_shrink:
        small = shrink(v.counterexample, ops, cap=args.cap)
        v = dataclasses.replace(v, counterexample=small)
    report.params.update({"combinator": combinator, **_ops_params(args), "input": [to_json(x) for x in parsed.values],
                          "cap": args.cap})
    report.verdicts.append(v)
    _print_verdict(v, out)
    return _status_code(v.status)


def _load_user_graph(args) -> GraphRdd | None:
    if args.edges is None:
        return None
    return load_graph(args.edges, args.vertices)


def cmd_case_study(args, report: RunReport, out) -> int:
    name = args.name
    kw: dict = {"seed": args.seed}
    if args.trials:
        kw["trials"] = args.trials
    if name == "odd-integral":
        if args.points:
            kw["points"] = args.points
        if args.partitions:
            kw["partitions"] = args.partitions
    elif name in ("standard-scaler", "gradient-sum"):
        if args.n:
            kw["n"] = args.n
        if args.partitions:
            kw["partitions"] = args.partitions
    else:
        g = _load_user_graph(args)
        if g is not None:
            kw["graph"] = g
        if name == "cfl":
            kw["beta"] = args.beta
            if args.k:
                kw["k"] = args.k
    res: CaseResult = STUDIES[name](**kw)
    report.params.update(res.params)
    for i, o in enumerate(res.outputs):
        report.trials.append({"trial": i, "output": _json_value(o)})
        report.outputs.append(o)
    report.extra.update({"exact": _json_value(res.exact), "reference": _json_value(res.reference),
                         "notes": res.notes})
    if res.agrees is not None:
        report.extra["agreesWithOracle"] = res.agrees
    print(f"case study {name}: {len(res.outputs)} trials, {res.distinct} distinct output(s)", file=out)
    if res.exact is not None:
        print(f"  exact: {_json_value(res.exact) if isinstance(res.exact, Fraction) else render(res.exact)}",
              file=out)
    if res.reference is not None:
        print(f"  single-partition reference: {render(res.reference)}", file=out)
    for value, count in res.census.most_common(10):
        print(f"  {count:>6}  {value}", file=out)
    if res.distinct > 10:
        print(f"  ... {res.distinct - 10} more", file=out)
    for note in res.notes:
        print(f"  note: {note}", file=out)
    if res.agrees is False:
        print("  MISMATCH against the direct oracle", file=out)
        return EXIT_NONDET
    return EXIT_OK


def cmd_graph(args, report: RunReport, out) -> int:
    g = load_graph(args.edges, args.vertices, vertex_parts=args.partitions or 1, edge_parts=args.partitions or 1)
    ch = ChaosSource(args.seed)
    algo = args.algorithm
    report.params.update({"algorithm": algo, "vertices": len(g.vertices()), "edges": len(g.edges())})
    code = EXIT_OK
    if algo == "cfl":
        k = args.k or max(2, _max_degree(g) + 1)
        res = A.cfl_coloring(g, k, args.beta, seed=args.seed, chaos=ch, max_iters=args.max_iters)
        result = A.coloring_of(res)
        proper = A.is_proper(g, result)
        report.params.update({"k": k, "beta": args.beta, "maxIters": args.max_iters})
        report.extra.update({"iterations": res.iterations, "converged": res.converged, "proper": proper})
        print(f"cfl: {res.iterations} iteration(s), converged={res.converged}, proper={proper}", file=out)
        code = EXIT_OK if res.converged else EXIT_UNKNOWN
        expected = None
    elif algo == "components":
        res = A.connected_components(g, chaos=ch, max_iters=args.max_iters)
        result, expected = res.attrs, O.union_find_components(g)
        report.extra.update({"iterations": res.iterations, "converged": res.converged})
    elif algo == "triangle":
        result, expected = message_map(A.triangle_count(g, ch)), O.brute_force_triangles(g)
    else:
        result, expected = message_map(A.in_degrees(g, ch)), O.direct_in_degrees(g)
    rows = sorted(result.items())
    report.extra["result"] = [to_json(Pair(k, v)) for k, v in rows]
    for vid, val in rows:
        print(f"{vid}\t{render(val)}", file=out)
    if expected is not None:
        agrees = dict(rows) == expected
        report.extra["agreesWithOracle"] = agrees
        if not agrees:
            print("MISMATCH against the direct oracle", file=out)
            code = EXIT_NONDET
    return code


def _max_degree(g: GraphRdd) -> int:
    from .casestudies import max_degree

    return max_degree(g)


COMMANDS = {
    "simulate": cmd_simulate,
    "check": cmd_check,
    "oracle": cmd_oracle,
    "case-study": cmd_case_study,
    "graph": cmd_graph,
}


def run(argv: Sequence[str], out=None, err=None) -> tuple[int, RunReport | None]:
    """Execute a command line; returns the exit code and the report (None on usage errors)."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return (EXIT_USAGE if e.code else EXIT_OK), None
    report = RunReport(command=list(argv), subcommand=args.command, seed=args.seed)
    human = out if args.json != "-" else err
    start = time.perf_counter()
    try:
        code = COMMANDS[args.command](args, report, human)
    except (UsageError, SparkdetError, TypeError, ValueError) as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE, None
    report.exit_code = code
    report.wall_time = round(time.perf_counter() - start, 6)
    if args.json == "-":
        out.write(report.dumps())
    elif args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(report.dumps())
    return code, report


def main(argv: Sequence[str] | None = None) -> int:
    code, _ = run(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
