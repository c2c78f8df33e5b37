"""Numerical and graph workloads whose chaotic runs are compared with exact answers."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any, Callable

from . import combinators as C
from .chaos import ChaosSource, trial_sources
from .core import contiguous, repartition_into
from .graphx import algorithms as A
from .graphx import oracles as O
from .graphx.graph import GraphRdd, message_map
from .io import load_graph
from .opdsl import OperatorTriple, resolve
from .values import Pair, render

SUM_F64 = OperatorTriple(0.0, resolve("sum_f64"), resolve("sum_f64"))
MEAN_PAIR = OperatorTriple(Pair(0.0, 0), resolve("mean_pair_add"), resolve("mean_pair_merge"))


@dataclass
class CaseResult:
    name: str
    params: dict
    outputs: list
    exact: Any = None
    reference: Any = None
    notes: list[str] = field(default_factory=list)
    agrees: bool | None = None

    @property
    def census(self) -> Counter:
        return Counter(render(o) for o in self.outputs)

    @property
    def distinct(self) -> int:
        return len(self.census)


# numerical studies -------------------------------------------------------


def odd_power_terms(points: int, power: int = 73, lo: int = -2, hi: int = 2) -> list[float]:
    """Trapezoid areas under ``x**power`` on ``[lo, hi]`` with ``points`` samples.

    Sample i sits at ``hi * (2i - (points-1)) / (points-1)`` so the grid is
    exactly symmetric in floating point; the areas then come in exact
    positive/negative pairs and their real sum is 0.
    """
    if points < 2:
        raise ValueError("need at least two sample points")
    if lo != -hi:
        raise ValueError("the symmetric grid needs lo == -hi")
    m = points - 1
    xs = [hi * (2 * i - m) / m for i in range(points)]
    ys = [x**power for x in xs]
    return [(xs[i + 1] - xs[i]) * (ys[i] + ys[i + 1]) / 2 for i in range(m)]


def exact_sum(values) -> Fraction:
    return sum((Fraction(v) for v in values), Fraction(0))


def odd_integral(*, points: int = 10**6, partitions: int = 20, trials: int = 20, seed: int = 0) -> CaseResult:
    """Chaotic treeAggregate of the areas, sliced contiguously like a local list."""
    terms = odd_power_terms(points)
    rdd = contiguous(terms, partitions)
    outputs = [C.tree_aggregate(ch, SUM_F64, rdd) for ch in trial_sources(seed, trials)]
    reference = C.aggregate_dt(SUM_F64, (tuple(terms),))
    exact = exact_sum(terms)
    return CaseResult("odd-integral", {"points": points, "partitions": partitions, "trials": trials, "seed": seed},
                      outputs, exact=exact, reference=reference,
                      notes=["integral of x^73 over [-2, 2]; the exact sum of the floating-point areas is 0"])


def scaler_data(n: int) -> list[float]:
    return [v for _ in range(n) for v in (-1e20, 600.0, 1e20)]


def standard_scaler(*, n: int = 100, partitions: int = 100, trials: int = 50, seed: int = 0,
                    tree: bool = True) -> CaseResult:
    """Mean of ``n`` copies of -1e20, 600, 1e20 via a (sum, count) aggregate."""
    data = scaler_data(n)
    run = C.tree_aggregate if tree else C.aggregate
    outputs = []
    for ch in trial_sources(seed, trials):
        rdd = repartition_into(ch, data, partitions)
        acc = run(ch, MEAN_PAIR, rdd)
        outputs.append(acc.key / acc.value)
    exact = exact_sum(data) / len(data)
    ref = C.aggregate_dt(MEAN_PAIR, (tuple(data),))
    return CaseResult("standard-scaler",
                      {"n": n, "partitions": partitions, "trials": trials, "seed": seed,
                       "combinator": "treeAggregate" if tree else "aggregate"},
                      outputs, exact=exact, reference=ref.key / ref.value,
                      notes=["standardizing 200 should give 0; any other mean shifts it"])


def subgradients(n: int) -> list[float]:
    """Logistic-loss subgradients at w = 0 for points -1e20 (label 1), 600 (label 0), 1e20 (label 1)."""
    pts = [(-1e20, 1), (600.0, 0), (1e20, 1)]
    return [(0.5 - y) * x for _ in range(n) for x, y in pts]


def gradient_sum(*, n: int = 20, partitions: int = 20, trials: int = 50, seed: int = 0) -> CaseResult:
    terms = subgradients(n)
    outputs = []
    for ch in trial_sources(seed, trials):
        outputs.append(C.tree_aggregate(ch, SUM_F64, repartition_into(ch, terms, partitions)))
    return CaseResult("gradient-sum", {"n": n, "partitions": partitions, "trials": trials, "seed": seed},
                      outputs, exact=exact_sum(terms), reference=C.aggregate_dt(SUM_F64, (tuple(terms),)),
                      notes=["sum of subgradients 5e19, 300, -5e19 repeated n times"])


# graph studies -----------------------------------------------------------


def bundled_path(name: str) -> str:
    return str(resources.files("sparkdet") / "data" / name)


def bundled_graph(name: str) -> GraphRdd:
    if name == "components":
        return load_graph(bundled_path("components.tsv"), bundled_path("components_vertices.tsv"))
    return load_graph(bundled_path(f"{name}.tsv"))


def _graph_study(name: str, g: GraphRdd, run: Callable[[GraphRdd, ChaosSource], dict], oracle: dict,
                 trials: int, seed: int, params: dict) -> CaseResult:
    outputs = [tuple(sorted(run(g, ch).items())) for ch in trial_sources(seed, trials)]
    expected = tuple(sorted(oracle.items()))
    agrees = all(o == expected for o in outputs)
    return CaseResult(name, {**params, "trials": trials, "seed": seed},
                      [tuple(Pair(k, v) for k, v in o) for o in outputs],
                      exact=tuple(Pair(k, v) for k, v in expected), agrees=agrees)


def triangle_study(*, graph: GraphRdd | None = None, trials: int = 20, seed: int = 0) -> CaseResult:
    g = graph or bundled_graph("triangles")
    return _graph_study("triangle", g, lambda g, ch: message_map(A.triangle_count(g, ch)),
                        O.brute_force_triangles(g), trials, seed, {"graph": "triangles.tsv" if graph is None else "input"})


def components_study(*, graph: GraphRdd | None = None, trials: int = 20, seed: int = 0) -> CaseResult:
    g = graph or bundled_graph("components")
    return _graph_study("components", g, lambda g, ch: A.connected_components(g, chaos=ch).attrs,
                        O.union_find_components(g), trials, seed,
                        {"graph": "components.tsv" if graph is None else "input"})


def indegrees_study(*, graph: GraphRdd | None = None, trials: int = 20, seed: int = 0) -> CaseResult:
    g = graph or bundled_graph("components")
    return _graph_study("indegrees", g, lambda g, ch: message_map(A.in_degrees(g, ch)),
                        O.direct_in_degrees(g), trials, seed,
                        {"graph": "components.tsv" if graph is None else "input"})


def max_degree(g: GraphRdd) -> int:
    deg = Counter()
    for e in g.edges():
        deg[e.src] += 1
        deg[e.dst] += 1
    return max(deg.values(), default=0)


def cfl_study(*, graph: GraphRdd | None = None, k: int | None = None, beta=0.5, trials: int = 20, seed: int = 0,
              max_iters: int = 10_000) -> CaseResult:
    """Colourings from independent seeds; each converged run must be proper."""
    g = graph or bundled_graph("triangles")
    k = k or max_degree(g) + 1
    outputs, converged, proper = [], 0, True
    for ch in trial_sources(seed, trials):
        res = A.cfl_coloring(g, k, beta, seed=ch.next_u64(), chaos=ch, max_iters=max_iters)
        colors = A.coloring_of(res)
        if res.converged:
            converged += 1
            proper = proper and A.is_proper(g, colors)
        outputs.append(tuple(Pair(v, c) for v, c in sorted(colors.items())))
    notes = [f"{converged} of {trials} runs converged within {max_iters} iterations"]
    return CaseResult("cfl", {"graph": "triangles.tsv" if graph is None else "input", "k": k, "beta": str(beta),
                              "trials": trials, "seed": seed}, outputs, agrees=proper, notes=notes)


STUDIES = {
    "odd-integral": odd_integral,
    "standard-scaler": standard_scaler,
    "gradient-sum": gradient_sum,
    "triangle": triangle_study,
    "components": components_study,
    "indegrees": indegrees_study,
    "cfl": cfl_study,
}
