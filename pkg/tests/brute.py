"""Independent brute-force references used to derive the frozen test values.

Nothing here imports the package's enumerators or combinators.
"""

from __future__ import annotations

import itertools
from functools import reduce


def splits(xs):
    """Every way to cut a sequence into non-empty contiguous blocks."""
    n = len(xs)
    if n == 0:
        yield []
        return
    for cuts in itertools.product((False, True), repeat=n - 1):
        blocks, cur = [], [xs[0]]
        for x, cut in zip(xs[1:], cuts):
            if cut:
                blocks.append(cur)
                cur = []
            cur.append(x)
        blocks.append(cur)
        yield blocks


def partitionings(xs):
    for perm in itertools.permutations(xs):
        yield from splits(list(perm))


def bracketings(items, f):
    """All results of combining ``items`` left to right under every full bracketing."""
    if len(items) == 1:
        return [items[0]]
    out = []
    for i in range(1, len(items)):
        for left in bracketings(items[:i], f):
            for right in bracketings(items[i:], f):
                out.append(f(left, right))
    return out


def aggregate_outputs(z, seq, comb, xs):
    outs = set()
    for blocks in partitionings(xs):
        pres = [reduce(seq, b, z) for b in blocks]
        for order in itertools.permutations(pres):
            outs.add(reduce(comb, order, z))
    return outs


def reduce_outputs(comb, xs):
    outs = set()
    for blocks in partitionings(xs):
        pres = [reduce(comb, b) for b in blocks]
        for order in itertools.permutations(pres):
            outs.add(reduce(comb, order))
    return outs


def tree_reduce_outputs(comb, xs):
    outs = set()
    for blocks in partitionings(xs):
        pres = [reduce(comb, b) for b in blocks]
        for order in itertools.permutations(pres):
            outs.update(bracketings(list(order), comb))
    return outs


def components(n_vertices, edges):
    """Smallest reachable id per vertex by repeated relaxation."""
    label = {v: v for v in n_vertices}
    changed = True
    while changed:
        changed = False
        for a, b in edges:
            m = min(label[a], label[b])
            if label[a] != m or label[b] != m:
                label[a] = label[b] = m
                changed = True
    return label
