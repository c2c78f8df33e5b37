"""Rdd model, chaotic primitives and the exhaustive enumerators behind the oracle.

An Rdd is a tuple of partitions and a partition is a tuple of Values.
Every chaotic primitive takes its :class:`ChaosSource` explicitly, so the same
source state always reproduces the same choice.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .chaos import ChaosSource
from .errors import CapExceeded, InvalidPlan
from .values import Value, canon

Partition = tuple
Rdd = tuple

DEFAULT_CAP = 6


def make_rdd(parts: Sequence[Sequence[Value]]) -> Rdd:
    return tuple(tuple(p) for p in parts)


def flatten(rdd: Rdd) -> tuple:
    return tuple(x for part in rdd for x in part)


def permutation(chaos: ChaosSource, n: int) -> list[int]:
    """Fisher-Yates permutation of ``range(n)``."""
    idx = list(range(n))
    for i in range(n - 1, 0, -1):
        j = chaos.randbelow(i + 1)
        idx[i], idx[j] = idx[j], idx[i]
    return idx


def shuffle(chaos: ChaosSource, xs: Sequence[Value]) -> list[Value]:
    return [xs[i] for i in permutation(chaos, len(xs))]


def chaotic_map(chaos: ChaosSource, f: Callable[[Value], Value], xs: Sequence[Value]) -> list[Value]:
    return shuffle(chaos, [f(x) for x in xs])


def chaotic_concat_map(chaos: ChaosSource, f: Callable[[Value], Sequence[Value]], xs: Sequence[Value]) -> list[Value]:
    return [y for ys in chaotic_map(chaos, lambda x: tuple(f(x)), xs) for y in ys]


@dataclass(frozen=True)
class Partitioning:
    """One concrete outcome of repartitioning a list of length ``len(perm)``.

    ``sizes`` are the block lengths in order. A zero entry is an empty block,
    which only the enumerator produces on request.
    """

    perm: tuple[int, ...]
    sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")
        if sum(self.sizes) != len(self.perm) or any(s < 0 for s in self.sizes):
            raise ValueError(f"block sizes {self.sizes} do not cover {len(self.perm)} elements")

    def apply(self, xs: Sequence[Value]) -> Rdd:
        if len(xs) != len(self.perm):
            raise ValueError(f"partitioning is for {len(self.perm)} elements, got {len(xs)}")
        permuted = [xs[i] for i in self.perm]
        out, at = [], 0
        for s in self.sizes:
            out.append(tuple(permuted[at:at + s]))
            at += s
        return tuple(out)

    def to_json(self) -> dict:
        return {"perm": list(self.perm), "sizes": list(self.sizes)}


def _sizes_from_cuts(n: int, cuts: Sequence[int]) -> tuple[int, ...]:
    bounds = [0, *sorted(cuts), n]
    return tuple(b - a for a, b in zip(bounds, bounds[1:]))


def random_sizes(chaos: ChaosSource, n: int) -> tuple[int, ...]:
    """Uniform composition of ``n``: each of the n-1 gaps is cut with probability 1/2."""
    if n == 0:
        return ()
    cuts = [g for g in range(1, n) if chaos.next_u64() >> 63]
    return _sizes_from_cuts(n, cuts)


def random_sizes_exact(chaos: ChaosSource, n: int, parts: int) -> tuple[int, ...]:
    """Uniform composition of ``n`` into exactly ``min(parts, n)`` non-empty blocks."""
    if n == 0:
        return ()
    parts = max(1, min(parts, n))
    gaps = list(range(1, n))
    # partial Fisher-Yates picks parts-1 distinct cut positions
    for i in range(parts - 1):
        j = i + chaos.randbelow(len(gaps) - i)
        gaps[i], gaps[j] = gaps[j], gaps[i]
    return _sizes_from_cuts(n, gaps[: parts - 1])


def draw_partitioning(chaos: ChaosSource, n: int, parts: int | None = None) -> Partitioning:
    perm = tuple(permutation(chaos, n))
    sizes = random_sizes(chaos, n) if parts is None else random_sizes_exact(chaos, n, parts)
    return Partitioning(perm, sizes)


def repartition(chaos: ChaosSource, xs: Sequence[Value]) -> Rdd:
    """Shuffle, then split at a uniformly chosen composition into non-empty blocks."""
    return draw_partitioning(chaos, len(xs)).apply(xs)


def repartition_into(chaos: ChaosSource, xs: Sequence[Value], parts: int) -> Rdd:
    """Like :func:`repartition` but with ``min(parts, len(xs))`` blocks."""
    return draw_partitioning(chaos, len(xs), parts).apply(xs)


def contiguous(xs: Sequence[Value], parts: int) -> Rdd:
    """Deterministic near-equal contiguous slices, like parallelizing a local list."""
    n = len(xs)
    parts = max(1, min(parts, n)) if n else 0
    return tuple(tuple(xs[i * n // parts:(i + 1) * n // parts]) for i in range(parts))


# enumerators -------------------------------------------------------------


def compositions(n: int) -> Iterator[tuple[int, ...]]:
    """All 2^(n-1) ways to split n ordered elements into non-empty blocks."""
    if n == 0:
        yield ()
        return
    for mask in range(1 << (n - 1)):
        yield _sizes_from_cuts(n, [g + 1 for g in range(n - 1) if mask >> g & 1])


def with_one_empty_block(sizes: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    for pos in range(len(sizes) + 1):
        yield sizes[:pos] + (0,) + sizes[pos:]


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise CapExceeded(f"length {n} exceeds enumeration cap {cap}")


def enumerate_partitionings(
    n: int,
    allow_empty_blocks: bool = False,
    cap: int = DEFAULT_CAP,
    perms: Sequence[tuple[int, ...]] | None = None,
) -> Iterator[Partitioning]:
    _check_cap(n, cap)
    comps = list(compositions(n))
    if allow_empty_blocks:
        comps = comps + [s for c in comps for s in with_one_empty_block(c)]
    for perm in perms if perms is not None else itertools.permutations(range(n)):
        for sizes in comps:
            yield Partitioning(tuple(perm), sizes)


def all_partitionings(xs: Sequence[Value], allow_empty_blocks: bool = False, cap: int = DEFAULT_CAP) -> Iterator[Rdd]:
    """Every permutation of ``xs`` split into contiguous blocks, lazily."""
    for p in enumerate_partitionings(len(xs), allow_empty_blocks, cap):
        yield p.apply(xs)


def count_partitionings(n: int) -> int:
    return math.factorial(n) * (1 << (n - 1)) if n else 1


def all_reduction_orders(n: int, cap: int = DEFAULT_CAP) -> Iterator[tuple[int, ...]]:
    """Every sequence of adjacent-merge indices that reduces n items to one."""
    if n < 1:
        raise InvalidPlan("a reduction plan needs at least one sub-result")
    _check_cap(n, cap)

    def go(m: int) -> Iterator[tuple[int, ...]]:
        if m == 1:
            yield ()
            return
        for i in range(m - 1):
            for rest in go(m - 1):
                yield (i, *rest)

    yield from go(n)


def random_plan(chaos: ChaosSource, n: int) -> tuple[int, ...]:
    if n < 1:
        raise InvalidPlan("a reduction plan needs at least one sub-result")
    return tuple(chaos.randbelow(m - 1) for m in range(n, 1, -1))


def distinct_permutations(xs: Sequence[Value], key=None) -> Iterator[tuple[int, ...]]:
    """Index permutations of ``xs`` whose value sequences are pairwise distinct."""
    key = key or canon
    keys = [key(x) for x in xs]
    seen = set()
    for perm in itertools.permutations(range(len(xs))):
        k = tuple(keys[i] for i in perm)
        if k not in seen:
            seen.add(k)
            yield perm
