"""Integer partitions and Young-diagram combinatorics.

Partitions are immutable, hashable tuples with trailing zeros stripped.
Factorials, hook products and rising factorials use Python integers, so
there is no overflow at any size; the practical cap is the enumeration
cost (n <= 20 is comfortable).
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import factorial, prod
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from ._errors import ValidationError

__all__ = [
    "Partition",
    "Box",
    "enumerate_partitions",
    "boxes",
    "content",
    "hook_length",
    "conjugate",
    "dim_standard",
    "rising_factorial",
    "kostka",
    "ssyt_count_with_weight",
    "count_ssyt",
    "semistandard_tableaux",
    "standard_tableaux",
    "majorizes",
    "refines",
    "partition_sum",
    "ordered_set_partitions",
    "robin_hood_transfers",
    "robin_hood_pairs",
]


class Partition(tuple):
    """A nonincreasing tuple of positive integers.

    Trailing zeros are dropped on construction, so ``Partition((2, 1, 0))``
    equals ``Partition((2, 1))``.
    """

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()):
        parts = [int(p) for p in parts]
        while parts and parts[-1] == 0:
            parts.pop()
        for a, b in zip(parts, parts[1:]):
            if b > a:
                raise ValidationError(f"partition parts must be nonincreasing: {parts}")
        if any(p < 0 for p in parts):
            raise ValidationError(f"partition parts must be positive: {parts}")
        return super().__new__(cls, parts)

    @property
    def n(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def factorial(self) -> int:
        """lambda! = prod of the factorials of the parts."""
        return prod(factorial(p) for p in self)

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self:
            out[p] = out.get(p, 0) + 1
        return out

    def padded(self, length: int) -> tuple[int, ...]:
        if length < len(self):
            raise ValidationError(f"cannot pad {self} to length {length}")
        return tuple(self) + (0,) * (length - len(self))

    def __repr__(self) -> str:
        return f"Partition({tuple(self)!r})"


class Box(NamedTuple):
    """A cell of a Young diagram, 1-based (row, col)."""

    row: int
    col: int


def enumerate_partitions(n: int, max_len: int | None = None) -> list[Partition]:
    """All partitions of ``n`` with at most ``max_len`` parts.

    Returned in reverse lexicographic order, e.g. (3), (2,1), (1,1,1).
    ``n == 0`` yields the single empty partition.
    """
    if n < 0:
        raise ValidationError(f"n must be nonnegative, got {n}")
    if max_len is None:
        max_len = max(n, 1)
    if max_len < 1:
        raise ValidationError(f"max_len must be positive, got {max_len}")
    return list(_partitions_cached(n, max_len))


@lru_cache(maxsize=None)
def _partitions_cached(n: int, max_len: int) -> tuple[Partition, ...]:
    out: list[Partition] = []

    def rec(remaining: int, largest: int, prefix: list[int]) -> None:
        if remaining == 0:
            out.append(Partition(prefix))
            return
        if len(prefix) == max_len:
            return
        for part in range(min(remaining, largest), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(n, n, [])
    return tuple(out)


def boxes(lam: Sequence[int]) -> Iterator[Box]:
    for i, row_len in enumerate(lam, start=1):
        for j in range(1, row_len + 1):
            yield Box(i, j)


def content(box: Box) -> int:
    return box.col - box.row


def conjugate(lam: Sequence[int]) -> Partition:
    if not lam:
        return Partition()
    return Partition(sum(1 for p in lam if p > j) for j in range(lam[0]))


def hook_length(lam: Sequence[int], box: Box) -> int:
    conj = conjugate(lam)
    return lam[box.row - 1] - box.col + conj[box.col - 1] - box.row + 1


def dim_standard(lam: Sequence[int]) -> int:
    """Number of standard tableaux of shape ``lam`` (hook length formula)."""
    lam = Partition(lam)
    conj = conjugate(lam)
    hooks = 1
    for b in boxes(lam):
        hooks *= lam[b.row - 1] - b.col + conj[b.col - 1] - b.row + 1
    return factorial(lam.n) // hooks


def rising_factorial(d: int, lam: Sequence[int]) -> int:
    """prod over boxes of (d + content); zero iff len(lam) > d for d >= 0."""
    if d < 0:
        raise ValidationError(f"d must be nonnegative, got {d}")
    return prod((d + content(b) for b in boxes(lam)), start=1)


def count_ssyt(lam: Sequence[int], d: int) -> int:
    """Semistandard tableaux of shape ``lam`` with entries in [d]."""
    lam = Partition(lam)
    num = dim_standard(lam) * rising_factorial(d, lam)
    q, r = divmod(num, factorial(lam.n))
    assert r == 0
    return q


def _horizontal_strips(outer: tuple[int, ...], inner: tuple[int, ...], size: int) -> Iterator[tuple[int, ...]]:
    """Shapes ``nu`` with inner <= nu <= outer, nu/inner a horizontal strip of ``size`` boxes."""
    rows = len(outer)
    inner = inner + (0,) * (rows - len(inner))
    nu = list(inner)

    def rec(i: int, left: int) -> Iterator[tuple[int, ...]]:
        if i == rows:
            if left == 0:
                yield tuple(nu)
            return
        # a horizontal strip may not extend row i past the old end of row i-1
        cap = outer[i] if i == 0 else min(outer[i], inner[i - 1])
        for add in range(min(left, cap - inner[i]), -1, -1):
            nu[i] = inner[i] + add
            yield from rec(i + 1, left - add)
        nu[i] = inner[i]

    yield from rec(0, size)


def ssyt_count_with_weight(lam: Sequence[int], weight: Sequence[int]) -> int:
    """Number of SSYT of shape ``lam`` whose entry ``i`` occurs ``weight[i-1]`` times.

    ``weight`` may be any composition (zeros and any order allowed).
    Counted by backtracking over the chain of horizontal strips.
    """
    lam = Partition(lam)
    weight = tuple(int(w) for w in weight)
    if any(w < 0 for w in weight):
        raise ValidationError(f"weights must be nonnegative: {weight}")
    if sum(weight) != lam.n:
        raise ValidationError(f"|shape| = {lam.n} but |weight| = {sum(weight)}")
    outer = tuple(lam)

    @lru_cache(maxsize=None)
    def rec(idx: int, inner: tuple[int, ...]) -> int:
        if idx == len(weight):
            return 1 if inner == outer else 0
        return sum(rec(idx + 1, nu) for nu in _horizontal_strips(outer, inner, weight[idx]))

    return rec(0, (0,) * len(outer))


def kostka(lam: Sequence[int], mu: Sequence[int]) -> int:
    """Kostka number K_{lam, mu}: SSYT of shape ``lam`` and weight ``mu``."""
    lam, mu = Partition(lam), Partition(mu)
    if lam.n != mu.n:
        raise ValidationError(f"size mismatch: |{tuple(lam)}| != |{tuple(mu)}|")
    return ssyt_count_with_weight(lam, mu)


def semistandard_tableaux(lam: Sequence[int], max_entry: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Brute-force generator of SSYT (rows of entries) with entries in [max_entry]."""
    lam = Partition(lam)
    cells = list(boxes(lam))
    grid: dict[tuple[int, int], int] = {}

    def rec(k: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        if k == len(cells):
            yield tuple(tuple(grid[(i, j)] for j in range(1, lam[i - 1] + 1)) for i in range(1, len(lam) + 1))
            return
        i, j = cells[k]
        lo = 1
        if j > 1:
            lo = max(lo, grid[(i, j - 1)])
        if i > 1:
            lo = max(lo, grid[(i - 1, j)] + 1)
        for v in range(lo, max_entry + 1):
            grid[(i, j)] = v
            yield from rec(k + 1)
        grid.pop((i, j), None)

    yield from rec(0)


def standard_tableaux(lam: Sequence[int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    lam = Partition(lam)
    n = lam.n
    for t in semistandard_tableaux(lam, n):
        flat = [v for row in t for v in row]
        if len(set(flat)) == n:
            yield t


def majorizes(a: Sequence[float], b: Sequence[float], tol: float = 1e-12) -> bool:
    """True iff ``a`` majorizes ``b`` (prefix sums of the sorted vectors).

    Shorter input is zero-padded. Totals must agree (exactly for integers,
    within ``tol`` otherwise).
    """
    a = np.asarray(a)
    b = np.asarray(b)
    size = max(a.size, b.size)
    a = np.sort(np.concatenate([a.astype(float), np.zeros(size - a.size)]))[::-1]
    b = np.sort(np.concatenate([b.astype(float), np.zeros(size - b.size)]))[::-1]
    integral = np.all(a == np.round(a)) and np.all(b == np.round(b))
    slack = 0.0 if integral else tol
    if abs(a.sum() - b.sum()) > slack:
        raise ValidationError(f"unequal totals: {a.sum()} vs {b.sum()}")
    return bool(np.all(np.cumsum(a) >= np.cumsum(b) - slack))


def partition_sum(*parts: Sequence[int]) -> Partition:
    """Multiset union of partitions: (2,1) + (1) = (2,1,1)."""
    merged: list[int] = []
    for p in parts:
        merged.extend(Partition(p))
    return Partition(sorted(merged, reverse=True))


def refines(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """True iff ``mu`` splits as a sum of partitions nu_i of the rows lam_i.

    Equivalently: the parts of ``mu`` can be packed into bins of sizes
    ``lam`` exactly. Decided by backtracking.
    """
    lam, mu = Partition(lam), Partition(mu)
    if lam.n != mu.n:
        raise ValidationError(f"size mismatch: |{tuple(lam)}| != |{tuple(mu)}|")
    free = list(lam)

    def place(k: int) -> bool:
        if k == len(mu):
            return all(f == 0 for f in free)
        tried: set[int] = set()
        for b in range(len(free)):
            if free[b] >= mu[k] and free[b] not in tried:
                tried.add(free[b])
                free[b] -= mu[k]
                if place(k + 1):
                    free[b] += mu[k]
                    return True
                free[b] += mu[k]
        return False

    return place(0)


def ordered_set_partitions(items: Sequence, mu: Sequence[int]) -> list[tuple[tuple, ...]]:
    """Ordered partitions of ``items`` into blocks of sizes mu_1, mu_2, ...

    Blocks are sorted tuples; there are n!/mu! of them.
    """
    mu = Partition(mu)
    items = list(items)
    if len(set(items)) != len(items):
        raise ValidationError(f"items must be distinct: {items}")
    if len(items) != mu.n:
        raise ValidationError(f"{len(items)} items cannot be split by {tuple(mu)}")
    out: list[tuple[tuple, ...]] = []

    def rec(k: int, rest: list, blocks: list[tuple]) -> None:
        if k == len(mu):
            out.append(tuple(blocks))
            return
        for block in combinations(rest, mu[k]):
            chosen = set(block)
            blocks.append(tuple(sorted(block)))
            rec(k + 1, [x for x in rest if x not in chosen], blocks)
            blocks.pop()

    rec(0, sorted(items), [])
    return out


def robin_hood_transfers(lam: Sequence[int]) -> list[Partition]:
    """All partitions reachable by moving one box from a longer row to a shorter one."""
    lam = Partition(lam)
    rows = list(lam) + [0]
    out: set[Partition] = set()
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if rows[i] - rows[j] >= 2:
                new = rows.copy()
                new[i] -= 1
                new[j] += 1
                out.add(Partition(sorted(new, reverse=True)))
    return sorted(out, reverse=True)


def robin_hood_pairs(rng: np.random.Generator, n: int, count: int) -> list[tuple[Partition, Partition]]:
    """Random pairs (mu, lam) with mu majorizing lam, mu != lam.

    Each pair starts from a uniformly chosen partition that admits a
    transfer and applies between one and three random transfers.
    """
    if n < 2:
        raise ValidationError(f"robin-hood pairs need n >= 2, got {n}")
    starts = [p for p in enumerate_partitions(n) if robin_hood_transfers(p)]
    pairs = []
    for _ in range(count):
        mu = starts[rng.integers(len(starts))]
        lam = mu
        for step in range(int(rng.integers(1, 4))):
            moves = robin_hood_transfers(lam)
            if not moves:
                break
            lam = moves[rng.integers(len(moves))]
        pairs.append((mu, lam))
    return pairs
