"""Permutations, cycle types and irreducible characters of S_n."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Sequence

import numpy as np

from ._errors import ValidationError
from .partitions import Partition, enumerate_partitions

__all__ = [
    "DEFAULT_TABLE_CAP",
    "validate_permutation",
    "cycle_type",
    "sign",
    "inverse",
    "centralizer_order",
    "class_size",
    "character",
    "CharacterTable",
    "character_table",
]

DEFAULT_TABLE_CAP = 10


def validate_permutation(images: Sequence[int]) -> tuple[int, ...]:
    """Check 0-based one-line notation and return it as a tuple."""
    images = tuple(int(x) for x in images)
    if sorted(images) != list(range(len(images))):
        raise ValidationError(f"not a permutation of 0..{len(images) - 1}: {images}")
    return images


def cycle_type(sigma: Sequence[int]) -> Partition:
    sigma = validate_permutation(sigma)
    seen = [False] * len(sigma)
    lengths = []
    for start in range(len(sigma)):
        if seen[start]:
            continue
        length, x = 0, start
        while not seen[x]:
            seen[x] = True
            x = sigma[x]
            length += 1
        lengths.append(length)
    return Partition(sorted(lengths, reverse=True))


def sign(sigma: Sequence[int]) -> int:
    ct = cycle_type(sigma)
    return -1 if (ct.n - len(ct)) % 2 else 1


def inverse(sigma: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(sigma)
    for x, y in enumerate(sigma):
        out[y] = x
    return tuple(out)


def centralizer_order(ct: Sequence[int]) -> int:
    """z_ct = prod_l l^{m_l} m_l!."""
    z = 1
    for length, mult in Partition(ct).multiplicities().items():
        z *= length**mult * factorial(mult)
    return z


def class_size(ct: Sequence[int]) -> int:
    ct = Partition(ct)
    return factorial(ct.n) // centralizer_order(ct)


def _beta_set(lam: tuple[int, ...]) -> tuple[int, ...]:
    k = len(lam)
    return tuple(lam[i] + (k - 1 - i) for i in range(k))


def _from_beta_set(beta: Sequence[int]) -> tuple[int, ...]:
    beta = sorted(beta, reverse=True)
    k = len(beta)
    return tuple(p for p in (beta[i] - (k - 1 - i) for i in range(k)) if p > 0)


@lru_cache(maxsize=None)
def _mn(lam: tuple[int, ...], ct: tuple[int, ...]) -> int:
    # Murnaghan-Nakayama: strip a border strip of length ct[0] from lam.
    # On beta-numbers a strip of length r is b -> b - r; its height is the
    # number of beta-numbers jumped over.
    if not ct:
        return 1 if not lam else 0
    r, rest = ct[0], ct[1:]
    beta = _beta_set(lam)
    present = set(beta)
    total = 0
    for b in beta:
        target = b - r
        if target < 0 or target in present:
            continue
        height = sum(1 for c in beta if target < c < b)
        new = _from_beta_set([target if c == b else c for c in beta])
        total += (-1) ** height * _mn(new, rest)
    return total


def character(lam: Sequence[int], ct: Sequence[int]) -> int:
    """chi_lam evaluated on any permutation of cycle type ``ct`` (exact)."""
    lam, ct = Partition(lam), Partition(ct)
    if lam.n != ct.n:
        raise ValidationError(f"size mismatch: |{tuple(lam)}| != |{tuple(ct)}|")
    return _mn(tuple(lam), tuple(ct))


@dataclass(frozen=True)
class CharacterTable:
    """Rows are irreps, columns conjugacy classes, both in reverse-lex order."""

    n: int
    irreps: tuple[Partition, ...]
    classes: tuple[Partition, ...]
    values: np.ndarray = field(repr=False)
    class_sizes: dict[Partition, int] = field(repr=False)

    def __getitem__(self, key: tuple[Sequence[int], Sequence[int]]) -> int:
        lam, ct = key
        return int(self.values[self.irreps.index(Partition(lam)), self.classes.index(Partition(ct))])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["irrep"] + [_label(c) for c in self.classes])
        for lam, row in zip(self.irreps, self.values):
            writer.writerow([_label(lam)] + [int(v) for v in row])
        return buf.getvalue()


def _label(p: Partition) -> str:
    return ",".join(str(x) for x in p)


def character_table(n: int, cap: int = DEFAULT_TABLE_CAP) -> CharacterTable:
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if n > cap:
        raise ValidationError(f"character table for n={n} exceeds cap n <= {cap}")
    parts = tuple(enumerate_partitions(n))
    values = np.array([[character(lam, ct) for ct in parts] for lam in parts], dtype=np.int64)
    sizes = {ct: class_size(ct) for ct in parts}
    return CharacterTable(n=n, irreps=parts, classes=parts, values=values, class_sizes=sizes)
