"""Power sums, Schur polynomials and the Schur-Weyl distribution."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Sequence

import numpy as np

from ._errors import InternalConsistencyError, ValidationError
from .partitions import Partition, dim_standard, enumerate_partitions, _horizontal_strips
from .symgroup import character, class_size

__all__ = [
    "ZERO_CUTOFF",
    "validate_prob_vector",
    "support_length",
    "power_sum",
    "schur_poly",
    "schur_poly_ssyt",
    "schur_poly_characters",
    "SchurWeylDistribution",
    "sw_distribution",
    "sw_sample",
]

ZERO_CUTOFF = 1e-15
SCHUR_AGREEMENT_TOL = 1e-10
SW_NORMALIZATION_TOL = 1e-10


def validate_prob_vector(alpha: Sequence[float], tol: float = 1e-12) -> np.ndarray:
    a = np.asarray(alpha, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ValidationError("probability vector must be a nonempty 1-d sequence")
    if np.any(~np.isfinite(a)) or np.any(a < 0):
        raise ValidationError(f"probability vector has negative or non-finite entries: {a}")
    if abs(a.sum() - 1.0) > tol:
        raise ValidationError(f"probability vector sums to {a.sum()!r}, not 1")
    return a


def support_length(alpha: Sequence[float]) -> int:
    return int(np.sum(np.abs(np.asarray(alpha, dtype=float)) > ZERO_CUTOFF))


def power_sum(lam: Sequence[int], alpha: Sequence[float]) -> float:
    a = np.asarray(alpha, dtype=float)
    out = 1.0
    for part in Partition(lam):
        out *= float(np.sum(a**part))
    return out


def schur_poly_ssyt(lam: Sequence[int], alpha: Sequence[float]) -> float:
    """Sum of alpha^T over semistandard tableaux T with entries in [len(alpha)].

    Tableaux are built as chains of horizontal strips, one per letter, and
    the chain prefix sums are memoized on the intermediate shape.
    """
    lam = Partition(lam)
    a = [float(x) if abs(x) > ZERO_CUTOFF else 0.0 for x in alpha]
    if len(lam) > sum(1 for x in a if x != 0.0):
        return 0.0
    outer = tuple(lam)
    letters = len(a)

    @lru_cache(maxsize=None)
    def rec(idx: int, inner: tuple[int, ...]) -> float:
        filled = sum(inner)
        if filled == lam.n:
            return 1.0
        if idx == letters:
            return 0.0
        total = 0.0
        for size in range(lam.n - filled, -1, -1):
            weight = a[idx] ** size
            if weight == 0.0 and size > 0:
                continue
            for nu in _horizontal_strips(outer, inner, size):
                total += weight * rec(idx + 1, nu)
        return total

    return rec(0, (0,) * len(outer))


def schur_poly_characters(lam: Sequence[int], alpha: Sequence[float]) -> float:
    """(1/n!) sum over classes of |class| chi_lam(class) p_class(alpha)."""
    lam = Partition(lam)
    n = lam.n
    total = 0.0
    for ct in enumerate_partitions(n):
        total += class_size(ct) * character(lam, ct) * power_sum(ct, alpha)
    return total / factorial(n)


def schur_poly(lam: Sequence[int], alpha: Sequence[float], cross_check: bool = True) -> float:
    """Schur polynomial s_lam(alpha).

    The tableau sum is returned; with ``cross_check`` the character
    expansion is also evaluated and a disagreement beyond 1e-10 (scaled by
    the size of alpha) raises ``InternalConsistencyError``.
    """
    value = schur_poly_ssyt(lam, alpha)
    if cross_check:
        other = schur_poly_characters(lam, alpha)
        scale = max(1.0, float(np.sum(np.abs(alpha))) ** Partition(lam).n)
        if abs(value - other) > SCHUR_AGREEMENT_TOL * scale:
            raise InternalConsistencyError(
                f"Schur polynomial routes disagree for {tuple(lam)}: {value!r} vs {other!r}"
            )
    return value


@dataclass(frozen=True)
class SchurWeylDistribution:
    n: int
    support: dict[Partition, float]

    def probability(self, lam: Sequence[int]) -> float:
        return self.support.get(Partition(lam), 0.0)

    def expectation(self, f) -> float:
        return sum(p * f(lam) for lam, p in self.support.items())

    def to_json(self) -> str:
        return json.dumps({json.dumps(list(lam)): p for lam, p in self.support.items()})


def sw_distribution(n: int, alpha: Sequence[float]) -> SchurWeylDistribution:
    """SW^n(alpha)(lam) = dim(lam) s_lam(alpha), over lam with len <= support of alpha."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    a = validate_prob_vector(alpha)
    support = {}
    for lam in enumerate_partitions(n, max(1, support_length(a))):
        p = dim_standard(lam) * schur_poly(lam, a)
        support[lam] = p
    total = sum(support.values())
    if abs(total - 1.0) > SW_NORMALIZATION_TOL:
        raise InternalConsistencyError(f"Schur-Weyl distribution sums to {total!r}")
    return SchurWeylDistribution(n=n, support=support)


def sw_sample(rng: np.random.Generator, dist: SchurWeylDistribution, count: int) -> list[Partition]:
    """i.i.d. draws by inverse CDF over the finite support."""
    if count <= 0:
        return []
    labels = list(dist.support)
    cdf = np.cumsum([max(dist.support[lam], 0.0) for lam in labels])
    draws = np.searchsorted(cdf, rng.random(count) * cdf[-1], side="right")
    draws = np.minimum(draws, len(labels) - 1)
    return [labels[i] for i in draws]
