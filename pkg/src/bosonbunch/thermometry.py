"""Gibbs hidden states and mean bunching as a thermometer.

The Haar-mean bunching of a uniform state with Gibbs spectrum increases
strictly with inverse temperature whenever the spectrum is non-degenerate,
so a measured mean can be inverted for beta by bisection.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._errors import InternalConsistencyError, ValidationError
from .bunching import mean_bunch_closed

__all__ = [
    "MONOTONE_SLACK",
    "BETA_MAX",
    "EnergySpectrum",
    "gibbs",
    "ThermoCurve",
    "thermo_curve",
    "invert_temperature",
]

MONOTONE_SLACK = 1e-12
BETA_MAX = 50.0


@dataclass(frozen=True)
class EnergySpectrum:
    """Hidden single-particle energies, sorted, with the ground level at exactly 0."""

    levels: tuple[float, ...]

    def __post_init__(self):
        levels = tuple(float(x) for x in self.levels)
        if not levels:
            raise ValidationError("spectrum needs at least one level")
        if not all(math.isfinite(x) for x in levels):
            raise ValidationError("spectrum levels must be finite")
        if levels[0] != 0.0:
            raise ValidationError(f"lowest level must be exactly 0, got {levels[0]!r}")
        if any(b < a for a, b in zip(levels, levels[1:])):
            raise ValidationError(f"levels must be nondecreasing: {levels}")
        object.__setattr__(self, "levels", levels)

    @classmethod
    def from_unsorted(cls, levels: Sequence[float]) -> "EnergySpectrum":
        """Sort and shift so the minimum is 0."""
        arr = sorted(float(x) for x in levels)
        return cls(tuple(x - arr[0] for x in arr))

    @property
    def L(self) -> int:
        return len(self.levels)

    @property
    def degenerate(self) -> bool:
        return self.levels[-1] == self.levels[0]


def gibbs(spectrum: EnergySpectrum, beta: float) -> np.ndarray:
    """alpha_k = exp(-eps_k beta) / Z.

    ``beta = inf`` is the zero-temperature limit: uniform over the
    zero-energy levels.
    """
    beta = float(beta)
    if math.isnan(beta) or beta < 0:
        raise ValidationError(f"beta must be >= 0, got {beta!r}")
    eps = np.asarray(spectrum.levels)
    if math.isinf(beta):
        ground = (eps == 0.0).astype(float)
        return ground / ground.sum()
    # levels[0] == 0 is the minimum energy, so this is already max-subtracted
    w = np.exp(-beta * eps)
    return w / w.sum()


@dataclass(frozen=True)
class ThermoCurve:
    betas: np.ndarray
    values: np.ndarray
    n: int
    m: int
    k: int
    spectrum: EnergySpectrum = field(repr=False)

    def to_csv(self) -> str:
        lines = ["beta,mean_bunching"]
        lines += [f"{b!r},{v!r}" for b, v in zip(self.betas.tolist(), self.values.tolist())]
        return "\n".join(lines) + "\n"


def _check_sizes(spectrum: EnergySpectrum, n: int, m: int, k: int) -> None:
    if n > spectrum.L:
        raise ValidationError(f"n={n} exceeds hidden dimension L={spectrum.L}")
    if not 1 <= n <= m:
        raise ValidationError(f"need 1 <= n <= m, got n={n}, m={m}")
    if not 1 <= k <= m:
        raise ValidationError(f"need 1 <= k <= m, got k={k}, m={m}")


def _curve_value(spectrum: EnergySpectrum, n: int, m: int, k: int, beta: float) -> float:
    return mean_bunch_closed(n, m, k, gibbs(spectrum, beta))


def thermo_curve(
    spectrum: EnergySpectrum, n: int, m: int, k: int, betas: Sequence[float], workers: int = 1
) -> ThermoCurve:
    """Mean bunching on a grid of inverse temperatures.

    Raises InternalConsistencyError if a non-degenerate curve fails to
    increase (beyond MONOTONE_SLACK) along an increasing grid.
    """
    _check_sizes(spectrum, n, m, k)
    betas = np.asarray(betas, dtype=float)
    if betas.ndim != 1 or np.any(np.isnan(betas)) or np.any(betas < 0):
        raise ValidationError("beta grid must be a 1-d array of values >= 0")
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            values = list(pool.map(lambda b: _curve_value(spectrum, n, m, k, b), betas))
    else:
        values = [_curve_value(spectrum, n, m, k, b) for b in betas]
    values = np.asarray(values)
    if n >= 2 and not spectrum.degenerate:
        order = np.argsort(betas, kind="stable")
        b, v = betas[order], values[order]
        bad = np.nonzero((np.diff(b) > 0) & (np.diff(v) < -MONOTONE_SLACK))[0]
        if bad.size:
            i = int(bad[0])
            raise InternalConsistencyError(
                f"mean bunching decreased from {v[i]!r} at beta={b[i]!r} to {v[i + 1]!r} at beta={b[i + 1]!r}"
            )
    return ThermoCurve(betas, values, n, m, k, spectrum)


def invert_temperature(
    spectrum: EnergySpectrum,
    n: int,
    m: int,
    k: int,
    target: float,
    beta_max: float = BETA_MAX,
    tol: float = 1e-12,
) -> float:
    """Inverse temperature whose mean bunching equals ``target``, by bisection."""
    _check_sizes(spectrum, n, m, k)
    if n < 2:
        raise ValidationError("n=1 gives mean bunching k/m at every temperature; nothing to invert")
    if spectrum.degenerate:
        raise ValidationError("degenerate spectrum gives a constant curve; nothing to invert")
    if not (math.isfinite(beta_max) and beta_max > 0):
        raise ValidationError(f"beta_max must be positive and finite, got {beta_max!r}")
    lo, hi = 0.0, float(beta_max)
    y_lo = _curve_value(spectrum, n, m, k, lo)
    y_hi = _curve_value(spectrum, n, m, k, hi)
    if not y_lo <= target <= y_hi:
        raise ValidationError(
            f"target {target!r} outside [y(0), y({hi!r})] = [{y_lo!r}, {y_hi!r}]; "
            "the curve flattens exponentially, so targets near y(inf) are ill-conditioned"
        )
    if target == y_lo:
        return 0.0
    if target == y_hi:
        return hi
    # bisect until the value matches or the bracket stops shrinking
    while True:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            return mid
        y = _curve_value(spectrum, n, m, k, mid)
        if abs(y - target) < tol:
            return mid
        if y < target:
            lo = mid
        else:
            hi = mid
