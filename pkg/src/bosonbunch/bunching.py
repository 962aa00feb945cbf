"""Generalized bunching probabilities of permutation-invariant boson states.

The workhorse identity: for a state singly occupying ``sites`` with
auxiliary irrep distribution q,

    b(S | U, rho) = sum_lambda q_lambda * ImmBar_lambda(G(S | U, sites)),

where G is the Gram matrix of the evolved site columns restricted to S.
Modes and sites are 0-based throughout the library.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from ._errors import InternalConsistencyError, ValidationError
from .linalg import (
    IMMANANT_CAP,
    gram_matrix,
    haar_unitary,
    normalized_immanants,
    permanent,
    random_psd,
    validate_subset,
)
from .partitions import (
    Partition,
    dim_standard,
    enumerate_partitions,
    kostka,
    majorizes,
    ordered_set_partitions,
    refines,
    rising_factorial,
)
from .symfunc import sw_distribution, validate_prob_vector

__all__ = [
    "PROB_TOL",
    "IrrepDistribution",
    "StateSpec",
    "ExperimentConfig",
    "Report",
    "partially_labelled_q_exact",
    "aux_irrep_distribution",
    "BunchResult",
    "bunch_details",
    "bunch_probability",
    "bunch_partially_labelled_direct",
    "refinement_monotonicity_check",
    "haar_mean_ratio",
    "mean_bunch_closed",
    "mean_bunch_mc",
    "subset_avg_contributions",
    "subset_avg_estimator",
    "exact_subset_average",
    "lieb_scan",
    "random_majorizing_pair",
    "schur_convexity_probe",
    "weak_bunching_gap",
]

PROB_TOL = 1e-10
UNITARY_TOL = 1e-10
STATE_KINDS = ("indistinguishable", "pure_irrep", "partially_labelled", "uniform", "explicit_q")


@dataclass(frozen=True)
class IrrepDistribution:
    """Probability weights q over partitions of n."""

    n: int
    q: Mapping[Partition, float]

    def __post_init__(self):
        q = {Partition(lam): float(p) for lam, p in self.q.items()}
        for lam, p in q.items():
            if lam.n != self.n:
                raise ValidationError(f"partition {tuple(lam)} is not a partition of {self.n}")
            if p < -1e-12:
                raise ValidationError(f"negative weight {p} on {tuple(lam)}")
        total = sum(q.values())
        if abs(total - 1.0) > 1e-10:
            raise ValidationError(f"irrep weights sum to {total!r}, not 1")
        object.__setattr__(self, "q", q)

    def max_length(self) -> int:
        return max((len(lam) for lam, p in self.q.items() if p > 0), default=0)

    def to_dict(self) -> dict[str, float]:
        return {",".join(map(str, lam)): p for lam, p in self.q.items()}


@dataclass(frozen=True)
class StateSpec:
    """Description of a permutation-invariant input state.

    ``param`` holds the partition (pure_irrep, partially_labelled), the
    probability vector (uniform) or the IrrepDistribution (explicit_q).
    """

    kind: str
    sites: tuple[int, ...]
    hidden_dim: int
    param: Any = None

    def __post_init__(self):
        if self.kind not in STATE_KINDS:
            raise ValidationError(f"unknown state kind {self.kind!r}")
        sites = tuple(int(x) for x in self.sites)
        if len(set(sites)) != len(sites) or any(x < 0 for x in sites):
            raise ValidationError(f"sites must be distinct nonnegative integers: {sites}")
        if not sites:
            raise ValidationError("at least one site is required")
        object.__setattr__(self, "sites", sites)
        n, L = len(sites), int(self.hidden_dim)
        if L < 1:
            raise ValidationError(f"hidden dimension must be >= 1, got {L}")
        if self.kind in ("pure_irrep", "partially_labelled"):
            lam = Partition(self.param)
            object.__setattr__(self, "param", lam)
            if lam.n != n:
                raise ValidationError(f"pattern {tuple(lam)} does not partition n={n}")
            if self.kind == "partially_labelled" and len(lam) > L:
                raise ValidationError(f"label pattern length {len(lam)} exceeds hidden dimension L={L}")
            if self.kind == "pure_irrep" and L < n:
                raise ValidationError(f"pure-irrep state requires L >= n (L={L}, n={n})")
        elif self.kind == "uniform":
            alpha = validate_prob_vector(self.param)
            if alpha.size != L:
                raise ValidationError(f"alpha has {alpha.size} entries but L={L}")
            object.__setattr__(self, "param", tuple(float(x) for x in alpha))
        elif self.kind == "explicit_q":
            q = self.param if isinstance(self.param, IrrepDistribution) else IrrepDistribution(n, self.param)
            if q.n != n:
                raise ValidationError(f"q is over partitions of {q.n}, not n={n}")
            if q.max_length() > L:
                raise ValidationError(f"q has weight on partitions longer than L={L}")
            object.__setattr__(self, "param", q)

    @property
    def n(self) -> int:
        return len(self.sites)

    @classmethod
    def indistinguishable(cls, sites: Sequence[int], hidden_dim: int = 1) -> "StateSpec":
        return cls("indistinguishable", tuple(sites), hidden_dim)

    @classmethod
    def pure_irrep(cls, lam: Sequence[int], sites: Sequence[int], hidden_dim: int) -> "StateSpec":
        return cls("pure_irrep", tuple(sites), hidden_dim, lam)

    @classmethod
    def partially_labelled(cls, mu: Sequence[int], sites: Sequence[int], hidden_dim: int) -> "StateSpec":
        return cls("partially_labelled", tuple(sites), hidden_dim, mu)

    @classmethod
    def uniform(cls, alpha: Sequence[float], sites: Sequence[int]) -> "StateSpec":
        return cls("uniform", tuple(sites), len(alpha), alpha)

    @classmethod
    def explicit_q(cls, q: Mapping[Sequence[int], float] | IrrepDistribution, sites: Sequence[int], hidden_dim: int) -> "StateSpec":
        return cls("explicit_q", tuple(sites), hidden_dim, q)

    def describe(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind, "sites": list(self.sites), "hidden_dim": self.hidden_dim}
        if isinstance(self.param, Partition):
            out["pattern"] = list(self.param)
        elif isinstance(self.param, IrrepDistribution):
            out["q"] = self.param.to_dict()
        elif self.param is not None:
            out["alpha"] = list(self.param)
        return out


@dataclass(frozen=True)
class ExperimentConfig:
    """Visible dimension m, particle number n, hidden dimension L, target subset S."""

    m: int
    n: int
    L: int
    subset: tuple[int, ...]
    seed: int = 0

    def __post_init__(self):
        if self.m < 1 or self.n < 1 or self.L < 1:
            raise ValidationError(f"m, n, L must be positive: {self.m}, {self.n}, {self.L}")
        if self.n > self.m:
            raise ValidationError(f"n={self.n} exceeds m={self.m}")
        object.__setattr__(self, "subset", validate_subset(self.subset, self.m))

    @property
    def k(self) -> int:
        return len(self.subset)

    def with_subset(self, subset: Iterable[int]) -> "ExperimentConfig":
        return ExperimentConfig(self.m, self.n, self.L, tuple(subset), self.seed)

    def to_dict(self) -> dict[str, Any]:
        return {"m": self.m, "n": self.n, "L": self.L, "subset": list(self.subset), "seed": self.seed}


@dataclass
class Report:
    """Scan or check output; serializes to {config, per_trial, summary, findings}."""

    config: dict[str, Any]
    per_trial: list[dict[str, Any]] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)
    findings: list[dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _map_trials(fn: Callable[[int], Any], count: int, workers: int = 1) -> list[Any]:
    # results are assembled in trial order whatever the worker count
    if workers <= 1:
        return [fn(j) for j in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


def _trial_rng(seed: int, j: int) -> np.random.Generator:
    return np.random.default_rng([seed, j])


def partially_labelled_q_exact(mu: Sequence[int]) -> dict[Partition, Fraction]:
    """q_lam = mu! dim(lam) K_{lam,mu} / n!, exactly."""
    mu = Partition(mu)
    n = mu.n
    return {
        lam: Fraction(mu.factorial() * dim_standard(lam) * kostka(lam, mu), factorial(n))
        for lam in enumerate_partitions(n)
        if kostka(lam, mu)
    }


def aux_irrep_distribution(spec: StateSpec) -> IrrepDistribution:
    n = spec.n
    if spec.kind == "indistinguishable":
        q = {Partition((n,)): 1.0}
    elif spec.kind == "pure_irrep":
        q = {spec.param: 1.0}
    elif spec.kind == "partially_labelled":
        q = {lam: float(p) for lam, p in partially_labelled_q_exact(spec.param).items()}
    elif spec.kind == "uniform":
        q = dict(sw_distribution(n, spec.param).support)
    else:
        q = dict(spec.param.q)
    return IrrepDistribution(n, q)


def _check_unitary(u: np.ndarray, m: int) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (m, m):
        raise ValidationError(f"unitary must be {m} x {m}, got {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(m))) > UNITARY_TOL:
        raise ValidationError("matrix is not unitary within 1e-10")
    return u


def _check_compat(cfg: ExperimentConfig, spec: StateSpec) -> None:
    if spec.n != cfg.n:
        raise ValidationError(f"state has {spec.n} particles but config has n={cfg.n}")
    if spec.hidden_dim != cfg.L:
        raise ValidationError(f"state hidden dimension {spec.hidden_dim} != config L={cfg.L}")
    if max(spec.sites) >= cfg.m:
        raise ValidationError(f"sites {spec.sites} out of range for m={cfg.m}")
    if cfg.n > IMMANANT_CAP:
        raise ValidationError(f"n={cfg.n} exceeds immanant cap {IMMANANT_CAP}")


def _clamp(raw: float, what: str = "probability") -> float:
    if raw < -PROB_TOL or raw > 1 + PROB_TOL:
        raise InternalConsistencyError(f"{what} {raw!r} outside [0, 1] beyond tolerance")
    return min(1.0, max(0.0, raw))


@dataclass(frozen=True)
class BunchResult:
    value: float
    raw: float
    q: IrrepDistribution
    gram: np.ndarray = field(repr=False)

    def gram_eigenvalues(self) -> list[float]:
        return [float(x) for x in np.linalg.eigvalsh(self.gram)]


def bunch_details(
    u: np.ndarray, cfg: ExperimentConfig, spec: StateSpec, q: IrrepDistribution | None = None
) -> BunchResult:
    """Bunching probability with its irrep weights and Gram matrix.

    ``q`` may be passed in to skip recomputing aux_irrep_distribution(spec)
    when the same state is evaluated against many unitaries.
    """
    _check_compat(cfg, spec)
    u = _check_unitary(u, cfg.m)
    q = aux_irrep_distribution(spec) if q is None else q
    g = gram_matrix(u, spec.sites, cfg.subset)
    imm = normalized_immanants(g)
    raw = sum(p * imm[lam].real for lam, p in q.q.items())
    return BunchResult(value=_clamp(raw), raw=raw, q=q, gram=g)


def bunch_probability(u: np.ndarray, cfg: ExperimentConfig, spec: StateSpec) -> float:
    """Probability that all particles exit in ``cfg.subset``."""
    return bunch_details(u, cfg, spec).value


def bunch_partially_labelled_direct(u: np.ndarray, cfg: ExperimentConfig, mu: Sequence[int], sites: Sequence[int]) -> float:
    """(mu!/n!) sum over ordered set partitions R of the sites of prod_r perm(G[r, r]).

    Each factor is the bunching probability of the perfectly indistinguishable
    state on the block r.
    """
    mu = Partition(mu)
    spec = StateSpec.partially_labelled(mu, sites, cfg.L)
    _check_compat(cfg, spec)
    u = _check_unitary(u, cfg.m)
    g = gram_matrix(u, spec.sites, cfg.subset)
    block_perm: dict[tuple[int, ...], float] = {}
    total = 0.0
    for blocks in ordered_set_partitions(range(cfg.n), mu):
        term = 1.0
        for r in blocks:
            if r not in block_perm:
                block_perm[r] = permanent(g[np.ix_(r, r)]).real
            term *= block_perm[r]
        total += term
    raw = total * mu.factorial() / factorial(cfg.n)
    return _clamp(raw)


def refinement_monotonicity_check(
    u: np.ndarray, cfg: ExperimentConfig, lam: Sequence[int], mu: Sequence[int], sites: Sequence[int], tol: float = 1e-9
) -> dict[str, Any]:
    """Compare the coarser pattern ``lam`` with its refinement ``mu``."""
    lam, mu = Partition(lam), Partition(mu)
    if not refines(lam, mu):
        raise ValidationError(f"{tuple(mu)} is not a refinement of {tuple(lam)}")
    b_lam = bunch_probability(u, cfg, StateSpec.partially_labelled(lam, sites, cfg.L))
    b_mu = bunch_probability(u, cfg, StateSpec.partially_labelled(mu, sites, cfg.L))
    gap = b_lam - b_mu
    return {
        "lambda": list(lam),
        "mu": list(mu),
        "b_lambda": b_lam,
        "b_mu": b_mu,
        "gap": gap,
        "violation": gap < -tol,
    }


def haar_mean_ratio(k: int, m: int, lam: Sequence[int]) -> Fraction:
    """k^(up lam) / m^(up lam): Haar mean of ImmBar_lam over a k-subset of m modes."""
    return Fraction(rising_factorial(k, lam), rising_factorial(m, lam))


def mean_bunch_closed(n: int, m: int, k: int, alpha: Sequence[float]) -> float:
    """Haar-averaged bunching of the uniform state: E_{lam ~ SW^n(alpha)} k^(up lam)/m^(up lam)."""
    if n < 1 or n > m:
        raise ValidationError(f"need 1 <= n <= m, got n={n}, m={m}")
    if not 1 <= k <= m:
        raise ValidationError(f"subset size k={k} must lie in [1, {m}]")
    dist = sw_distribution(n, alpha)
    value = sum(p * float(haar_mean_ratio(k, m, lam)) for lam, p in dist.support.items())
    return _clamp(value, "mean bunching")


def mean_bunch_mc(
    seed: int, cfg: ExperimentConfig, spec: StateSpec, num_unitaries: int, workers: int = 1
) -> tuple[float, float]:
    """Sample mean and standard error of b(S|U, rho) over Haar-random U.

    Unitary j comes from the substream seeded by (seed, j), so the result
    does not depend on ``workers``.
    """
    if num_unitaries < 2:
        raise ValidationError("need at least 2 unitaries for a standard error")
    _check_compat(cfg, spec)
    q = aux_irrep_distribution(spec)

    def one(j: int) -> float:
        return bunch_details(haar_unitary(_trial_rng(seed, j), cfg.m), cfg, spec, q).value

    values = np.array(_map_trials(one, num_unitaries, workers))
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(num_unitaries))


def subset_avg_contributions(samples: Sequence[Sequence[int]], k: int, m: int) -> np.ndarray:
    """Per-sample C(m-t, k-t)/C(m, k) with t the number of occupied modes (0 if t > k).

    The value is the fraction of k-subsets of [m] containing every occupied
    mode, so its mean is unbiased for the uniform subset average of b.
    """
    if not 1 <= k <= m:
        raise ValidationError(f"subset size k={k} must lie in [1, {m}]")
    total = comb(m, k)
    out = np.empty(len(samples))
    for idx, occ in enumerate(samples):
        if len(occ) != m:
            raise ValidationError(f"occupation has {len(occ)} modes, expected {m}")
        t = sum(1 for c in occ if c)
        out[idx] = comb(m - t, k - t) / total if t <= k else 0.0
    return out


def subset_avg_estimator(samples: Sequence[Sequence[int]], k: int, m: int) -> float:
    if not samples:
        raise ValidationError("no samples")
    return float(subset_avg_contributions(samples, k, m).mean())


def exact_subset_average(u: np.ndarray, cfg: ExperimentConfig, spec: StateSpec, k: int) -> float:
    """Uniform average of b(S|U, rho) over every k-subset S of [m]."""
    from itertools import combinations

    values = [bunch_probability(u, cfg.with_subset(s), spec) for s in combinations(range(cfg.m), k)]
    return float(np.mean(values))


def lieb_scan(seed: int, n: int, trials: int, workers: int = 1, tol: float = 1e-9) -> Report:
    """Largest normalized immanant minus permanent over random PSD matrices.

    Matrices have random rank in [1, n] and are scaled to trace n; gaps are
    scale-invariant in sign. Positive gaps beyond ``tol`` are findings.
    """
    if not 1 <= n <= IMMANANT_CAP:
        raise ValidationError(f"n must lie in [1, {IMMANANT_CAP}], got {n}")
    top = Partition((n,))
    det_shape = Partition((1,) * n)

    def one(j: int) -> dict[str, Any]:
        rng = _trial_rng(seed, j)
        rank = int(rng.integers(1, n + 1))
        a = random_psd(rng, n, rank)
        a *= n / np.trace(a).real
        imm = {lam: v.real for lam, v in normalized_immanants(a).items()}
        others = [lam for lam in imm if lam != top] or [top]
        worst = max(others, key=lambda lam: imm[lam])
        return {
            "trial": j,
            "rank": rank,
            "worst_lambda": list(worst),
            "gap": imm[worst] - imm[top],
            "min_immanant": min(imm.values()),
            "det_gap": imm[det_shape] - min(imm.values()),
            "_matrix": a,
        }

    rows = _map_trials(one, trials, workers)
    report = Report(config={"seed": seed, "n": n, "trials": trials, "tol": tol})
    worst_row = max(rows, key=lambda r: r["gap"]) if rows else None
    for r in rows:
        a = r.pop("_matrix")
        report.per_trial.append(r)
        if r["gap"] > tol:
            report.findings.append({**r, "matrix": _matrix_dict(a), "kind": "lieb_counterexample_candidate"})
        if r is worst_row:
            report.summary["worst_matrix"] = _matrix_dict(a)
    if rows:
        report.summary.update(
            worst_gap=worst_row["gap"],
            worst_lambda=worst_row["worst_lambda"],
            worst_trial=worst_row["trial"],
            min_immanant=min(r["min_immanant"] for r in rows),
            max_det_gap=max(r["det_gap"] for r in rows),
        )
    return report


def _matrix_dict(a: np.ndarray) -> dict[str, Any]:
    return {"rows": a.shape[0], "cols": a.shape[1], "re": a.real.tolist(), "im": a.imag.tolist()}


def random_majorizing_pair(rng: np.random.Generator, L: int, transfers: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """(alpha, alpha') with alpha majorizing alpha'.

    alpha is Dirichlet(1,...,1); alpha' follows from random robin-hood
    transfers, each moving mass eps <= (a_i - a_j)/2 from a larger entry
    to a smaller one.
    """
    alpha = rng.dirichlet(np.ones(L))
    beta = alpha.copy()
    for _ in range(transfers):
        i, j = rng.choice(L, size=2, replace=False)
        if beta[i] < beta[j]:
            i, j = j, i
        eps = rng.uniform(0, 0.5) * (beta[i] - beta[j])
        beta[i] -= eps
        beta[j] += eps
    beta = np.clip(beta, 0.0, None)
    beta /= beta.sum()
    return alpha, beta


def schur_convexity_probe(
    seed: int, cfg: ExperimentConfig, pairs: int, sites: Sequence[int] | None = None, tol: float = 1e-12
) -> Report:
    """Per-unitary Schur convexity evidence for uniform states.

    Each trial draws a fixed Haar U and a majorizing pair; a negative gap
    b(alpha) - b(alpha') is reported as a finding. Exploration only: the
    per-unitary statement is open.
    """
    sites = tuple(range(cfg.n)) if sites is None else tuple(sites)
    report = Report(config={**cfg.to_dict(), "pairs": pairs, "sites": list(sites)})
    for j in range(pairs):
        rng = _trial_rng(seed, j)
        u = haar_unitary(rng, cfg.m)
        alpha, beta = random_majorizing_pair(rng, cfg.L)
        if not majorizes(alpha, beta):
            raise InternalConsistencyError("generated pair is not majorizing")
        b_a = bunch_probability(u, cfg, StateSpec.uniform(alpha, sites))
        b_b = bunch_probability(u, cfg, StateSpec.uniform(beta, sites))
        row = {"trial": j, "alpha": alpha.tolist(), "alpha_prime": beta.tolist(), "gap": b_a - b_b}
        report.per_trial.append(row)
        if row["gap"] < -tol:
            report.findings.append({**row, "kind": "per_unitary_schur_convexity_violation"})
    gaps = [r["gap"] for r in report.per_trial]
    report.summary = {"min_gap": min(gaps, default=0.0), "negative_count": len(report.findings)}
    return report


def weak_bunching_gap(u: np.ndarray, cfg: ExperimentConfig, spec: StateSpec) -> float:
    """b(S|U, spec) - b(S|U, indistinguishable); positive values would contradict the conjecture."""
    indist = StateSpec.indistinguishable(spec.sites, spec.hidden_dim)
    return bunch_probability(u, cfg, spec) - bunch_probability(u, cfg, indist)
