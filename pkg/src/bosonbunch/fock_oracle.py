"""Brute-force ground truth for bunching probabilities.

Nothing here touches immanants or Schur polynomials. Two routes:

* dense: build the explicitly symmetrized first-quantized state on
  (C^m (x) C^L)^{(x)n}, evolve with (U (x) 1)^{(x)n}, and read visible
  occupation probabilities off definite-occupation overlaps;
* perm-sum: b = sum_sigma prod_x M[i_x, i_{sigma^-1(x)}] Tr(R(sigma) h)
  with M = U^dagger Pi_S U and h the auxiliary state.

Mixed states are handled by eigendecomposing the auxiliary state and
summing over pure components, so no (mL)^n x (mL)^n matrix is formed.
"""
from __future__ import annotations

import json
from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product
from math import comb, factorial, prod
from typing import Sequence

import numpy as np

from ._errors import InternalConsistencyError, ValidationError
from .bunching import ExperimentConfig, IrrepDistribution, StateSpec
from .partitions import Partition, enumerate_partitions
from .symgroup import character, inverse

__all__ = [
    "DENSE_CAP",
    "PERM_SUM_CAP",
    "enumerate_occupations",
    "zeta",
    "xi",
    "label_permutation_matrix",
    "isotypic_projector",
    "aux_state",
    "validate_aux_state",
    "oracle_bunch_perm_sum",
    "oracle_visible_distribution",
    "oracle_bunch",
    "extract_q",
    "sample_outcomes",
    "linearity_residual",
    "occupation_to_json",
    "distribution_to_json",
]

DENSE_CAP = 4096
PERM_SUM_CAP = 8


def enumerate_occupations(n: int, modes: int | Sequence) -> list[tuple[int, ...]]:
    """All occupations of ``n`` particles over the given modes, as count tuples.

    Counts are aligned with ``modes`` (or ``range(modes)``); there are
    C(n + |modes| - 1, n) of them.
    """
    size = modes if isinstance(modes, int) else len(modes)
    out = []
    for combo in combinations_with_replacement(range(size), n):
        counts = [0] * size
        for x in combo:
            counts[x] += 1
        out.append(tuple(counts))
    assert len(out) == comb(n + size - 1, n) if size else len(out) == (1 if n == 0 else 0)
    return out


def zeta(g: Sequence[int]) -> tuple[int, ...]:
    """Nondecreasing list of modes with mode x repeated g[x] times."""
    return tuple(x for x, c in enumerate(g) for _ in range(c))


def xi(modes: Sequence[int], size: int) -> tuple[int, ...]:
    """Occupation counts of a list of modes."""
    counts = [0] * size
    for x in modes:
        counts[x] += 1
    return tuple(counts)


def _g_factorial(g: Sequence[int]) -> int:
    return prod(factorial(c) for c in g)


def label_permutation_matrix(sigma: Sequence[int], L: int) -> np.ndarray:
    """R(sigma)|k_1..k_n> = |k_{sigma^-1(1)} .. k_{sigma^-1(n)}> on (C^L)^{(x)n}."""
    n = len(sigma)
    inv = inverse(sigma)
    dim = L**n
    r = np.zeros((dim, dim))
    for col, labels in enumerate(product(range(L), repeat=n)):
        image = tuple(labels[inv[x]] for x in range(n))
        r[np.ravel_multi_index(image, (L,) * n), col] = 1.0
    return r


@lru_cache(maxsize=None)
def _label_perms(n: int, L: int) -> tuple[tuple[tuple[int, ...], np.ndarray], ...]:
    return tuple((p, label_permutation_matrix(p, L)) for p in permutations(range(n)))


def isotypic_projector(lam: Sequence[int], n: int, L: int) -> np.ndarray:
    """(dim(lam)/n!) sum_sigma chi_lam(sigma) R(sigma^-1) on (C^L)^{(x)n}."""
    from .partitions import dim_standard
    from .symgroup import cycle_type

    lam = Partition(lam)
    out = np.zeros((L**n, L**n))
    for sigma, r in _label_perms(n, L):
        out += character(lam, cycle_type(sigma)) * r.T
    return out * dim_standard(lam) / factorial(n)


def _check_dense(n: int, dim: int) -> None:
    if dim**n > DENSE_CAP:
        raise ValidationError(f"dense dimension {dim}^{n} = {dim**n} exceeds cap {DENSE_CAP}")


def aux_state(spec: StateSpec) -> np.ndarray:
    """Auxiliary state h(rho): an L^n x L^n density matrix on label strings."""
    n, L = spec.n, spec.hidden_dim
    _check_dense(n, L)
    dim = L**n
    h = np.zeros((dim, dim), dtype=complex)
    shape = (L,) * n
    if spec.kind == "indistinguishable":
        idx = np.ravel_multi_index((0,) * n, shape)
        h[idx, idx] = 1.0
    elif spec.kind == "partially_labelled":
        mu_bar = tuple(label for label, size in enumerate(spec.param) for _ in range(size))
        for sigma in permutations(range(n)):
            inv = inverse(sigma)
            idx = np.ravel_multi_index(tuple(mu_bar[inv[x]] for x in range(n)), shape)
            h[idx, idx] += 1.0 / factorial(n)
    elif spec.kind == "uniform":
        alpha = np.asarray(spec.param)
        for labels in product(range(L), repeat=n):
            idx = np.ravel_multi_index(labels, shape)
            h[idx, idx] = prod(alpha[j] for j in labels)
    elif spec.kind == "pure_irrep":
        proj = isotypic_projector(spec.param, n, L)
        h = proj / np.trace(proj)
    else:
        for lam, p in spec.param.q.items():
            if p == 0.0:
                continue
            proj = isotypic_projector(lam, n, L)
            h += p * proj / np.trace(proj)
    return validate_aux_state(h)


def validate_aux_state(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if np.max(np.abs(h - h.conj().T)) > 1e-12:
        raise ValidationError("auxiliary state is not Hermitian")
    if abs(np.trace(h) - 1) > 1e-10:
        raise ValidationError(f"auxiliary state has trace {np.trace(h)}")
    if np.min(np.linalg.eigvalsh(h)) < -1e-10:
        raise ValidationError("auxiliary state is not positive semidefinite")
    return h


def _check_aux_shape(h: np.ndarray, n: int, L: int) -> None:
    if h.shape != (L**n, L**n):
        raise ValidationError(f"auxiliary state has shape {h.shape}, expected {L**n} x {L**n} for n={n}, L={L}")


def oracle_bunch_perm_sum(u: np.ndarray, cfg: ExperimentConfig, sites: Sequence[int], h: np.ndarray) -> float:
    """First-quantized permutation sum for b(S | U, rho) from the auxiliary state."""
    n, L = cfg.n, cfg.L
    if n > PERM_SUM_CAP:
        raise ValidationError(f"n={n} exceeds permutation-sum cap {PERM_SUM_CAP}")
    _check_aux_shape(h, n, L)
    u = np.asarray(u, dtype=complex)
    proj = np.zeros((cfg.m, cfg.m))
    proj[list(cfg.subset), list(cfg.subset)] = 1.0
    big_m = u.conj().T @ proj @ u
    sites = list(sites)
    total = 0j
    for sigma, r in _label_perms(n, L):
        inv = inverse(sigma)
        amp = prod(big_m[sites[x], sites[inv[x]]] for x in range(n))
        total += amp * np.trace(r @ h)
    if abs(total.imag) > 1e-10:
        raise InternalConsistencyError(f"permutation sum has imaginary part {total.imag}")
    return float(total.real)


@lru_cache(maxsize=None)
def _occupation_tables(n: int, m: int, L: int):
    """Definite-occupation bookkeeping on the m*L joint modes.

    Joint mode (site s, label l) has index s*L + l. Returns, for every joint
    occupation g: the flat tensor index of zeta(g), the weight n!/g!, and the
    index of its visible marginal among ``enumerate_occupations(n, m)``.
    """
    visible = enumerate_occupations(n, m)
    vis_index = {v: i for i, v in enumerate(visible)}
    flat, weight, vis = [], [], []
    for g in enumerate_occupations(n, m * L):
        modes = zeta(g)
        if xi(modes, m * L) != g:
            raise InternalConsistencyError("xi(zeta(g)) != g")
        flat.append(np.ravel_multi_index(modes, (m * L,) * n) if n else 0)
        weight.append(factorial(n) / _g_factorial(g))
        marginal = tuple(sum(g[s * L : (s + 1) * L]) for s in range(m))
        vis.append(vis_index[marginal])
    return visible, np.array(flat), np.array(weight), np.array(vis)


def _pure_components(h: np.ndarray) -> list[tuple[float, np.ndarray]]:
    evals, evecs = np.linalg.eigh(h)
    return [(float(p), evecs[:, k]) for k, p in enumerate(evals) if p > 1e-14]


def _symmetrized_state(psi_labels: np.ndarray, sites: Sequence[int], m: int, L: int) -> np.ndarray:
    """Explicit (1/sqrt(n!)) sum_sigma P(sigma) of sum_j psi(j) |(i_1,j_1),...,(i_n,j_n)>."""
    n = len(sites)
    shape = (m * L,) * n
    raw = np.zeros(shape, dtype=complex)
    for labels in product(range(L), repeat=n):
        amp = psi_labels[np.ravel_multi_index(labels, (L,) * n)]
        if amp != 0:
            raw[tuple(sites[x] * L + labels[x] for x in range(n))] += amp
    sym = np.zeros(shape, dtype=complex)
    for sigma in permutations(range(n)):
        sym += np.transpose(raw, sigma)
    return sym / np.sqrt(factorial(n))


def _evolve(state: np.ndarray, u: np.ndarray, L: int) -> np.ndarray:
    n = state.ndim
    m = u.shape[0]
    single = np.kron(u, np.eye(L))
    out = state
    for axis in range(n):
        out = np.moveaxis(np.tensordot(single, out, axes=([1], [axis])), 0, axis)
    assert out.shape == (m * L,) * n
    return out


def oracle_visible_distribution(u: np.ndarray, cfg: ExperimentConfig, spec: StateSpec) -> dict[tuple[int, ...], float]:
    """p(v | U, rho) for every visible occupation v of cfg.m modes."""
    n, m, L = cfg.n, cfg.m, cfg.L
    if spec.n != n or spec.hidden_dim != L:
        raise ValidationError("state and config disagree on n or L")
    _check_dense(n, m * L)
    u = np.asarray(u, dtype=complex)
    if u.shape != (m, m):
        raise ValidationError(f"unitary must be {m} x {m}")
    h = aux_state(spec)
    visible, flat, weight, vis = _occupation_tables(n, m, L)
    probs = np.zeros(len(visible))
    for p, psi in _pure_components(h):
        state = _evolve(_symmetrized_state(psi, spec.sites, m, L), u, L)
        amps = state.reshape(-1)[flat]
        probs += p * np.bincount(vis, weights=weight * np.abs(amps) ** 2, minlength=len(visible))
    total = probs.sum()
    if abs(total - 1.0) > 1e-10 or probs.min() < -1e-12:
        raise InternalConsistencyError(f"visible distribution not normalized: sum {total!r}")
    return dict(zip(visible, probs.tolist()))


def oracle_bunch(u: np.ndarray, cfg: ExperimentConfig, spec: StateSpec) -> float:
    """Sum of p(v) over occupations supported inside cfg.subset."""
    dist = oracle_visible_distribution(u, cfg, spec)
    inside = set(cfg.subset)
    return float(sum(p for v, p in dist.items() if all(c == 0 or x in inside for x, c in enumerate(v))))


def extract_q(h: np.ndarray, n: int, L: int) -> IrrepDistribution:
    """q_lam = Tr(Theta_lam h) with Theta_lam the lam-isotypic projector."""
    _check_aux_shape(h, n, L)
    if n > PERM_SUM_CAP:
        raise ValidationError(f"n={n} exceeds cap {PERM_SUM_CAP}")
    q = {}
    for lam in enumerate_partitions(n, L):
        q[lam] = float(np.trace(isotypic_projector(lam, n, L) @ h).real)
    if min(q.values()) < -1e-10:
        raise InternalConsistencyError(f"negative isotypic weight: {q}")
    return IrrepDistribution(n, {lam: max(p, 0.0) for lam, p in q.items()})


def sample_outcomes(
    rng: np.random.Generator, u: np.ndarray, cfg: ExperimentConfig, spec: StateSpec, count: int
) -> list[tuple[int, ...]]:
    """i.i.d. visible occupations by inverse CDF over the exact distribution."""
    if count <= 0:
        return []
    dist = oracle_visible_distribution(u, cfg, spec)
    outcomes = list(dist)
    cdf = np.cumsum([max(dist[v], 0.0) for v in outcomes])
    idx = np.searchsorted(cdf, rng.random(count) * cdf[-1], side="right")
    idx = np.minimum(idx, len(outcomes) - 1)
    return [outcomes[i] for i in idx]


def linearity_residual(u: np.ndarray, cfg: ExperimentConfig, sites: Sequence[int], q: IrrepDistribution) -> float:
    """Check that an explicit-q distribution is the q-mixture of pure-irrep distributions.

    Pure-irrep distributions are not simulated directly: they are recovered by
    solving the triangular system p_mu = sum_lam (mu!/n!) dim(lam) K_{lam,mu} p_lam
    against partially-labelled distributions. Returns the max absolute residual
    over visible occupations.
    """
    from .bunching import partially_labelled_q_exact

    n, L = cfg.n, cfg.L
    lams = [lam for lam in enumerate_partitions(n) if lam.length <= L]
    labelled = np.array(
        [list(oracle_visible_distribution(u, cfg, StateSpec.partially_labelled(mu, sites, L)).values()) for mu in lams]
    )
    coeff = np.array([[float(partially_labelled_q_exact(mu).get(lam, 0)) for lam in lams] for mu in lams])
    pure = np.linalg.solve(coeff, labelled)
    weights = np.array([q.q.get(lam, 0.0) for lam in lams])
    direct = np.array(list(oracle_visible_distribution(u, cfg, StateSpec.explicit_q(q, sites, L)).values()))
    return float(np.max(np.abs(weights @ pure - direct)))


def occupation_to_json(v: Sequence[int]) -> dict[str, int]:
    """{"mode": count} with 1-based mode numbers, zero counts omitted."""
    return {str(x + 1): int(c) for x, c in enumerate(v) if c}


def distribution_to_json(dist: dict[tuple[int, ...], float]) -> str:
    return json.dumps([{"occupation": occupation_to_json(v), "probability": p} for v, p in dist.items()])
