from math import comb

import numpy as np
import pytest

from bosonbunch import ValidationError
from bosonbunch.bunching import ExperimentConfig, IrrepDistribution, StateSpec, aux_irrep_distribution, bunch_probability
from bosonbunch.fock_oracle import (
    aux_state,
    distribution_to_json,
    enumerate_occupations,
    extract_q,
    isotypic_projector,
    label_permutation_matrix,
    linearity_residual,
    oracle_bunch,
    oracle_bunch_perm_sum,
    oracle_visible_distribution,
    sample_outcomes,
    xi,
    zeta,
)
from bosonbunch.linalg import gram_matrix, haar_unitary, permanent
from bosonbunch.partitions import enumerate_partitions


def test_enumerate_occupations():
    assert sorted(enumerate_occupations(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert len(enumerate_occupations(1, 5)) == 5
    assert len(enumerate_occupations(3, 4)) == 20
    for n in range(5):
        for m in range(1, 5):
            occ = enumerate_occupations(n, m)
            assert len(occ) == len(set(occ)) == comb(n + m - 1, n)
            assert all(sum(g) == n for g in occ)


def test_zeta_xi_roundtrip():
    for g in enumerate_occupations(4, 3):
        modes = zeta(g)
        assert list(modes) == sorted(modes)
        assert xi(modes, 3) == g


def test_label_permutation_matrix_is_representation():
    from itertools import permutations

    perms = list(permutations(range(3)))
    for a in perms:
        for b in perms:
            ab = tuple(a[b[x]] for x in range(3))
            lhs = label_permutation_matrix(a, 2) @ label_permutation_matrix(b, 2)
            assert np.array_equal(lhs, label_permutation_matrix(ab, 2))


def test_isotypic_projectors_resolve_identity():
    n, L = 3, 2
    total = sum(isotypic_projector(lam, n, L) for lam in enumerate_partitions(n))
    assert np.allclose(total, np.eye(L**n), atol=1e-12)
    for lam in enumerate_partitions(n):
        p = isotypic_projector(lam, n, L)
        assert np.allclose(p @ p, p, atol=1e-12)


def test_aux_state_examples():
    h = aux_state(StateSpec.indistinguishable((0, 1), 2))
    expected = np.zeros((4, 4))
    expected[0, 0] = 1
    assert np.allclose(h, expected)
    assert np.allclose(aux_state(StateSpec.uniform([1.0, 0.0], (0, 1))), expected)
    h = aux_state(StateSpec.partially_labelled((1, 1), (0, 1), 2))
    # label strings 12 and 21 sit at flat indices 1 and 2
    assert np.allclose(h, np.diag([0, 0.5, 0.5, 0]))
    alpha = [0.2, 0.3, 0.5]
    h = aux_state(StateSpec.uniform(alpha, (0, 1)))
    assert np.allclose(np.diag(h), np.outer(alpha, alpha).ravel())


def test_aux_state_cap():
    with pytest.raises(ValidationError):
        aux_state(StateSpec.indistinguishable(tuple(range(7)), 4))


def test_perm_sum_indistinguishable_is_permanent(rng):
    u = haar_unitary(rng, 4)
    cfg = ExperimentConfig(4, 3, 2, (1, 3))
    h = aux_state(StateSpec.indistinguishable((0, 1, 2), 2))
    expected = permanent(gram_matrix(u, (0, 1, 2), (1, 3))).real
    assert oracle_bunch_perm_sum(u, cfg, (0, 1, 2), h) == pytest.approx(expected, abs=1e-12)


def test_perm_sum_full_subset(rng):
    u = haar_unitary(rng, 3)
    cfg = ExperimentConfig(3, 2, 3, (0, 1, 2))
    h = aux_state(StateSpec.uniform([0.2, 0.3, 0.5], (0, 2)))
    assert oracle_bunch_perm_sum(u, cfg, (0, 2), h) == pytest.approx(1.0, abs=1e-12)


def test_hom_distribution(beamsplitter):
    cfg = ExperimentConfig(2, 2, 2, (0,))
    dist = oracle_visible_distribution(beamsplitter, cfg, StateSpec.indistinguishable((0, 1), 2))
    assert dist[(2, 0)] == pytest.approx(0.5, abs=1e-12)
    assert dist[(0, 2)] == pytest.approx(0.5, abs=1e-12)
    assert dist[(1, 1)] == pytest.approx(0.0, abs=1e-12)
    spec = StateSpec.partially_labelled((1, 1), (0, 1), 2)
    assert oracle_bunch(beamsplitter, cfg, spec) == pytest.approx(0.25, abs=1e-12)
    h = aux_state(spec)
    assert oracle_bunch_perm_sum(beamsplitter, cfg, (0, 1), h) == pytest.approx(0.25, abs=1e-12)


def test_identity_unitary_is_point_mass():
    cfg = ExperimentConfig(4, 3, 2, (0,))
    dist = oracle_visible_distribution(np.eye(4), cfg, StateSpec.partially_labelled((2, 1), (0, 2, 3), 2))
    assert dist[(1, 0, 1, 1)] == pytest.approx(1.0, abs=1e-12)


def test_single_particle(rng):
    u = haar_unitary(rng, 4)
    cfg = ExperimentConfig(4, 1, 1, (0,))
    dist = oracle_visible_distribution(u, cfg, StateSpec.indistinguishable((2,)))
    for v, p in dist.items():
        assert p == pytest.approx(abs(u[v.index(1), 2]) ** 2, abs=1e-12)


def test_trivial_subsets(rng):
    u = haar_unitary(rng, 3)
    spec = StateSpec.uniform([0.4, 0.6], (0, 1))
    assert oracle_bunch(u, ExperimentConfig(3, 2, 2, (0, 1, 2)), spec) == pytest.approx(1.0, abs=1e-12)
    assert oracle_bunch(u, ExperimentConfig(3, 2, 2, ()), spec) == 0.0


def _all_specs(rng, n, L, sites):
    specs = [StateSpec.indistinguishable(sites, L), StateSpec.uniform(rng.dirichlet(np.ones(L)), sites)]
    specs += [StateSpec.partially_labelled(mu, sites, L) for mu in enumerate_partitions(n, L)]
    if L >= n:
        specs += [StateSpec.pure_irrep(lam, sites, L) for lam in enumerate_partitions(n)]
    lams = enumerate_partitions(n, L)
    specs.append(StateSpec.explicit_q(dict(zip(lams, rng.dirichlet(np.ones(len(lams))))), sites, L))
    return specs


@pytest.mark.parametrize("n,m,L", [(1, 3, 2), (2, 2, 2), (2, 3, 3), (3, 3, 2), (3, 4, 3)])
def test_routes_agree(n, m, L):
    rng = np.random.default_rng(n * 100 + m * 10 + L)
    for _ in range(3):
        u = haar_unitary(rng, m)
        sites = tuple(rng.choice(m, n, replace=False))
        subset = tuple(sorted(rng.choice(m, int(rng.integers(1, m + 1)), replace=False)))
        cfg = ExperimentConfig(m, n, L, subset)
        for spec in _all_specs(rng, n, L, sites):
            dense = oracle_bunch(u, cfg, spec)
            perm_sum = oracle_bunch_perm_sum(u, cfg, sites, aux_state(spec))
            assert abs(dense - perm_sum) < 1e-10
            assert abs(dense - bunch_probability(u, cfg, spec)) < 1e-9
            dist = oracle_visible_distribution(u, cfg, spec)
            assert abs(sum(dist.values()) - 1) < 1e-10 and min(dist.values()) >= -1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("L", [1, 2, 3])
def test_extract_q_matches_closed_form(n, L):
    rng = np.random.default_rng(10 * n + L)
    sites = tuple(range(n))
    specs = [s for s in _all_specs(rng, n, L, sites)]
    for spec in specs:
        extracted = extract_q(aux_state(spec), n, L).q
        closed = aux_irrep_distribution(spec).q
        for lam in set(extracted) | set(closed):
            assert abs(extracted.get(lam, 0.0) - closed.get(lam, 0.0)) < 1e-10


def test_extract_q_examples():
    q = extract_q(aux_state(StateSpec.indistinguishable((0, 1, 2), 2)), 3, 2).q
    assert q[(3,)] == pytest.approx(1.0) and q[(2, 1)] == pytest.approx(0.0, abs=1e-12)
    q = extract_q(aux_state(StateSpec.uniform([0.5, 0.5], (0, 1))), 2, 2).q
    assert q[(2,)] == pytest.approx(0.75) and q[(1, 1)] == pytest.approx(0.25)


def test_site_relabelling_invariance(rng):
    u = haar_unitary(rng, 4)
    cfg = ExperimentConfig(4, 3, 2, (0, 2))
    for make in (
        lambda s: StateSpec.partially_labelled((2, 1), s, 2),
        lambda s: StateSpec.uniform([0.3, 0.7], s),
    ):
        ref = oracle_bunch(u, cfg, make((0, 1, 3)))
        for sites in ((1, 0, 3), (3, 1, 0), (0, 3, 1)):
            assert abs(oracle_bunch(u, cfg, make(sites)) - ref) < 1e-12


@pytest.mark.parametrize("n,m,L", [(2, 3, 2), (3, 3, 3)])
def test_linearity_in_q(n, m, L):
    rng = np.random.default_rng(42 + n)
    lams = enumerate_partitions(n, L)
    for _ in range(2):
        q = IrrepDistribution(n, dict(zip(lams, rng.dirichlet(np.ones(len(lams))))))
        cfg = ExperimentConfig(m, n, L, (0,))
        assert linearity_residual(haar_unitary(rng, m), cfg, tuple(range(n)), q) < 1e-8


def test_sampling(beamsplitter):
    cfg = ExperimentConfig(2, 2, 1, (0,))
    spec = StateSpec.indistinguishable((0, 1))
    rng = np.random.default_rng(0)
    assert sample_outcomes(rng, beamsplitter, cfg, spec, 0) == []
    draws = sample_outcomes(rng, beamsplitter, cfg, spec, 100_000)
    assert draws.count((1, 1)) / len(draws) < 0.001
    point = sample_outcomes(rng, np.eye(3), ExperimentConfig(3, 2, 1, (0,)), StateSpec.indistinguishable((0, 2)), 20)
    assert set(point) == {(1, 0, 1)}


def test_distribution_json(beamsplitter):
    import json

    cfg = ExperimentConfig(2, 2, 1, (0,))
    dist = oracle_visible_distribution(beamsplitter, cfg, StateSpec.indistinguishable((0, 1)))
    data = json.loads(distribution_to_json(dist))
    assert {"occupation": {"1": 2}, "probability": dist[(2, 0)]} in data
