from fractions import Fraction
from itertools import permutations
from math import factorial

import numpy as np
import pytest

from bosonbunch import ValidationError
from bosonbunch.partitions import dim_standard, enumerate_partitions, kostka, ordered_set_partitions
from bosonbunch.symgroup import (
    centralizer_order,
    character,
    character_table,
    class_size,
    cycle_type,
    inverse,
    sign,
    validate_permutation,
)

# rows (4), (3,1), (2,2), (2,1,1), (1,1,1,1); columns (4), (3,1), (2,2), (2,1,1), (1,1,1,1)
S4_TABLE = [
    [1, 1, 1, 1, 1],
    [-1, 0, -1, 1, 3],
    [0, -1, 2, 0, 2],
    [1, 0, -1, -1, 3],
    [-1, 1, 1, -1, 1],
]


def test_cycle_type_examples():
    assert cycle_type((0, 1, 2)) == (1, 1, 1)
    assert cycle_type((1, 0, 2)) == (2, 1)
    assert cycle_type((1, 2, 0)) == (3,)
    with pytest.raises(ValidationError):
        validate_permutation((0, 0, 1))


def test_sign_and_inverse():
    for p in permutations(range(5)):
        q = inverse(p)
        assert all(p[q[i]] == i for i in range(5))
        assert sign(p) == sign(q)
        assert sign(p) == (-1) ** (5 - len(cycle_type(p)))


@pytest.mark.parametrize("n", range(1, 7))
def test_class_sizes_brute_force(n):
    counts = {}
    for p in permutations(range(n)):
        ct = cycle_type(p)
        counts[ct] = counts.get(ct, 0) + 1
    for ct, size in counts.items():
        assert class_size(ct) == size == factorial(n) // centralizer_order(ct)


def test_character_examples():
    for ct in enumerate_partitions(4):
        assert character((4,), ct) == 1
    assert character((1, 1, 1), (2, 1)) == -1
    assert character((2, 1), (3,)) == -1


def test_s4_frozen_table():
    parts = enumerate_partitions(4)
    for i, lam in enumerate(parts):
        for j, ct in enumerate(parts):
            assert character(lam, ct) == S4_TABLE[i][j]


def _fixed_tabloids(mu, ct):
    # character of the permutation module M^mu at a representative of ct
    n = sum(mu)
    sigma, start = [0] * n, 0
    for length in ct:
        for k in range(length):
            sigma[start + k] = start + (k + 1) % length
        start += length
    count = 0
    for blocks in ordered_set_partitions(range(n), mu):
        if all(set(sigma[x] for x in b) == set(b) for b in blocks):
            count += 1
    return count


@pytest.mark.parametrize("n", range(1, 7))
def test_characters_from_permutation_modules(n):
    # pi_mu = sum_lam K_{lam,mu} chi_lam; solve the unitriangular system exactly
    parts = enumerate_partitions(n)
    k = [[Fraction(kostka(lam, mu)) for lam in parts] for mu in parts]
    for ct in parts:
        pi = [Fraction(_fixed_tabloids(mu, ct)) for mu in parts]
        chi = [None] * len(parts)
        # K[mu][lam] is nonzero only for lam >= mu, and parts run from largest to smallest
        for i in range(len(parts)):
            rest = pi[i] - sum(k[i][j] * chi[j] for j in range(i))
            chi[i] = rest / k[i][i]
        assert [character(lam, ct) for lam in parts] == chi


def test_character_table_small():
    t1 = character_table(1)
    assert t1.values.tolist() == [[1]]
    t2 = character_table(2)
    assert t2.classes == ((2,), (1, 1))
    assert t2.values.tolist() == [[1, 1], [-1, 1]]
    t3 = character_table(3)
    assert t3[(2, 1), (1, 1, 1)] == 2
    with pytest.raises(ValidationError):
        character_table(11)


@pytest.mark.parametrize("n", range(1, 9))
def test_orthogonality_exact(n):
    t = character_table(n)
    v = t.values.astype(object)
    sizes = np.array([t.class_sizes[c] for c in t.classes], dtype=object)
    identity = t.classes.index(tuple([1] * n))
    for i, lam in enumerate(t.irreps):
        assert v[i, identity] == dim_standard(lam)
        for j in range(len(t.irreps)):
            assert sum(sizes * v[i] * v[j]) == (factorial(n) if i == j else 0)
    for a in range(len(t.classes)):
        for b in range(len(t.classes)):
            expected = factorial(n) // t.class_sizes[t.classes[a]] if a == b else 0
            assert sum(v[:, a] * v[:, b]) == expected


def test_character_table_csv():
    text = character_table(3).to_csv()
    lines = text.strip().splitlines()
    assert lines[0] == 'irrep,3,"2,1","1,1,1"'
    assert lines[2] == '"2,1",-1,0,2'
