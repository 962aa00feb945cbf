"""Pure-Python (numpy) implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable or disabled
with ``BOSONBUNCH_PURE=1``. Signatures match the extension exactly.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations

import numpy as np

_CHUNK = 1 << 15


def permanent_ryser(a: np.ndarray) -> complex:
    """Ryser inclusion-exclusion over column subsets, vectorized in chunks."""
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    total = 0.0 + 0.0j
    shifts = np.arange(n, dtype=np.int64)
    for start in range(1, 1 << n, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, 1 << n), dtype=np.int64)
        bits = ((masks[:, None] >> shifts) & 1).astype(float)
        rowsums = bits @ a.T
        signs = 1 - 2 * (bits.sum(axis=1).astype(np.int64) & 1)
        total += np.dot(signs, np.prod(rowsums, axis=1))
    return complex((-1) ** n * total)


@lru_cache(maxsize=None)
def _permutation_codes(n: int, weights_key: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    perms = np.array(list(permutations(range(n))), dtype=np.intp).reshape(-1, n)
    weights = np.asarray(weights_key, dtype=np.intp)
    # cycle length of each point: smallest k >= 1 with sigma^k(x) == x
    rows = np.arange(perms.shape[0])[:, None]
    cur = perms.copy()
    length = np.zeros_like(perms)
    for k in range(1, n + 1):
        hit = (cur == np.arange(n)) & (length == 0)
        length[hit] = k
        cur = perms[rows, cur]
    codes = np.zeros(perms.shape[0], dtype=np.intp)
    for ell in range(1, n + 1):
        codes += (np.sum(length == ell, axis=1) // ell) * weights[ell]
    perms.setflags(write=False)
    codes.setflags(write=False)
    return perms, codes


def class_sums(a: np.ndarray, weights: np.ndarray, code_to_class: np.ndarray, nclasses: int) -> np.ndarray:
    """For each conjugacy class c, sum over sigma in c of prod_x a[x, sigma(x)]."""
    n = a.shape[0]
    out = np.zeros(nclasses, dtype=complex)
    if n == 0:
        out[0] = 1.0
        return out
    perms, codes = _permutation_codes(n, tuple(int(w) for w in weights))
    cls = code_to_class[codes]
    cols = np.arange(n)
    for start in range(0, perms.shape[0], _CHUNK):
        block = perms[start : start + _CHUNK]
        terms = np.prod(a[cols, block], axis=1)
        idx = cls[start : start + _CHUNK]
        out += np.bincount(idx, weights=terms.real, minlength=nclasses)
        out += 1j * np.bincount(idx, weights=terms.imag, minlength=nclasses)
    return out
