"""Dense complex matrices: Haar unitaries, PSD samples, Gram matrices,
permanents and normalized immanants.

The permanent and the permutation sums behind the immanants run in the
compiled ``_kernels`` extension when it is importable, otherwise in the
numpy fallback. Set ``BOSONBUNCH_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os
from functools import lru_cache
from itertools import permutations
from typing import Sequence

import numpy as np

from . import _kernels_py
from ._errors import ValidationError
from ._tables import class_code_table
from .partitions import Partition, dim_standard
from .symgroup import character

try:
    if os.environ.get("BOSONBUNCH_PURE"):
        raise ImportError("disabled by BOSONBUNCH_PURE")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

__all__ = [
    "PERMANENT_CAP",
    "IMMANANT_CAP",
    "backend_name",
    "use_backend",
    "haar_unitary",
    "random_psd",
    "validate_subset",
    "gram_matrix",
    "permanent",
    "permanent_naive",
    "class_sums",
    "normalized_immanant",
    "normalized_immanants",
    "immanant_naive",
]

PERMANENT_CAP = 20
IMMANANT_CAP = 9

_backend = _compiled if _compiled is not None else _kernels_py


def backend_name() -> str:
    return "compiled" if _backend is _compiled else "python"


def use_backend(name: str) -> None:
    """Switch kernels at runtime ("compiled" or "python"); used by tests and benchmarks."""
    global _backend
    if name == "python":
        _backend = _kernels_py
    elif name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        _backend = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")


def _as_square(a, what: str = "matrix") -> np.ndarray:
    a = np.ascontiguousarray(np.asarray(a, dtype=complex))
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"{what} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{what} has non-finite entries")
    return a


def haar_unitary(rng: np.random.Generator, m: int) -> np.ndarray:
    """Haar-random m x m unitary: QR of a Ginibre matrix, R's diagonal phases fixed."""
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_psd(rng: np.random.Generator, n: int, rank: int | None = None) -> np.ndarray:
    """B B^dagger with B an n x rank complex Gaussian matrix."""
    rank = n if rank is None else rank
    if not 1 <= rank <= n:
        raise ValidationError(f"rank must lie in [1, {n}], got {rank}")
    b = (rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))) / np.sqrt(2.0)
    a = b @ b.conj().T
    return (a + a.conj().T) / 2


def validate_subset(subset: Sequence[int], m: int, allow_empty: bool = True) -> tuple[int, ...]:
    s = tuple(sorted(int(x) for x in subset))
    if len(set(s)) != len(s):
        raise ValidationError(f"subset has repeated modes: {s}")
    if s and (s[0] < 0 or s[-1] >= m):
        raise ValidationError(f"subset modes must lie in [0, {m}): {s}")
    if not s and not allow_empty:
        raise ValidationError("subset must be nonempty")
    return s


def _validate_sites(sites: Sequence[int], m: int) -> tuple[int, ...]:
    sites = tuple(int(x) for x in sites)
    if len(set(sites)) != len(sites):
        raise ValidationError(f"sites must be distinct: {sites}")
    if any(x < 0 or x >= m for x in sites):
        raise ValidationError(f"sites must lie in [0, {m}): {sites}")
    return sites


def gram_matrix(u: np.ndarray, sites: Sequence[int], subset: Sequence[int]) -> np.ndarray:
    """G[x, y] = sum over s in subset of conj(U[s, i_x]) U[s, i_y]."""
    u = _as_square(u, "unitary")
    m = u.shape[0]
    sites = _validate_sites(sites, m)
    subset = validate_subset(subset, m)
    block = u[np.ix_(subset, sites)]
    return block.conj().T @ block


def permanent(a) -> complex:
    a = _as_square(a)
    if a.shape[0] > PERMANENT_CAP:
        raise ValidationError(f"permanent size {a.shape[0]} exceeds cap {PERMANENT_CAP}")
    return complex(_backend.permanent_ryser(a))


def permanent_naive(a) -> complex:
    """Direct n!-term definition; reference for small matrices only."""
    a = _as_square(a)
    n = a.shape[0]
    rows = np.arange(n)
    return complex(sum(np.prod(a[rows, list(p)]) for p in permutations(range(n))))


def class_sums(a) -> tuple[np.ndarray, tuple[Partition, ...]]:
    """Per-conjugacy-class sums of prod_x a[x, sigma(x)] over all of S_n.

    The product is not a class function, so every permutation is visited;
    only the character weights are shared across a class.
    """
    a = _as_square(a)
    n = a.shape[0]
    if n > IMMANANT_CAP:
        raise ValidationError(f"immanant size {n} exceeds cap {IMMANANT_CAP}")
    weights, code_to_class, classes = class_code_table(n)
    sums = _backend.class_sums(a, weights, code_to_class, len(classes))
    return np.asarray(sums), classes


@lru_cache(maxsize=None)
def _immanant_weights(n: int) -> np.ndarray:
    """Row lam, column class c: chi_lam(c) / dim(lam)."""
    _, _, classes = class_code_table(n)
    w = np.array([[character(lam, ct) / dim_standard(lam) for ct in classes] for lam in classes])
    w.setflags(write=False)
    return w


def normalized_immanants(a) -> dict[Partition, complex]:
    """All normalized immanants of ``a`` from a single permutation pass."""
    sums, classes = class_sums(a)
    values = _immanant_weights(classes[0].n) @ sums
    return {lam: complex(v) for lam, v in zip(classes, values)}


def normalized_immanant(lam: Sequence[int], a) -> complex:
    lam = Partition(lam)
    a = _as_square(a)
    if lam.n != a.shape[0]:
        raise ValidationError(f"|lambda| = {lam.n} but matrix is {a.shape[0]} x {a.shape[0]}")
    return normalized_immanants(a)[lam]


def immanant_naive(lam: Sequence[int], a) -> complex:
    """Reference: explicit loop over permutations with per-permutation character lookup."""
    from .symgroup import cycle_type

    lam = Partition(lam)
    a = _as_square(a)
    n = a.shape[0]
    rows = np.arange(n)
    total = 0j
    for p in permutations(range(n)):
        total += character(lam, cycle_type(p)) * np.prod(a[rows, list(p)])
    return complex(total / dim_standard(lam))
