# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: Ryser permanent and per-class permutation product sums."""
import numpy as np

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


def permanent_ryser(const double complex[:, :] a):
    """Ryser's formula with Gray-code subset updates, O(2^n n)."""
    cdef Py_ssize_t n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    cdef double complex[::1] rowsum = np.zeros(n, dtype=np.complex128)
    cdef double complex total = 0.0
    cdef double complex term
    cdef unsigned long long k, gray, prev = 0, flipped
    cdef unsigned long long stop = (<unsigned long long>1) << n
    cdef Py_ssize_t i, col
    with nogil:
        for k in range(1, stop):
            gray = k ^ (k >> 1)
            flipped = gray ^ prev
            col = __builtin_ctzll(flipped)
            if gray & flipped:
                for i in range(n):
                    rowsum[i] = rowsum[i] + a[i, col]
            else:
                for i in range(n):
                    rowsum[i] = rowsum[i] - a[i, col]
            prev = gray
            term = 1.0
            for i in range(n):
                term = term * rowsum[i]
            if __builtin_popcountll(gray) & 1:
                total = total - term
            else:
                total = total + term
    if n & 1:
        total = -total
    return complex(total)


cdef Py_ssize_t _classify(Py_ssize_t depth, Py_ssize_t n, Py_ssize_t* perm, signed char* used,
                          const Py_ssize_t* weights, const Py_ssize_t* code_to_class,
                          int* out, Py_ssize_t pos, signed char* seen) noexcept nogil:
    # leaves are visited in lexicographic order, matching _accumulate
    cdef Py_ssize_t col, x, y, length, code
    if depth == n:
        code = 0
        for x in range(n):
            seen[x] = 0
        for x in range(n):
            if seen[x]:
                continue
            length = 0
            y = x
            while not seen[y]:
                seen[y] = 1
                y = perm[y]
                length += 1
            code += weights[length]
        out[pos] = <int>code_to_class[code]
        return pos + 1
    for col in range(n):
        if used[col]:
            continue
        used[col] = 1
        perm[depth] = col
        pos = _classify(depth + 1, n, perm, used, weights, code_to_class, out, pos, seen)
        used[col] = 0
    return pos


cdef Py_ssize_t _accumulate(const double complex* a, Py_ssize_t depth, Py_ssize_t n,
                            signed char* used, double complex* partial, const int* cls,
                            Py_ssize_t pos, double complex* sums) noexcept nogil:
    cdef Py_ssize_t col
    cdef const double complex* row = a + depth * n
    if depth == n - 1:
        for col in range(n):
            if not used[col]:
                sums[cls[pos]] += partial[depth] * row[col]
                return pos + 1
    for col in range(n):
        if used[col]:
            continue
        used[col] = 1
        partial[depth + 1] = partial[depth] * row[col]
        pos = _accumulate(a, depth + 1, n, used, partial, cls, pos, sums)
        used[col] = 0
    return pos


_class_index_cache = {}


def _class_index(Py_ssize_t n, const Py_ssize_t[::1] weights, const Py_ssize_t[::1] code_to_class):
    """Conjugacy-class index of every permutation of n, in lexicographic order."""
    key = (n, bytes(weights), bytes(code_to_class))
    cached = _class_index_cache.get(key)
    if cached is not None:
        return cached
    cdef Py_ssize_t total = 1, i
    for i in range(2, n + 1):
        total *= i
    out = np.empty(total, dtype=np.intc)
    cdef int[::1] view = out
    cdef Py_ssize_t[::1] perm = np.zeros(n, dtype=np.intp)
    cdef signed char[::1] used = np.zeros(n, dtype=np.int8)
    cdef signed char[::1] seen = np.zeros(n, dtype=np.int8)
    with nogil:
        _classify(0, n, &perm[0], &used[0], &weights[0], &code_to_class[0], &view[0], 0, &seen[0])
    out.setflags(write=False)
    _class_index_cache[key] = out
    return out


def class_sums(a, const Py_ssize_t[::1] weights, const Py_ssize_t[::1] code_to_class, Py_ssize_t nclasses):
    """For each conjugacy class c, sum over sigma in c of prod_x a[x, sigma(x)]."""
    cdef const double complex[:, ::1] mat = np.ascontiguousarray(a, dtype=np.complex128)
    cdef Py_ssize_t n = mat.shape[0]
    out = np.zeros(nclasses, dtype=np.complex128)
    cdef double complex[::1] sums = out
    if n == 0:
        sums[0] = 1.0
        return out
    cdef const int[::1] cls = _class_index(n, weights, code_to_class)
    cdef signed char[::1] used = np.zeros(n, dtype=np.int8)
    cdef double complex[::1] partial = np.zeros(n + 1, dtype=np.complex128)
    partial[0] = 1.0
    with nogil:
        _accumulate(&mat[0, 0], 0, n, &used[0], &partial[0], &cls[0], 0, &sums[0])
    return out
