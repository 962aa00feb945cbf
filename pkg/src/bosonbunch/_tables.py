# Cycle-type lookup shared by both kernel backends.
#
# A cycle type with multiplicities m_1..m_n is encoded as sum_l m_l * w_l,
# with mixed radix w_1 = 1, w_{l+1} = w_l * (n // l + 1). The code table is
# tiny (9600 entries at n = 9) and maps codes to class indices in
# reverse-lex partition order.
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .partitions import Partition, enumerate_partitions


@lru_cache(maxsize=None)
def class_code_table(n: int) -> tuple[np.ndarray, np.ndarray, tuple[Partition, ...]]:
    """Return (weights, code_to_class, classes) for S_n.

    ``weights[l]`` is the radix weight of cycle length ``l`` (index 0 unused).
    """
    weights = np.zeros(n + 1, dtype=np.intp)
    w = 1
    for length in range(1, n + 1):
        weights[length] = w
        w *= n // length + 1
    classes = tuple(enumerate_partitions(n)) if n > 0 else (Partition(),)
    code_to_class = np.full(w, -1, dtype=np.intp)
    for idx, ct in enumerate(classes):
        code_to_class[sum(int(weights[p]) for p in ct)] = idx
    weights.setflags(write=False)
    code_to_class.setflags(write=False)
    return weights, code_to_class, classes
