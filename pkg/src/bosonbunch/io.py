"""Text formats shared by the command line: partitions, subsets, vectors,
state descriptors, matrix and irrep-distribution files.

Mode numbers in text are 1-based; the library itself is 0-based.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from ._errors import ValidationError
from .bunching import IrrepDistribution, StateSpec
from .partitions import Partition

__all__ = [
    "parse_partition",
    "parse_subset",
    "parse_floats",
    "parse_state",
    "matrix_to_dict",
    "matrix_from_dict",
    "read_matrix",
    "write_matrix",
    "read_irrep_distribution",
]


def parse_partition(text: str) -> Partition:
    """"3,1,1" -> Partition((3, 1, 1))."""
    try:
        parts = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValidationError(f"malformed partition {text!r}: expected comma-separated integers") from None
    if not parts:
        raise ValidationError(f"malformed partition {text!r}: empty")
    return Partition(parts)


def parse_subset(text: str, m: int) -> tuple[int, ...]:
    """"1-4,7" -> (0, 1, 2, 3, 6); "all" -> every mode; "" or "none" -> empty."""
    text = text.strip()
    if text == "all":
        return tuple(range(m))
    if text in ("", "none"):
        return ()
    out: list[int] = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            if "-" in tok:
                lo, hi = (int(x) for x in tok.split("-", 1))
                if hi < lo:
                    raise ValidationError(f"descending range {tok!r} in subset {text!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(tok))
        except ValueError:
            raise ValidationError(f"malformed subset {text!r}: expected items like 1-4,7") from None
    if len(set(out)) != len(out):
        raise ValidationError(f"subset {text!r} lists a mode twice")
    if any(x < 1 or x > m for x in out):
        raise ValidationError(f"subset {text!r} has modes outside 1..{m}")
    return tuple(sorted(x - 1 for x in out))


def parse_floats(text: str) -> list[float]:
    try:
        vals = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValidationError(f"malformed number list {text!r}") from None
    if not vals or not all(math.isfinite(v) for v in vals):
        raise ValidationError(f"number list {text!r} is empty or not finite")
    return vals


def _normalized(alpha: list[float], normalize: bool) -> list[float]:
    if any(a < 0 for a in alpha):
        raise ValidationError(f"alpha has negative entries: {alpha}")
    total = sum(alpha)
    if normalize:
        if total <= 0:
            raise ValidationError("alpha sums to zero")
        return [a / total for a in alpha]
    if abs(total - 1.0) > 1e-12:
        raise ValidationError(f"alpha sums to {total!r}; pass --normalize to rescale")
    return alpha


def parse_state(text: str, sites: tuple[int, ...], L: int | None = None, normalize: bool = False) -> StateSpec:
    """State descriptor: indist | irrep:LAMBDA | labelled:MU | uniform:ALPHA | q:FILE.

    ``L`` defaults to the smallest hidden dimension the state needs.
    """
    kind, _, arg = text.partition(":")
    n = len(sites)
    if kind == "indist":
        return StateSpec.indistinguishable(sites, L or 1)
    if kind == "irrep":
        return StateSpec.pure_irrep(parse_partition(arg), sites, L or n)
    if kind == "labelled":
        mu = parse_partition(arg)
        return StateSpec.partially_labelled(mu, sites, L or len(mu))
    if kind == "uniform":
        alpha = _normalized(parse_floats(arg), normalize)
        if L is not None and L != len(alpha):
            raise ValidationError(f"alpha has {len(alpha)} entries but L={L}")
        return StateSpec.uniform(alpha, sites)
    if kind == "q":
        q = read_irrep_distribution(arg)
        return StateSpec.explicit_q(q, sites, L or max(q.max_length(), 1))
    raise ValidationError(f"unknown state {text!r}: use indist, irrep:λ, labelled:μ, uniform:α or q:FILE")


def matrix_to_dict(a: np.ndarray) -> dict[str, Any]:
    a = np.asarray(a, dtype=complex)
    return {"rows": a.shape[0], "cols": a.shape[1], "re": a.real.tolist(), "im": a.imag.tolist()}


def matrix_from_dict(d: dict[str, Any]) -> np.ndarray:
    try:
        rows, cols = int(d["rows"]), int(d["cols"])
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d.get("im", np.zeros((rows, cols))), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix JSON: {exc}") from None
    if re.shape != (rows, cols) or im.shape != (rows, cols):
        raise ValidationError(f"matrix JSON entries do not match declared shape {rows} x {cols}")
    a = re + 1j * im
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix JSON has non-finite entries")
    return a


def _load_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None


def read_matrix(path: str | Path) -> np.ndarray:
    return matrix_from_dict(_load_json(path))


def write_matrix(path: str | Path, a: np.ndarray) -> None:
    Path(path).write_text(json.dumps(matrix_to_dict(a)) + "\n")


def read_irrep_distribution(path: str | Path) -> IrrepDistribution:
    """{"n": 3, "q": {"3": 0.5, "2,1": 0.5}}; the bare inner map is accepted too."""
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    q = data.get("q", data)
    if not isinstance(q, dict) or not q:
        raise ValidationError(f"{path}: expected a nonempty map from partitions to weights")
    parsed = {parse_partition(k): float(v) for k, v in q.items()}
    n = int(data.get("n", next(iter(parsed)).n))
    return IrrepDistribution(n, parsed)
