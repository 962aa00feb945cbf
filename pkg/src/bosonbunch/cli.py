"""Command-line front end.

Every subcommand prints JSON (or CSV for curves and tables) to stdout, or
writes it to ``--out``. Exit codes: 0 success, 2 invalid input, 1 internal
fault. All randomness derives from ``--seed``; without it a seed is drawn
and reported on stderr.
"""
from __future__ import annotations

import argparse
import json
import secrets
import sys
from datetime import datetime, timezone
from typing import Any, Callable

import numpy as np

from . import __version__
from ._errors import InternalConsistencyError, ValidationError
from .bunching import (
    ExperimentConfig,
    StateSpec,
    bunch_details,
    exact_subset_average,
    lieb_scan,
    mean_bunch_closed,
    mean_bunch_mc,
    schur_convexity_probe,
    subset_avg_contributions,
)
from .fock_oracle import (
    aux_state,
    occupation_to_json,
    oracle_bunch_perm_sum,
    oracle_visible_distribution,
    sample_outcomes,
)
from .io import parse_floats, parse_state, parse_subset, read_matrix
from .linalg import haar_unitary
from .symfunc import validate_prob_vector
from .symgroup import character_table
from .thermometry import BETA_MAX, EnergySpectrum, gibbs, invert_temperature, thermo_curve

SCHEMA = "bosonbunch/{}/1"
HOM_UNITARY = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


class _Context:
    """Per-invocation state: resolved seed, worker count and manifest."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        if args.seed is None:
            args.seed = secrets.randbits(63)
            print(f"seed: {args.seed}", file=sys.stderr)
        self.seed = int(args.seed)
        self.threads = max(1, int(args.threads))

    def manifest(self, config: dict[str, Any], timestamp: bool = False) -> dict[str, Any]:
        out = {
            "command": self.args.command,
            "config": config,
            "seed": self.seed,
            "tool_version": __version__,
        }
        if timestamp:
            out["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return out

    def emit_json(self, kind: str, config: dict[str, Any], body: dict[str, Any]) -> None:
        def render(stamp: bool) -> str:
            doc = {"schema": SCHEMA.format(kind), "manifest": self.manifest(config, stamp), **body}
            return json.dumps(doc, indent=2) + "\n"

        self._write(render)

    def emit_csv(self, kind: str, config: dict[str, Any], csv_text: str) -> None:
        def render(stamp: bool) -> str:
            doc = {"schema": SCHEMA.format(kind), "manifest": self.manifest(config, stamp)}
            return f"# {json.dumps(doc)}\n{csv_text}"

        self._write(render)

    def _write(self, render: Callable[[bool], str]) -> None:
        if self.args.out:
            with open(self.args.out, "w") as fh:
                fh.write(render(True))
        else:
            sys.stdout.write(render(False))


def _unitary(ctx: _Context, m: int) -> np.ndarray:
    args = ctx.args
    if getattr(args, "hom", False):
        return HOM_UNITARY
    if args.unitary:
        u = read_matrix(args.unitary)
        if u.shape != (m, m):
            raise ValidationError(f"unitary file is {u.shape[0]} x {u.shape[1]}, expected {m} x {m}")
        return u
    seed = ctx.seed if args.haar_seed is None else args.haar_seed
    return haar_unitary(np.random.default_rng(seed), m)


def _sites(text: str | None, m: int, n: int | None = None) -> tuple[int, ...]:
    if text is None:
        if n is None:
            raise ValidationError("--sites is required")
        return tuple(range(n))
    sites = parse_subset(text, m)
    if not sites:
        raise ValidationError("--sites must name at least one mode")
    return sites


def _experiment(ctx: _Context) -> tuple[np.ndarray, ExperimentConfig, StateSpec, dict[str, Any]]:
    args = ctx.args
    if args.hom:
        args.m, args.sites = 2, args.sites or "1,2"
        args.subset = args.subset or "1"
    if args.m is None:
        raise ValidationError("--m is required (or use --hom)")
    sites = _sites(args.sites, args.m)
    subset = parse_subset(args.subset or "all", args.m)
    spec = parse_state(args.state, sites, args.L, args.normalize)
    cfg = ExperimentConfig(args.m, spec.n, spec.hidden_dim, subset, ctx.seed)
    u = _unitary(ctx, args.m)
    config = {
        **cfg.to_dict(),
        "subset": [s + 1 for s in cfg.subset],
        "state": {**spec.describe(), "sites": [s + 1 for s in spec.sites]},
        "unitary": "hom" if args.hom else (args.unitary or f"haar:{ctx.seed if args.haar_seed is None else args.haar_seed}"),
    }
    return u, cfg, spec, config


def cmd_bunch(ctx: _Context) -> int:
    args = ctx.args
    if args.hom and args.state is None:
        results = []
        for state in ("indist", "labelled:1,1"):
            args.state = state
            u, cfg, spec, config = _experiment(ctx)
            res = bunch_details(u, cfg, spec)
            results.append({"state": state, "bunching": res.value, "q": res.q.to_dict()})
        ctx.emit_json("bunch", {"preset": "hom", "subset": [1], "sites": [1, 2]}, {"results": results})
        return 0
    args.state = args.state or "indist"
    u, cfg, spec, config = _experiment(ctx)
    res = bunch_details(u, cfg, spec)
    ctx.emit_json(
        "bunch",
        config,
        {"bunching": res.value, "raw": res.raw, "q": res.q.to_dict(), "gram_eigs": res.gram_eigenvalues()},
    )
    return 0


def _alpha(args: argparse.Namespace) -> list[float]:
    alpha = parse_floats(args.alpha)
    if args.normalize:
        total = sum(alpha)
        if total <= 0 or min(alpha) < 0:
            raise ValidationError("alpha must be nonnegative with positive sum")
        alpha = [a / total for a in alpha]
    return validate_prob_vector(alpha).tolist()


def cmd_mean(ctx: _Context) -> int:
    args = ctx.args
    alpha = _alpha(args)
    config = {"n": args.n, "m": args.m, "k": args.k, "alpha": alpha, "mc": args.mc}
    body: dict[str, Any] = {"mean_closed": mean_bunch_closed(args.n, args.m, args.k, alpha)}
    if args.mc:
        cfg = ExperimentConfig(args.m, args.n, len(alpha), tuple(range(args.k)), ctx.seed)
        est, err = mean_bunch_mc(ctx.seed, cfg, StateSpec.uniform(alpha, range(args.n)), args.mc, ctx.threads)
        body["mc"] = {"estimate": est, "std_error": err, "num_unitaries": args.mc}
    ctx.emit_json("mean", config, body)
    return 0


def _spectrum(args: argparse.Namespace) -> EnergySpectrum:
    return EnergySpectrum(tuple(parse_floats(args.levels)))


def _beta_grid(text: str) -> np.ndarray:
    """"start:stop:count" (inclusive linspace) or an explicit comma list."""
    if ":" in text:
        try:
            start, stop, count = text.split(":")
            return np.linspace(float(start), float(stop), int(count))
        except ValueError:
            raise ValidationError(f"malformed beta grid {text!r}: expected start:stop:count") from None
    return np.asarray(parse_floats(text))


def cmd_thermo(ctx: _Context) -> int:
    args = ctx.args
    spectrum = _spectrum(args)
    config = {"n": args.n, "m": args.m, "k": args.k, "levels": list(spectrum.levels)}
    if args.action == "curve":
        betas = _beta_grid(args.betas)
        curve = thermo_curve(spectrum, args.n, args.m, args.k, betas, ctx.threads)
        ctx.emit_csv("thermo-curve", {**config, "betas": args.betas}, curve.to_csv())
        return 0
    target = args.target
    if target is None:
        try:
            target = json.load(sys.stdin)["target"]
        except (json.JSONDecodeError, KeyError, TypeError):
            raise ValidationError('expected --target or stdin JSON {"target": value}') from None
    target = float(target)
    beta = invert_temperature(spectrum, args.n, args.m, args.k, target, args.beta_max)
    ctx.emit_json(
        "thermo-invert",
        {**config, "target": target, "beta_max": args.beta_max},
        {"beta": beta, "mean_at_beta": mean_bunch_closed(args.n, args.m, args.k, gibbs(spectrum, beta))},
    )
    return 0


def cmd_lieb(ctx: _Context) -> int:
    args = ctx.args
    report = lieb_scan(ctx.seed, args.n, args.trials, ctx.threads, args.tol).to_dict()
    if not args.per_trial:
        report.pop("per_trial")
    ctx.emit_json("lieb", report.pop("config"), report)
    return 0


def cmd_oracle(ctx: _Context) -> int:
    args = ctx.args
    args.state = args.state or "indist"
    u, cfg, spec, config = _experiment(ctx)
    dist = oracle_visible_distribution(u, cfg, spec)
    inside = set(cfg.subset)
    dense = sum(p for v, p in dist.items() if all(c == 0 or x in inside for x, c in enumerate(v)))
    body = {
        "bunching_dense": float(dense),
        "bunching_perm_sum": oracle_bunch_perm_sum(u, cfg, spec.sites, aux_state(spec)),
        "bunching_closed": bunch_details(u, cfg, spec).value,
        "distribution": [{"occupation": occupation_to_json(v), "probability": p} for v, p in dist.items()],
    }
    ctx.emit_json("oracle", config, body)
    return 0


def cmd_estimate(ctx: _Context) -> int:
    args = ctx.args
    args.state = args.state or "indist"
    u, cfg, spec, config = _experiment(ctx)
    rng = np.random.default_rng([ctx.seed, 1])
    samples = sample_outcomes(rng, u, cfg, spec, args.samples)
    if not samples:
        raise ValidationError("--samples must be positive")
    contrib = subset_avg_contributions(samples, args.k, cfg.m)
    body = {
        "estimate": float(contrib.mean()),
        "std_error": float(contrib.std(ddof=1) / np.sqrt(len(contrib))) if len(contrib) > 1 else None,
        "samples": len(samples),
        "exact": exact_subset_average(u, cfg, spec, args.k) if args.exact else None,
    }
    ctx.emit_json("estimate", {**config, "k": args.k, "samples": args.samples}, body)
    return 0


def cmd_chartable(ctx: _Context) -> int:
    ctx.emit_csv("chartable", {"n": ctx.args.n}, character_table(ctx.args.n).to_csv())
    return 0


def cmd_schur_probe(ctx: _Context) -> int:
    args = ctx.args
    subset = parse_subset(args.subset, args.m)
    cfg = ExperimentConfig(args.m, args.n, args.L, subset, ctx.seed)
    report = schur_convexity_probe(ctx.seed, cfg, args.pairs).to_dict()
    ctx.emit_json("schur-probe", report.pop("config"), report)
    return 0


def _add_experiment_flags(p: argparse.ArgumentParser, state_required: bool = False) -> None:
    p.add_argument("--m", type=int, help="number of visible modes")
    p.add_argument("--sites", help="input modes, e.g. 1-3 (1-based)")
    p.add_argument("--subset", help="target subset S, e.g. 1-4,7 or all (default all)")
    p.add_argument("--state", help="indist | irrep:3,1 | labelled:2,1 | uniform:0.5,0.5 | q:FILE")
    p.add_argument("--L", type=int, help="hidden dimension (default: smallest the state allows)")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--unitary", help="matrix JSON file")
    src.add_argument("--haar-seed", type=int, help="draw a Haar unitary from this seed (default --seed)")
    src.add_argument("--hom", action="store_true", help="Hong-Ou-Mandel preset: 50:50 beamsplitter, sites 1,2, S={1}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="master seed (drawn and reported on stderr if omitted)")
    common.add_argument("--threads", type=int, default=1, help="worker cap; output does not depend on it")
    common.add_argument("--out", help="write to this file instead of stdout")
    common.add_argument("--normalize", action="store_true", help="rescale alpha to sum to 1")

    parser = argparse.ArgumentParser(prog="bosonbunch", description="Generalized bunching of partially distinguishable bosons")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bunch", parents=[common], help="bunching probability b(S|U, rho)")
    _add_experiment_flags(p)
    p.set_defaults(func=cmd_bunch)

    p = sub.add_parser("mean", parents=[common], help="Haar-mean bunching of a uniform state")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", required=True, help="hidden spectrum, e.g. 0.5,0.5")
    p.add_argument("--mc", type=int, default=0, help="also estimate from this many Haar draws")
    p.set_defaults(func=cmd_mean)

    p = sub.add_parser("thermo", parents=[common], help="mean bunching versus inverse temperature")
    p.add_argument("action", choices=["curve", "invert"])
    p.add_argument("--levels", required=True, help="energies, first exactly 0, e.g. 0,1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--betas", default="0:10:50", help="start:stop:count or comma list (curve)")
    p.add_argument("--target", type=float, help="measured mean (invert); read from stdin JSON if omitted")
    p.add_argument("--beta-max", type=float, default=BETA_MAX)
    p.set_defaults(func=cmd_thermo)

    p = sub.add_parser("lieb", parents=[common], help="scan random PSD matrices for immanants above the permanent")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--per-trial", action="store_true", help="include every trial in the report")
    p.set_defaults(func=cmd_lieb)

    p = sub.add_parser("oracle", parents=[common], help="brute-force visible distribution and bunching")
    _add_experiment_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("estimate", parents=[common], help="subset-averaged bunching from sampled outcomes")
    _add_experiment_flags(p)
    p.add_argument("--k", type=int, required=True, help="subset size")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--exact", action="store_true", help="also compute the exact average over all k-subsets")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("chartable", parents=[common], help="character table of S_n as CSV")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_chartable)

    p = sub.add_parser("schur-probe", parents=[common], help="per-unitary Schur convexity evidence")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--subset", default="1")
    p.add_argument("--pairs", type=int, default=100)
    p.set_defaults(func=cmd_schur_probe)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(_Context(args))
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
