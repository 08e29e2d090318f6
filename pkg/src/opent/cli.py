"""Command-line interface.

Every command prints a JSON report on stdout.  Exit status is 0 when all
requested checks pass, 1 when a check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import locc, oracles
from .monotones import MonotoneDomainError, eval_pure, get_monotone
from .optimizer import SolverConfig, compare, minimize_convex_roof, minimize_ef
from .statefile import load_state, write_fixtures
from .states import InvalidStateError, PureState, schmidt_decompose

SEED_ENV = "OPENT_SEED"
THEOREM4_TOL = 2e-3


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InvalidStateError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _config(args) -> SolverConfig:
    return SolverConfig(
        restarts=args.restarts,
        cardinality=args.cardinality,
        max_iters=args.max_iters,
        seed=args.seed,
        threads=args.threads,
    )


def _load(args, pure_only=False):
    state, digest = load_state(args.statefile)
    if pure_only and not isinstance(state, PureState):
        raise InvalidStateError("this command needs a pure-state file")
    return state, {"path": args.statefile, "sha256": digest}


def cmd_schmidt(args):
    psi, inp = _load(args, pure_only=True)
    lam = schmidt_decompose(psi)
    return inp, None, {"schmidt_vector": lam.tolist()}


def cmd_ef(args):
    state, inp = _load(args)
    cfg = _config(args)
    return inp, cfg, minimize_ef(state, get_monotone(args.monotone), cfg).to_dict()


def cmd_roof(args):
    state, inp = _load(args)
    cfg = _config(args)
    return inp, cfg, minimize_convex_roof(state, get_monotone(args.monotone), cfg).to_dict()


def cmd_compare(args):
    state, inp = _load(args)
    cfg = _config(args)
    return inp, cfg, compare(state, get_monotone(args.monotone), cfg, tolerance=args.tolerance).to_dict()


def cmd_theorem4(args):
    spec = get_monotone(args.monotone)
    params = oracles.Theorem4Params.from_c1sq(args.eta, args.c1sq)
    vec = oracles.theorem4_vector(params)
    results = {"value": eval_pure(spec, vec), "optimal_schmidt_vector": vec.tolist()}
    cfg = None
    if args.verify:
        cfg = _config(args)
        solved = minimize_ef(oracles.theorem4_state(params), spec, cfg).value
        results["solver_value"] = solved
        results["passed"] = abs(solved - results["value"]) <= THEOREM4_TOL
    return None, cfg, results


def cmd_wootters(args):
    state, inp = _load(args)
    return inp, None, {"concurrence": oracles.wootters_concurrence(state)}


def cmd_locc_test(args):
    state, inp = _load(args)
    spec = get_monotone(args.monotone)
    cfg = _config(args)
    da, db = state.dims
    checks = []
    for n in range(args.channels):
        side = args.side if args.side != "alternate" else "AB"[n % 2]
        seq = np.random.SeedSequence(args.seed, spawn_key=(n,))
        ch = locc.random_local_channel(da if side == "A" else db, args.kraus, side, seq)
        rep = locc.strong_monotonicity_check(state, spec, ch, cfg, slack=args.slack)
        checks.append({"channel": n, "side": side, **rep.to_dict()})
    failures = [c["channel"] for c in checks if not c["passed"]]
    return inp, cfg, {"checks": checks, "failures": failures, "passed": not failures}


def cmd_fixtures(args):
    paths = write_fixtures(args.outdir, args.seed)
    return None, None, {"written": sorted(p.name for p in paths)}


def _add_solver_args(p, monotone=True):
    if monotone:
        p.add_argument("--monotone", required=True, help="entropy, concurrence or avg_e")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--cardinality", type=int, default=None, help="ensemble size (default rank**2)")
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"random seed (default ${SEED_ENV} or 0)")
    common.add_argument("--output", "-o", default=None, help="also write the report to this file")
    common.add_argument("--timing", action="store_true", help="include wall time in the report")

    parser = argparse.ArgumentParser(prog="opent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schmidt", parents=[common], help="Schmidt vector of a pure state")
    p.add_argument("statefile")
    p.set_defaults(func=cmd_schmidt)

    for name, func, text in [
        ("ef", cmd_ef, "least pure-state entanglement convertible to the state"),
        ("roof", cmd_roof, "convex-roof value"),
        ("compare", cmd_compare, "both values and their gap"),
    ]:
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("statefile")
        _add_solver_args(p)
        if name == "compare":
            p.add_argument("--tolerance", type=float, default=2e-3)
        p.set_defaults(func=func)

    p = sub.add_parser("theorem4", parents=[common], help="closed-form value for eta|phi0><phi0| + (1-eta)|33><33|")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--c1sq", type=float, required=True)
    p.add_argument("--verify", action="store_true", help="also run the solver and compare")
    _add_solver_args(p)
    p.set_defaults(func=cmd_theorem4)

    p = sub.add_parser("wootters", parents=[common], help="two-qubit concurrence (closed form)")
    p.add_argument("statefile")
    p.set_defaults(func=cmd_wootters)

    p = sub.add_parser("locc-test", parents=[common], help="strong monotonicity under random one-sided channels")
    p.add_argument("statefile")
    p.add_argument("--channels", type=int, default=10)
    p.add_argument("--kraus", type=int, default=2)
    p.add_argument("--side", choices=["A", "B", "alternate"], default="alternate")
    p.add_argument("--slack", type=float, default=locc.SOLVER_SLACK)
    _add_solver_args(p)
    p.set_defaults(func=cmd_locc_test)

    p = sub.add_parser("fixtures", parents=[common], help="write the fixture state files")
    p.add_argument("--outdir", default="fixtures")
    p.set_defaults(func=cmd_fixtures)
    return parser


def _echo(args) -> dict:
    skip = {"func", "output", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        if args.seed is None:
            args.seed = _default_seed()
        inp, cfg, results = args.func(args)
    except (InvalidStateError, MonotoneDomainError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"opent {args.command}: error: {msg}", file=sys.stderr)
        return 2
    report = {
        "command": args.command,
        "options": _echo(args),
        "input": inp,
        "config": cfg.to_dict() if cfg is not None else None,
        "seed": args.seed,
        "results": results,
    }
    if args.timing:
        report["wall_time"] = time.perf_counter() - t0
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    return 0 if results.get("passed", True) else 1


if __name__ == "__main__":
    sys.exit(main())
