"""Command-line interface ``ri``."""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from rispace.conditions import DEFAULT_GRID, profile_report
from rispace.harness.report import jsonable
from rispace.harness.suites import DEFAULT_SEED, DEFAULT_SIZE, SUITE_NAMES, UnknownSuiteError, run_suite
from rispace.norms import InadmissibleNormWarning, UnsupportedAssociateError, evaluate
from rispace.operators import OPERATORS, apply
from rispace.optimal import NonexistenceError, optimal
from rispace.profiles import ProfileError
from rispace.specs import SpecError, parse_norm, parse_profile
from rispace.stepfunction import StepFunction

__all__ = ["main", "build_parser", "parse_points"]

DEFAULT_GRID_POINTS = 64


def parse_points(text: str) -> np.ndarray:
    """``0.5``, ``0.1,0.2`` or ``grid[:N]`` (log-spaced in ``[1e-6, 1)``)."""
    text = text.strip()
    if text.startswith("grid"):
        n = DEFAULT_GRID_POINTS
        if text != "grid":
            head, _, count = text.partition(":")
            if head != "grid" or not count.isdigit() or int(count) < 1:
                raise ValueError(f"expected grid or grid:N, got {text!r}")
            n = int(count)
        return np.geomspace(1e-6, 1.0 - 1e-6, n)
    pts = np.array([float(x) for x in text.split(",")])
    if np.any((pts <= 0) | (pts >= 1)):
        raise ValueError("evaluation points must lie in (0, 1)")
    return pts


def _read_fn(path: str) -> StepFunction:
    if path == "-":
        return StepFunction.from_csv(sys.stdin.read())
    return StepFunction.from_csv(path)


def _dump(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True)


def _cmd_check_profile(args) -> int:
    I = parse_profile(args.profile)
    print(_dump({"profile": I.spec(), **profile_report(I, args.grid)}))
    return 0


def _cmd_eval(args) -> int:
    f = _read_fn(args.fn)
    if args.norm:
        N = parse_norm(args.norm)
        res = evaluate(N, f)
        print(_dump({"norm": N.spec(), "value": res.value, "admissible": res.admissible, "note": res.note}))
        return 0
    if not args.profile:
        raise ValueError("--op needs --profile")
    I = parse_profile(args.profile)
    kwargs = {"m": args.m} if args.op == "HI" else {}
    g = apply(args.op, I, f, **kwargs)
    t = parse_points(args.at)
    values = np.atleast_1d(g(t))
    lines = ["t,value"] + [f"{ti!r},{vi!r}" for ti, vi in zip(t.tolist(), values.tolist())]
    print("\n".join(lines))
    return 0


def _cmd_optimal(args) -> int:
    I = parse_profile(args.profile)
    X = parse_norm(args.space)
    f = _read_fn(args.fn)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InadmissibleNormWarning)
        res = optimal(args.mode, X, I, f, allow_outside=args.allow_outside)
    print(_dump({"value": res.value, "warnings": list(res.warnings), "regime": res.regime,
                 "profile_report": res.profile_report}))
    return 0


def _cmd_verify(args) -> int:
    res = run_suite(args.suite, seed=args.seed, size=args.size, timing=args.timing)
    text = res.to_json()
    if args.json == "-":
        sys.stdout.write(text)
    else:
        if args.json:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
        for a in res.assertions:
            print(f"{'PASS' if a.passed else 'FAIL'}  {a.id}")
        print(f"{res.suite}: {len(res.assertions) - len(res.failures)}/{len(res.assertions)} assertions passed")
    return 0 if res.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ri", description="Rearrangement-invariant norms, profiles and operators.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-profile", help="condition report and class Q constants of a profile")
    p.add_argument("--profile", required=True, help="profile spec, e.g. power(0.5), gauss, tab:file.csv")
    p.add_argument("--grid", type=int, default=DEFAULT_GRID, help="condition grid size")
    p.set_defaults(func=_cmd_check_profile)

    p = sub.add_parser("eval", help="evaluate a norm or an operator on a step function")
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--norm", help="norm spec, e.g. Lp:2, LZ:6,2, mI:power(0.5)")
    what.add_argument("--op", choices=sorted(OPERATORS), help="operator name")
    p.add_argument("--profile", help="profile spec (operators only)")
    p.add_argument("--fn", required=True, help="step function CSV (breakpoint,value); - reads stdin")
    p.add_argument("--at", default="grid", help="points: t, t1,t2,... or grid[:N] (operators only)")
    p.add_argument("--m", type=int, default=1, help="order of H_I")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("optimal", help="optimal target or domain norm of a step function")
    p.add_argument("--mode", required=True, choices=["target", "domain", "target-assoc"])
    p.add_argument("--space", required=True, help="norm spec of the fixed space")
    p.add_argument("--profile", required=True)
    p.add_argument("--fn", required=True)
    p.add_argument("--allow-outside", action="store_true",
                   help="accept profiles outside the certified regime (warnings are still reported)")
    p.set_defaults(func=_cmd_optimal)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", required=True, help=f"one of {', '.join(SUITE_NAMES)}, all")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--size", type=int, default=DEFAULT_SIZE)
    p.add_argument("--json", help="write the JSON report here; - prints it instead of the summary")
    p.add_argument("--timing", action="store_true", help="record runtime_ms (makes reports run-dependent)")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UnknownSuiteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NonexistenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ProfileError, UnsupportedAssociateError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
