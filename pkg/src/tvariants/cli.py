"""
Command-line entry point.

  tvariants eggbox local 5 [2,1,3,4,4] --format dot
  tvariants construct variant-to-local [1,2,2]
  tvariants verify local-to-variant 4 --exhaustive
  tvariants mu variant 3 [1,1,1] --max-degree 5
  tvariants iso tn 3 variant 3 [2,3,1]

Exit codes: 0 success, 1 failure or counterexample, 2 indeterminate or
budget/cap exhausted, 3 bounds not exact (mu only), 64 usage error.
Numeric flags fall back to TVARIANTS_<FLAG> environment variables.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import green, serialize
from .constructions import local_as_variant, variant_as_local
from .oracle import ORACLE_CAP, SearchBudget, are_isomorphic, minimal_degree
from .semigroup import GREEN_CAP, CapExceeded, FiniteSemigroup, full_tn, local_subsemigroup, variant
from .suites import EXHAUSTIVE_DEGREE_CAP, SUITES, Mode, run_suite
from .transformation import Transformation
from .witness import WitnessError, verify_witness

EXIT_OK, EXIT_FAIL, EXIT_INDETERMINATE, EXIT_BOUNDED, EXIT_USAGE = 0, 1, 2, 3, 64
ENV_PREFIX = "TVARIANTS_"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _env(name: str, kind, default):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return default
    try:
        return kind(raw)
    except ValueError:
        raise UsageError(f"bad value for {ENV_PREFIX}{name.upper()}: {raw!r}") from None


def parse_spec(tokens: list[str]) -> tuple[FiniteSemigroup, list[str]]:
    """Consume one semigroup spec ("tn N", "variant N [a]", "local N [a]")."""
    if not tokens:
        raise UsageError("missing semigroup spec")
    kind, rest = tokens[0], tokens[1:]
    if kind not in ("tn", "variant", "local"):
        raise UsageError(f"unknown semigroup kind {kind!r} (tn, variant, local)")
    if not rest:
        raise UsageError(f"{kind} needs a degree")
    try:
        n = int(rest[0])
    except ValueError:
        raise UsageError(f"degree must be an integer, got {rest[0]!r}") from None
    if n < 1:
        raise UsageError("degree must be >= 1")
    try:
        T = full_tn(n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if kind == "tn":
        return T, rest[1:]
    if len(rest) < 2:
        raise UsageError(f"{kind} needs a transformation like [1,1,2]")
    a = _parse_transformation(rest[1])
    if a.degree != n:
        raise UsageError(f"{a} has degree {a.degree}, expected {n}")
    S = variant(T, a) if kind == "variant" else local_subsemigroup(T, a)
    return S, rest[2:]


def _parse_transformation(text: str) -> Transformation:
    try:
        return Transformation.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _one_spec(tokens: list[str]) -> FiniteSemigroup:
    S, rest = parse_spec(tokens)
    if rest:
        raise UsageError(f"unexpected arguments: {' '.join(rest)}")
    return S


def _dump(obj) -> None:
    json.dump(obj, sys.stdout, indent=1, sort_keys=False)
    sys.stdout.write("\n")


def _budget(args) -> SearchBudget:
    return SearchBudget(
        max_nodes=args.max_nodes if args.max_nodes is not None else _env("max_nodes", int, 1_000_000),
        max_seconds=args.max_seconds if args.max_seconds is not None else _env("max_seconds", float, 60.0),
        max_degree=args.max_degree if args.max_degree is not None else _env("max_degree", int, 6),
    )


# -- verbs ---------------------------------------------------------------------

def cmd_eggbox(args) -> int:
    S = _one_spec(args.spec)
    cap = args.cap if args.cap is not None else _env("cap", int, GREEN_CAP)
    try:
        g = green.green_structure(S, cap=cap)
    except CapExceeded as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INDETERMINATE
    box = green.egg_box(S, g)
    if args.format == "dot":
        sys.stdout.write(green.to_dot(box))
    elif args.format == "text":
        sys.stdout.write(green.to_text(box))
    else:
        _dump(serialize.eggbox_to_json(box))
    return EXIT_OK


def cmd_construct(args) -> int:
    a = _parse_transformation(args.a)
    seed = args.seed if args.seed is not None else _env("seed", int, None)
    try:
        if args.direction == "local-to-variant":
            r = local_as_variant(a)
            verdict = verify_witness(r.witness)
            out = {"schema": "tvariants.construction/1", "direction": args.direction, "a": str(a),
                   "b": str(r.b), "relabel": str(r.relabel), "c": str(r.c), "rank_c": r.c.rank}
        else:
            rng = random.Random(seed) if seed is not None else None
            r = variant_as_local(a, rng=rng)
            verdict = verify_witness(r.witness)
            out = {"schema": "tvariants.construction/1", "direction": args.direction, "a": str(a),
                   "normalizer": str(r.normalizer), "relabel": str(r.relabel),
                   "scaffold": serialize.scaffold_to_json(r.scaffold)}
    except WitnessError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if not verdict:
        print(f"verification failed: {verdict.reason}", file=sys.stderr)
        return EXIT_FAIL
    out["witness"] = serialize.witness_to_json(r.witness, verdict)
    _dump(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.exhaustive:
        mode = Mode(True)
    else:
        mode = Mode(False,
                    args.seed if args.seed is not None else _env("seed", int, 0),
                    args.count if args.count is not None else _env("count", int, 100))
    cap = args.cap if args.cap is not None else _env("cap", int, EXHAUSTIVE_DEGREE_CAP)
    try:
        rep = run_suite(args.suite, args.n, mode, degree_cap=cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _dump(rep.to_json())
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_mu(args) -> int:
    S = _one_spec(args.spec)
    b = minimal_degree(S, _budget(args))
    _dump({"schema": "tvariants.degree/1", "size": len(S), **b.to_json()})
    return {"exact": EXIT_OK, "bounded": EXIT_BOUNDED}.get(b.status, EXIT_INDETERMINATE)


def cmd_iso(args) -> int:
    A, rest = parse_spec(args.specs)
    B = _one_spec(rest)
    cap = args.cap if args.cap is not None else _env("cap", int, ORACLE_CAP)
    res = are_isomorphic(A, B, cap=cap, budget=_budget(args))
    _dump({"schema": "tvariants.iso/1", **res.to_json()})
    return EXIT_OK if res.definitive else EXIT_INDETERMINATE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tvariants", description="Variants and local subsemigroups of full transformation semigroups.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def budget_flags(q):
        q.add_argument("--max-nodes", type=int)
        q.add_argument("--max-seconds", type=float)
        q.add_argument("--max-degree", type=int)

    q = sub.add_parser("eggbox", help="egg-box diagram of tn N | variant N [a] | local N [a]")
    q.add_argument("spec", nargs="+")
    q.add_argument("--format", choices=["json", "dot", "text"], default="text")
    q.add_argument("--cap", type=int)
    q.set_defaults(func=cmd_eggbox)

    q = sub.add_parser("construct", help="build and verify an isomorphism witness")
    q.add_argument("direction", choices=["local-to-variant", "variant-to-local"])
    q.add_argument("a")
    q.add_argument("--format", choices=["json"], default="json")
    q.add_argument("--seed", type=int, help="randomise the choice of spare points")
    q.set_defaults(func=cmd_construct)

    q = sub.add_parser("verify", help="run a named verification sweep")
    q.add_argument("suite", choices=list(SUITES))
    q.add_argument("n", type=int)
    q.add_argument("--exhaustive", action="store_true")
    q.add_argument("--seed", type=int)
    q.add_argument("--count", type=int)
    q.add_argument("--cap", type=int, help="degree cap for exhaustive sweeps")
    q.add_argument("--format", choices=["json"], default="json")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("mu", help="bounds on the minimal transformation degree")
    q.add_argument("spec", nargs="+")
    budget_flags(q)
    q.add_argument("--format", choices=["json"], default="json")
    q.set_defaults(func=cmd_mu)

    q = sub.add_parser("iso", help="isomorphism test between two semigroups")
    q.add_argument("specs", nargs="+")
    budget_flags(q)
    q.add_argument("--cap", type=int)
    q.add_argument("--format", choices=["json"], default="json")
    q.set_defaults(func=cmd_iso)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tvariants: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
