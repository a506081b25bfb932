"""Command line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on usage or
parameter errors.  With ``--output json`` exactly one JSON document goes to
standard output; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .heights import _fmt, anticanonical_pseudoheight, height_tables, presilting_check, pseudoheight
from .lattice import (
    DivisorClass,
    cremona_reflection,
    enumerate_minus_one_classes,
    iota_involution,
    permutation_isometry,
)
from .linear_systems import DEFAULT_PRIME, DEFAULT_TRIALS, OracleConfig, h0_oracle, standard_form_reduce
from .numerical import (
    Collection,
    ConsistencyError,
    chi_divisor,
    gram_matrix,
    is_numerically_exceptional,
    standard_collection,
)
from .verifier import PRESILTING_SHIFTS, TheoremConfig, build_theorem_collection, orbit_search, verify_theorem

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let literals such as "-6;-1,-2" through as positionals
        self._negative_number_matcher = re.compile(r"^-\d+($|;|\.\d)")


def _default_seed() -> int:
    raw = os.environ.get("PHANTOM_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"PHANTOM_SEED must be an integer, got {raw!r}")


def _common(degree_bound: int = 10) -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--output", choices=("json", "text"), default="text")
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--seed", type=int, default=None, help="defaults to $PHANTOM_SEED, else 0")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--degree-bound", type=int, default=degree_bound)
    return p


def _collection_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("divisors", nargs="*", help="divisor literals d;m1,...,mn")
    p.add_argument("--collection", choices=("theorem", "standard"), default=None,
                   help="use a built-in 13-term collection instead of literals")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="phantom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("verify-theorem", parents=[common], help="run the full six-stage verification")

    for name, text in (("chi", "Euler characteristic"), ("h0", "generic h^0 via the finite-field oracle"),
                       ("standard-form", "Cremona reduction to standard form")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("divisor")

    for name, text in (("euler-matrix", "Gram matrix of the Euler pairing"),
                       ("pseudoheight", "pseudoheight and anticanonical pseudoheight")):
        _collection_args(sub.add_parser(name, parents=[common], help=text))

    sp = sub.add_parser("presilting", parents=[common], help="check Hom(P, P[i]) = 0 for i > 0")
    _collection_args(sp)
    sp.add_argument("--shifts", default=None, help="comma separated shifts; defaults to 0,2,...,2,4,6")

    sp = sub.add_parser("search", parents=[common], help="isometry orbit of a collection")
    _collection_args(sp)
    sp.add_argument("--generator", action="append", default=None,
                    help="iota | cremona:i,j,k | perm:i1,...,in  (repeatable)")
    sp.add_argument("--depth", type=int, default=1)

    sp = sub.add_parser("minus-one-classes", parents=[_common(degree_bound=2)],
                        help="enumerate (-1)-classes up to a degree bound")
    sp.add_argument("--points", type=int, default=10)
    return parser


def _collection(args) -> Collection:
    if args.collection == "theorem":
        return build_theorem_collection()
    if args.collection == "standard" or not args.divisors:
        return standard_collection(10)
    return Collection(tuple(DivisorClass.parse(t) for t in args.divisors))


def _generator(spec: str, n: int):
    kind, _, rest = spec.partition(":")
    if kind == "iota":
        return iota_involution(n)
    idx = [int(x) for x in rest.split(",")] if rest else []
    if kind == "cremona":
        return cremona_reflection(n, *idx)
    if kind == "perm":
        return permutation_isometry(n, idx)
    raise ValueError(f"unknown generator {spec!r}")


def _emit(args, payload, text: str) -> None:
    if args.output == "json":
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        print(text)


def _run(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    oracle = OracleConfig(args.prime, seed, args.trials)
    cmd = args.command

    if cmd == "verify-theorem":
        cfg = TheoremConfig(args.prime, seed, args.trials, args.degree_bound, args.output)
        report = verify_theorem(cfg)
        lines = [f"{s.name:<24} {'pass' if s.passed else 'FAIL'}  {s.duration_ms:9.1f} ms" for s in report.stages]
        lines.append(f"verdict: {report.verdict}")
        _emit(args, report.to_json(), "\n".join(lines))
        return EXIT_OK if report.passed else EXIT_FAIL

    if cmd == "chi":
        D = DivisorClass.parse(args.divisor)
        chi = chi_divisor(D)
        _emit(args, {"divisor": str(D), "chi": chi}, str(chi))
    elif cmd == "h0":
        result = h0_oracle(DivisorClass.parse(args.divisor), oracle)
        _emit(args, result.to_json(), f"{result.value} {result.certificate.value}")
    elif cmd == "standard-form":
        trace = standard_form_reduce(DivisorClass.parse(args.divisor))
        _emit(args, trace.to_json(), f"{trace.result} {trace.verdict.value} ({trace.cremona_steps} Cremona steps)")
    elif cmd == "euler-matrix":
        g = gram_matrix(_collection(args))
        _emit(args, g.to_json(), "\n".join(" ".join(f"{x:4d}" for x in row) for row in g.rows))
    elif cmd == "pseudoheight":
        c = _collection(args)
        tables = height_tables(c, oracle)
        ph = pseudoheight(c, oracle, tables)
        ph_ac = anticanonical_pseudoheight(c, oracle, tables)
        _emit(args, {"ph": ph.to_json(), "ph_ac": ph_ac.to_json()},
              f"ph = {_fmt(ph.value)}\nph_ac = {_fmt(ph_ac.value)}"
              + (f"\nwitness chain: {list(ph_ac.witness.chain)}" if ph_ac.witness else ""))
    elif cmd == "presilting":
        c = _collection(args)
        if args.shifts is not None:
            shifts = [int(x) for x in args.shifts.split(",")]
        elif len(c) == len(PRESILTING_SHIFTS):
            shifts = list(PRESILTING_SHIFTS)
        else:
            shifts = [0] * len(c)
        result = presilting_check(c, shifts, oracle)
        first = result.first
        text = "presilting" if result.ok else (
            f"not presilting: Ext^{first.degree}({c.labels[first.a]}, {c.labels[first.b]}) has dimension {first.dimension}"
            f" ({len(result.violations)} violations)")
        _emit(args, {"presilting": result.ok, "shifts": shifts,
                     "violations": [v.to_json() for v in result.violations]}, text)
        return EXIT_OK if result.ok else EXIT_FAIL
    elif cmd == "search":
        base = _collection(args)
        gens = [_generator(g, base.n) for g in (args.generator or ["iota"])]
        found = orbit_search(gens, base, args.depth)
        payload = [{"entries": [str(D) for D in c], "exceptional": is_numerically_exceptional(c).ok} for c in found]
        _emit(args, payload, "\n".join(" ".join(str(D) for D in c) for c in found))
    elif cmd == "minus-one-classes":
        classes = [str(c.cls) for c in enumerate_minus_one_classes(args.points, args.degree_bound)]
        _emit(args, {"points": args.points, "degree_bound": args.degree_bound, "count": len(classes),
                     "classes": classes}, "\n".join(classes + [f"count: {len(classes)}"]))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except (ValueError, IndexError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"consistency error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
