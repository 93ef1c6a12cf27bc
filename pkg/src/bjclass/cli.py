"""bjclass command line: orth, symmetry, classify, compare, verify.

Exit codes: 0 success (or all checks pass), 1 a check or comparison failed,
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import classify as cl
from . import orthogonality as orth
from . import symmetry as sym
from . import verify
from .blockalg import DEFAULT_TOL
from .formats import ParseError, emit_report, load_algebra, load_element


class _Result:
    """Adapter so plain dicts render through emit_report."""

    def __init__(self, data: dict):
        self.data = data

    def to_json(self) -> dict:
        return self.data


def _common(suppress: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--tol", type=float, default=default, help=f"tolerance (default {DEFAULT_TOL:g})")
    p.add_argument("--seed", type=int, default=default, help="random seed (default 0)")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False,
                   help="print JSON instead of a table")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bjclass", parents=[_common(True)],
                                     description="Birkhoff-James orthogonality in finite-dimensional C*-algebras")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(True)

    p = sub.add_parser("orth", parents=[common], help="decide A ⊥ B for two elements")
    p.add_argument("--algebra", required=True, help="algebra text such as 'field=R; R + M2(C)', JSON, or a file")
    p.add_argument("--a", required=True, help="JSON file with A")
    p.add_argument("--b", required=True, help="JSON file with B")
    p.add_argument("--oracle", action="store_true", help="also run the brute-force minimization")

    p = sub.add_parser("symmetry", parents=[common], help="left/right symmetry and smoothness of an element")
    p.add_argument("--algebra", required=True)
    p.add_argument("--element", required=True, help="JSON file with the element")
    p.add_argument("--mode", choices=("structural", "sampled", "both"), default="both")
    p.add_argument("--trials", type=int, default=300)

    p = sub.add_parser("classify", parents=[common], help="signature and summands of an algebra")
    p.add_argument("--algebra", required=True)
    p.add_argument("--mode", choices=("structural", "bj", "both"), default="both")

    p = sub.add_parser("compare", parents=[common], help="exit 0 iff the two signatures agree")
    p.add_argument("--a", required=True, help="first algebra")
    p.add_argument("--b", required=True, help="second algebra")
    p.add_argument("--mode", choices=("structural", "bj"), default="bj")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite over the catalog")
    p.add_argument("suite", nargs="?", default="all", choices=verify.SUITES + ("all",))
    p.add_argument("--trials", type=int, default=None, help="elements or pairs per algebra")
    return parser


def _emit(data, as_json: bool):
    print(emit_report(data if hasattr(data, "to_json") else _Result(data), "json" if as_json else "text"))


def _cmd_orth(args, tol, seed) -> int:
    alg = load_algebra(args.algebra)
    a = load_element(args.a, alg)
    b = load_element(args.b, alg)
    verdict, witness = orth.bj_orthogonal(a, b, tol)
    out = {"algebra": str(alg), "orthogonal": verdict,
           "witness": witness.to_json() if witness is not None else None}
    if args.oracle:
        out["oracle"] = orth.bj_oracle(a, b, tol)
    _emit(out, args.json)
    return 0


def _cmd_symmetry(args, tol, seed) -> int:
    alg = load_algebra(args.algebra)
    a = load_element(args.element, alg)
    if args.trials < 1:
        raise ParseError("--trials must be positive")
    out = {"algebra": str(alg)}
    code = 0
    if args.mode in ("structural", "both"):
        out["structural"] = sym.structural_verdict(a, tol).to_json()
    if args.mode in ("sampled", "both"):
        out["sampled"] = sym.sampled_verdict(a, args.trials, seed, tol).to_json()
    if args.mode == "both":
        keys = ("left", "right", "smooth")
        out["agree"] = all(out["structural"][k] == out["sampled"][k] for k in keys)
        code = 0 if out["agree"] else 1
    _emit(out, args.json)
    return code


def _cmd_classify(args, tol, seed) -> int:
    alg = load_algebra(args.algebra)
    report = cl.signature(alg, args.mode, seed, tol=tol)
    _emit(report, args.json)
    return 1 if report.matches is False else 0


def _cmd_compare(args, tol, seed) -> int:
    a = load_algebra(args.a)
    b = load_algebra(args.b)
    ra = cl.signature(a, args.mode, seed, tol=tol)
    rb = cl.signature(b, args.mode, seed, tol=tol)
    equal = cl.signatures_equal(ra, rb)
    out = {"a": ra.to_json(), "b": rb.to_json(), "equal": equal}
    if args.json:
        _emit(out, True)
    else:
        print(f"{a}  vs  {b}: {'equal' if equal else 'different'}")
    return 0 if equal else 1


def _cmd_verify(args, tol, seed) -> int:
    if args.trials is not None and args.trials < 1:
        raise ParseError("--trials must be positive")
    suite = verify.run_suite(args.suite, args.trials, seed, tol)
    print(suite.dumps() if args.json else suite.to_text())
    return 0 if suite.passed else 1


COMMANDS = {"orth": _cmd_orth, "symmetry": _cmd_symmetry, "classify": _cmd_classify,
            "compare": _cmd_compare, "verify": _cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    tol = getattr(args, "tol", None) or DEFAULT_TOL
    seed = getattr(args, "seed", None) or 0
    args.json = getattr(args, "json", False)
    if tol <= 0:
        print("bjclass: --tol must be positive", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args, tol, seed)
    except (ParseError, ValueError, OSError) as exc:
        print(f"bjclass: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
