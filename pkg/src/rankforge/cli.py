"""Command-line front end.

Every command prints one JSON report with the keys command, inputs,
outputs, timings and version. Exit codes: 0 success, 1 verification false
or certificate below target, 2 usage error, 3 internal invariant break.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import __version__
from .errors import InvariantError, RankforgeError
from .family import DegenerateSolution, build_instance
from .heights import DEFAULT_TOL, Normalization, certify, matching_scales
from .numtheory import DEFAULT_FACTOR_BUDGET
from .quartic import QuarticSolution, TorsionIndex, descend_chain, parametrized_solution, verify_solution
from .report import Report
from .torsion import ZeroCoefficient, classify, diagnostics

ENV_FACTOR_TIMEOUT = "RANKFORGE_FACTOR_TIMEOUT_MS"

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_solution(text: str) -> QuarticSolution:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError(f"expected A,B,C,D, got {text!r}")
    try:
        return QuarticSolution(*(int(p) for p in parts))
    except ValueError:
        raise UsageError(f"non-integer entry in {text!r}") from None


def _global_flags(parser, with_seed=True):
    # SUPPRESS keeps a subcommand from resetting a flag given before it
    g = parser.add_argument_group("global options")
    g.add_argument("--json", dest="json", action="store_true", default=argparse.SUPPRESS)
    g.add_argument("--no-json", dest="json", action="store_false", default=argparse.SUPPRESS)
    g.add_argument("--factor-timeout-ms", type=int, default=argparse.SUPPRESS)
    if with_seed:
        g.add_argument("--seed", dest="rng_seed", type=int, default=argparse.SUPPRESS)
    g.add_argument("--precision-digits", type=int, default=argparse.SUPPRESS)
    g.add_argument("--timings", action="store_true", default=argparse.SUPPRESS,
                   help="include wall-clock timings (makes output nondeterministic)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rankforge", description="Rank-5 family of y^2 = x^3 + Kx from A^4 + D^4 = 2(B^4 + C^4).")
    parser.add_argument("--version", action="version", version=__version__)
    _global_flags(parser)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    solve = sub.add_parser("solve", help="generate solutions")
    ssub = solve.add_subparsers(dest="method", parser_class=_Parser)
    ssub.required = True
    dp = ssub.add_parser("divpoly", help="parametrized solution from n(-3, 9)")
    dp.add_argument("--n", type=int, required=True)
    dp.add_argument("--raw", action="store_true", help="skip the gcd reduction")
    _global_flags(dp)
    de = ssub.add_parser("descend", help="tangent descent chain")
    de.add_argument("--seed", dest="seed_solution", type=parse_solution, required=True, metavar="A,B,C,D")
    de.add_argument("--steps", type=int, required=True)
    _global_flags(de, with_seed=False)

    for name in ("verify", "build"):
        p = sub.add_parser(name)
        p.add_argument("--solution", type=parse_solution, required=True, metavar="A,B,C,D")
        _global_flags(p)

    t = sub.add_parser("torsion")
    grp = t.add_mutually_exclusive_group(required=True)
    grp.add_argument("--solution", type=parse_solution, metavar="A,B,C,D")
    grp.add_argument("--k", type=int)
    _global_flags(t)

    c = sub.add_parser("certify")
    c.add_argument("--solution", type=parse_solution, required=True, metavar="A,B,C,D")
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.add_argument("--normalization", choices=("auto", "x", "half"), default="auto")
    c.add_argument("--workers", type=int, default=1)
    _global_flags(c)
    return parser


def _budget(args) -> float:
    ms = getattr(args, "factor_timeout_ms", None)
    if ms is None:
        env = os.environ.get(ENV_FACTOR_TIMEOUT)
        if env:
            try:
                ms = int(env)
            except ValueError:
                raise UsageError(f"{ENV_FACTOR_TIMEOUT} must be an integer, got {env!r}") from None
    if ms is None:
        return DEFAULT_FACTOR_BUDGET
    if ms <= 0:
        raise UsageError("factor timeout must be positive")
    return ms / 1000


class _Clock:
    def __init__(self):
        self.stages = {}

    def stage(self, name):
        clock = self

        class _Ctx:
            def __enter__(self):
                self.t = time.perf_counter()

            def __exit__(self, *exc):
                clock.stages[name] = round((time.perf_counter() - self.t) * 1000, 3)

        return _Ctx()


def _solve_divpoly(args, budget, seed, clock):
    with clock.stage("parametrize"):
        s = parametrized_solution(args.n, reduce=not args.raw)
    outputs = {"n": args.n, "reduced": not args.raw, "solution": s, "verified": s.is_valid()}
    return EXIT_OK, {"n": args.n, "raw": args.raw}, outputs


def _solve_descend(args, budget, seed, clock):
    with clock.stage("descend"):
        chain = descend_chain(args.seed_solution, args.steps)
    outputs = {"chain": chain, "verified": [s.is_valid() for s in chain]}
    return EXIT_OK, {"seed": args.seed_solution, "steps": args.steps}, outputs


def _verify(args, budget, seed, clock):
    s = args.solution
    with clock.stage("verify"):
        ok = verify_solution(s.A, s.B, s.C, s.D)
    return (EXIT_OK if ok else EXIT_FALSE), {"solution": s}, {"verified": ok}


def _build(args, budget, seed, clock):
    s = args.solution
    with clock.stage("build"):
        inst = build_instance(s)
    with clock.stage("torsion"):
        diag = diagnostics(inst, budget=budget, seed=seed)
    outputs = {
        "k": inst.k,
        "sixteen_s2": inst.sixteen_s2,
        "heron_factors": list(inst.heron_factors),
        "points": {f"P{i}": p for i, p in enumerate(inst.points, 1)},
        "diagnostics": {
            "s_real": diag.s_real,
            "four_s2_is_square": diag.four_s2_is_square,
            "torsion": diag.torsion.value,
            "readings_agree": diag.readings_agree,
        },
    }
    return EXIT_OK, {"solution": s}, outputs


def _torsion(args, budget, seed, clock):
    if args.solution is not None:
        with clock.stage("build"):
            k = build_instance(args.solution).k
        inputs = {"solution": args.solution}
    else:
        k = args.k
        inputs = {"k": k}
    with clock.stage("torsion"):
        cls = classify(k, budget=budget, seed=seed)
    return EXIT_OK, inputs, {"k": k, "torsion": cls.value}


def _certify(args, budget, seed, clock):
    norm = Normalization.parse(args.normalization)
    with clock.stage("build"):
        inst = build_instance(args.solution)
    with clock.stage("certify"):
        cert = certify(inst, tol=args.tol, normalization=norm, budget=budget, seed=seed,
                       workers=args.workers, dps=getattr(args, "precision_digits", None))
    outputs = {
        "k": inst.k,
        "points": {f"P{i}": p for i, p in enumerate(inst.points, 1)},
        "certificate": cert,
        "reference_match": [label for label, _ in matching_scales(cert.determinant, norm)],
    }
    inputs = {"solution": args.solution, "tol": repr(args.tol), "normalization": norm.value}
    code = EXIT_OK if cert.rank_lower_bound >= len(inst.points) else EXIT_FALSE
    return code, inputs, outputs


HANDLERS = {
    ("solve", "divpoly"): _solve_divpoly,
    ("solve", "descend"): _solve_descend,
    ("verify", None): _verify,
    ("build", None): _build,
    ("torsion", None): _torsion,
    ("certify", None): _certify,
}


def _text(report: Report) -> str:
    lines = [f"{report.command}"]

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k, v in obj.items():
                walk(f"{prefix}{k}.", v)
        elif isinstance(obj, list):
            for i, v in enumerate(obj):
                walk(f"{prefix}{i}.", v)
        else:
            lines.append(f"  {prefix[:-1]} = {obj}")

    walk("", report.to_dict()["outputs"])
    return "\n".join(lines)


def run(argv=None, stdout=None, stderr=None) -> tuple[int, Report | None]:
    """Run one command; returns the exit code and the emitted report."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        budget = _budget(args)
        digits = getattr(args, "precision_digits", None)
        if digits is not None and digits < 20:
            raise UsageError("--precision-digits must be at least 20")
    except UsageError as e:
        print(f"usage error: {e}", file=stderr)
        return EXIT_USAGE, None
    seed = getattr(args, "rng_seed", 0)
    command = args.command if args.command != "solve" else f"solve {args.method}"
    handler = HANDLERS[(args.command, getattr(args, "method", None))]
    clock = _Clock()
    try:
        code, inputs, outputs = handler(args, budget, seed, clock)
    except (UsageError, TorsionIndex, DegenerateSolution, ZeroCoefficient, ValueError) as e:
        print(f"usage error: {e}", file=stderr)
        return EXIT_USAGE, None
    except InvariantError as e:
        print(f"invariant broken: {e}", file=stderr)
        return EXIT_INVARIANT, None
    except RankforgeError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_FALSE, None
    report = Report(command, inputs, outputs, clock.stages if getattr(args, "timings", False) else {})
    if getattr(args, "json", True):
        print(report.to_json(), file=stdout)
    else:
        print(_text(report), file=stdout)
    return code, report


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
