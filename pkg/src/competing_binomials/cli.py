"""``competing-binomials`` command line.

Exit codes: 0 success, 1 usage or parameter error, 2 a verification check
failed, 3 the exact and quadrature values disagree by more than 1e-10.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .exact import DomainError, DuelParams, as_rational, p_exact, p_trace
from .montecarlo import SimConfig, mc_double_exp, mc_duel
from .phases import (
    ModeBeyondRange,
    UnimodalityViolation,
    classify,
    find_mode,
    max_asymptotic,
    mode_asymptotic,
)
from .quadrature import QuadratureError, p_quadrature
from .records import OutputRecord
from .verification import SUITES, run_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_DISAGREE = 3

AGREEMENT_TOL = 1e-10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common(p: argparse.ArgumentParser, fmt: str) -> None:
    p.add_argument("--format", choices=("csv", "json"), default=fmt)
    p.add_argument("--out", help="write here instead of stdout")


def _params(p: argparse.ArgumentParser, *, n: bool = True) -> None:
    p.add_argument("--alpha", type=_rational, required=True, help='"p/q" or decimal, parsed exactly')
    if n:
        p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="competing-binomials", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="one value of p_n^{r,d}")
    _params(p)
    p.add_argument("--method", choices=("exact", "quadrature", "both"), default="both")
    _common(p, "json")

    p = sub.add_parser("trace", help="p_n with first and second differences over a range of n")
    _params(p, n=False)
    p.add_argument("--n-from", type=int, default=0)
    p.add_argument("--n-to", type=int, required=True)
    p.add_argument("--method", choices=("exact", "quadrature", "both"), default="exact")
    _common(p, "csv")

    p = sub.add_parser("classify", help="monotonicity regime of (alpha, r, d)")
    _params(p, n=False)
    p.add_argument("--mode-n-max", type=int, default=500)
    _common(p, "json")

    p = sub.add_parser("mode", help="exact mode for d = 1 against its asymptotic law")
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n-max", type=int, default=500)
    p.add_argument("--paranoid", action="store_true", help="scan to n_max for unimodality violations")
    _common(p, "json")

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    _common(p, "json")

    p = sub.add_parser("simulate", help="Monte Carlo coin duel")
    _params(p)
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int)
    _common(p, "json")

    p = sub.add_parser("simulate-doubleexp", help="Monte Carlo double-sided exponential walk")
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=float, default=1.0, help="scale of the increments")
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int)
    _common(p, "json")
    return parser


def _duel(args) -> DuelParams:
    return DuelParams(args.alpha, args.n, args.r, args.d)


def _rd(args) -> dict:
    return {"alpha": str(args.alpha), "r": args.r, "d": args.d}


def cmd_compute(args) -> tuple[OutputRecord, int]:
    params = _duel(args)
    fields = {}
    code = EXIT_OK
    if args.method in ("exact", "both"):
        exact = p_exact(params)
        fields["p_exact"] = str(exact)
        fields["p_exact_float"] = repr(float(exact))
    if args.method in ("quadrature", "both"):
        fields["p_quadrature"] = repr(p_quadrature(params))
    if args.method == "both":
        gap = abs(float(exact) - float(fields["p_quadrature"]))
        fields["abs_difference"] = repr(gap)
        fields["agree"] = gap <= AGREEMENT_TOL
        if not fields["agree"]:
            code = EXIT_DISAGREE
    params_out = {**_rd(args), "n": args.n, "method": args.method}
    return OutputRecord("compute", [], params_out, fields), code


def cmd_trace(args) -> tuple[OutputRecord, int]:
    if args.n_from > args.n_to:
        raise UsageError("--n-from must not exceed --n-to")
    lo, hi = args.n_from, args.n_to
    # two extra points so every listed n has forward differences
    ns = range(lo, hi + 3)
    exact = quad = None
    if args.method in ("exact", "both"):
        exact = p_trace(args.alpha, args.r, args.d, hi + 2, lo)
    if args.method in ("quadrature", "both"):
        quad = [p_quadrature(DuelParams(args.alpha, n, args.r, args.d)) for n in ns]
    main = exact if exact is not None else quad
    text = str if exact is not None else repr

    columns = ["n", "p", "diff", "second_diff"]
    if exact is not None:
        columns.append("p_float")
    if args.method == "both":
        columns.append("p_quadrature")
    rows = []
    worst = 0.0
    for k in range(hi - lo + 1):
        d1 = main[k + 1] - main[k]
        d2 = main[k + 2] - 2 * main[k + 1] + main[k]
        row = [str(lo + k), text(main[k]), text(d1), text(d2)]
        if exact is not None:
            row.append(repr(float(exact[k])))
        if args.method == "both":
            row.append(repr(quad[k]))
            worst = max(worst, abs(float(exact[k]) - quad[k]))
        rows.append(row)
    fields = {"points": len(rows)}
    code = EXIT_OK
    if args.method == "both":
        fields["max_abs_difference"] = repr(worst)
        fields["agree"] = worst <= AGREEMENT_TOL
        code = EXIT_OK if fields["agree"] else EXIT_DISAGREE
    params = {**_rd(args), "n_from": lo, "n_to": hi, "method": args.method}
    return OutputRecord("trace", [], params, fields, columns, rows), code


def cmd_classify(args) -> tuple[OutputRecord, int]:
    report = classify(args.alpha, args.r, args.d, mode_n_max=args.mode_n_max)
    return OutputRecord("classify", [], _rd(args), report.to_dict()), EXIT_OK


def cmd_mode(args) -> tuple[OutputRecord, int]:
    mode = find_mode(args.alpha, args.r, args.n_max, paranoid=args.paranoid)
    peak = p_trace(args.alpha, args.r, 1, mode, mode)[0]
    law = mode_asymptotic(args.alpha, args.r)
    top = max_asymptotic(args.alpha, args.r)
    excess = peak - Fraction(1, 2)
    fields = {
        "mode": mode,
        "mode_asymptotic": repr(law),
        "mode_ratio": repr(mode / law),
        "p_mode": str(peak),
        "p_mode_minus_half": repr(float(excess)),
        "max_asymptotic": repr(top),
        "max_ratio": repr(float(excess) / top) if top else None,
    }
    params = {"alpha": str(args.alpha), "r": args.r, "d": 1, "n_max": args.n_max}
    return OutputRecord("mode", [], params, fields), EXIT_OK


def cmd_verify(args) -> tuple[OutputRecord, int]:
    checks = run_suite(args.suite)
    rows = [[c.name, "pass" if c.passed else "FAIL", f"{c.seconds:.3f}", c.detail] for c in checks]
    failed = [c.name for c in checks if not c.passed]
    fields = {
        "checks": len(checks),
        "failed": failed,
        "passed": not failed,
        "data": {c.name: c.data for c in checks if c.data},
    }
    record = OutputRecord(
        "verify", [], {"suite": args.suite}, fields, ["check", "status", "seconds", "detail"], rows
    )
    return record, EXIT_VERIFY if failed else EXIT_OK


def _compare(est, exact: Fraction) -> dict:
    z = est.sigma_distance(exact)
    return {
        **est.to_dict(),
        "p_exact": str(exact),
        "p_exact_float": repr(float(exact)),
        "sigma_distance": repr(z),
        "within_4sigma": z <= 4.0,
    }


def cmd_simulate(args) -> tuple[OutputRecord, int]:
    params = _duel(args)
    cfg = SimConfig(args.trials, args.seed, workers=args.workers)
    fields = _compare(mc_duel(params, cfg), p_exact(params))
    out = {**_rd(args), "n": args.n, "trials": args.trials, "seed": args.seed}
    return OutputRecord("simulate", [], out, fields), EXIT_OK


def cmd_simulate_doubleexp(args) -> tuple[OutputRecord, int]:
    if args.n < 1:
        raise DomainError("n must be >= 1")
    cfg = SimConfig(args.trials, args.seed, workers=args.workers)
    est = mc_double_exp(args.n, args.alpha, args.a, cfg)
    fields = _compare(est, p_exact(DuelParams(args.alpha, args.n - 1, 1, 1)))
    out = {"alpha": str(args.alpha), "n": args.n, "a": repr(args.a), "trials": args.trials, "seed": args.seed}
    return OutputRecord("simulate-doubleexp", [], out, fields), EXIT_OK


COMMANDS = {
    "compute": cmd_compute,
    "trace": cmd_trace,
    "classify": cmd_classify,
    "mode": cmd_mode,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "simulate-doubleexp": cmd_simulate_doubleexp,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        record, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ModeBeyondRange, UnimodalityViolation, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    record.argv = argv
    text = record.render(args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
