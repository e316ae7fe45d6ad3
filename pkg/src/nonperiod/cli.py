"""Command-line front end.

Exit status: 0 on success, 2 on usage errors, 3 when a computation runs out
of budget (bits, steps, ternary terms, grid size). Every exact number is
printed as ``p/q`` or as a plain digit string; the only rounding is the
12-place decimal display of volumes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from .cauchy import beta
from .diagonal import AmbiguousAtBudget, Diagonal
from .elem_expr import Budget, BudgetExceeded, UndefinedValue, ZeroPow, render
from .enumeration import DEFAULT_ZERO_POW, CacheFormatError, Decoder, g, load_cache, save_cache
from .enumeration import f as f_value
from .semialg.polynomial import DomainFormatError, load_domain, parse_fraction
from .semialg.volume import NoConvergenceAtBudget, approximate_volume, default_max_depth, riemann_volume

__all__ = ["Config", "main", "run", "format_decimal", "format_fraction"]

EXIT_OK, EXIT_USAGE, EXIT_BUDGET = 0, 2, 3


@dataclass
class Config:
    budget_bits: int = 2**20
    budget_nodes: int = 10**7
    decode_cache_path: str | None = None
    output_format: str = "text"
    zero_pow: ZeroPow = DEFAULT_ZERO_POW

    def __post_init__(self):
        if self.budget_bits <= 0 or self.budget_nodes <= 0:
            raise ValueError("budgets must be positive")
        if self.output_format not in ("text", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    @property
    def budget(self) -> Budget:
        return Budget(self.budget_bits, self.budget_nodes)


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def format_decimal(x: Fraction, places: int = 12) -> str:
    """Round-half-even decimal rendering of an exact fraction (display only)."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    q, rem = divmod(abs(x).numerator * 10**places, abs(x).denominator)
    twice = 2 * rem
    den = abs(x).denominator
    if twice > den or (twice == den and q % 2):
        q += 1
    whole, frac = divmod(q, 10**places)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{str(frac).zfill(places)}"


def _env_int(name: str) -> int | None:
    v = os.environ.get(name)
    return int(v) if v else None


def _positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _natural(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {s!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {s}")
    return v


def _fraction_arg(s: str) -> Fraction:
    try:
        v = parse_fraction(s, "tol")
    except DomainFormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if v <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-bits", type=_positive_int, default=None,
                        help="cap on the bit length of any intermediate natural (env NONPERIOD_BUDGET_BITS)")
    common.add_argument("--budget-nodes", type=_positive_int, default=None,
                        help="cap on evaluation steps per expression evaluation")
    common.add_argument("--decode-cache", metavar="PATH", default=None,
                        help="load/save the decode table at PATH")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--zero-pow", choices=[z.value for z in ZeroPow], default=DEFAULT_ZERO_POW.value,
                        help="value of 0^0 in enumerated functions (default: %(default)s)")

    parser = argparse.ArgumentParser(prog="nonperiod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("decode", parents=[common], help="print the expression for f_e")
    p.add_argument("e", type=_natural)
    p.add_argument("--ascii", action="store_true", help="render monus as '-.'")

    p = sub.add_parser("eval", parents=[common], help="evaluate f_e(x)")
    p.add_argument("e", type=_natural)
    p.add_argument("x", type=_natural)

    p = sub.add_parser("g", parents=[common], help="exact g_e(n)")
    p.add_argument("e", type=_natural)
    p.add_argument("n", type=_natural)

    p = sub.add_parser("beta", parents=[common], help="certified enclosure of beta_e")
    p.add_argument("e", type=_natural)
    p.add_argument("--index", type=_natural, required=True)

    p = sub.add_parser("epsilons", parents=[common], help="digits eps_1..eps_N of the diagonal real")
    p.add_argument("--count", type=_natural, required=True)

    p = sub.add_parser("alpha-digits", parents=[common], help="certified decimal digits of alpha/2")
    p.add_argument("--digits", type=_positive_int, required=True)
    p.add_argument("--max-terms", type=_positive_int, default=None)

    p = sub.add_parser("volume", parents=[common], help="inner Riemann sum of a domain file")
    p.add_argument("--domain", required=True, metavar="FILE")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--n", type=_positive_int, help="fixed grid size")
    grp.add_argument("--tol", type=_fraction_arg, help="target tolerance p/q (doubling schedule)")
    p.add_argument("--n0", type=_positive_int, default=4, help="first grid of the doubling schedule")
    p.add_argument("--max-n", type=_positive_int, default=2048)
    p.add_argument("--max-depth", type=_natural, default=None,
                   help="bisection depth for undecided cubes (env NONPERIOD_MAX_DEPTH, default 6)")
    p.add_argument("--backend", choices=("auto", "numba", "numpy"), default="auto")
    return parser


def _config(args) -> Config:
    bits = args.budget_bits or _env_int("NONPERIOD_BUDGET_BITS") or 2**20
    nodes = args.budget_nodes or _env_int("NONPERIOD_BUDGET_NODES") or 10**7
    return Config(bits, nodes, args.decode_cache, args.format, ZeroPow(args.zero_pow))


def _emit(cfg: Config, text: str, doc: dict, out) -> None:
    if cfg.output_format == "json":
        out.write(json.dumps(doc) + "\n")
    else:
        out.write(text + "\n")


def _dispatch(args, cfg: Config, decoder: Decoder, out) -> None:
    cmd = args.command
    budget = cfg.budget
    zp = cfg.zero_pow
    if cmd == "decode":
        expr = decoder.decode(args.e)
        s = render(expr, ascii=args.ascii)
        _emit(cfg, s, {"code": args.e, "expr": s}, out)
    elif cmd in ("eval", "g", "beta"):
        try:
            if cmd == "eval":
                v = f_value(args.e, args.x, budget, zp, decoder)
                text = value = str(v)
            elif cmd == "g":
                v = g(args.e, args.n, budget, zp, decoder)
                text = value = format_fraction(v)
            else:
                b = beta(args.e, args.index, budget, zp, decoder)
                value = format_fraction(b.value)
                text = f"{value} ± 1/(6*7^{args.index})"
            defined = True
        except UndefinedValue:
            defined, value = False, "undefined"
            text = f"undefined (0^0 with --zero-pow {zp.value})"
        doc = {"code": args.e, "defined": defined, "value": value}
        if cmd == "eval":
            doc["x"] = args.x
        elif cmd == "g":
            doc["n"] = args.n
        else:
            doc["index"] = args.index
            doc["radius"] = format_fraction(Fraction(1, 6 * 7**args.index))
        _emit(cfg, text, doc, out)
    elif cmd == "epsilons":
        eps = list(Diagonal(budget, zp, decoder).advance(args.count).epsilons)
        _emit(cfg, " ".join(map(str, eps)), {"epsilons": eps}, out)
    elif cmd == "alpha-digits":
        digits = Diagonal(budget, zp, decoder).half_alpha_digits(args.digits, args.max_terms)
        _emit(cfg, "0." + digits, {"digits": digits}, out)
    elif cmd == "volume":
        domain = load_domain(args.domain)
        depth = args.max_depth if args.max_depth is not None else default_max_depth()
        if args.n is not None:
            est = riemann_volume(domain, args.n, depth, args.backend)
            value, unknown, n_used = est.volume, est.unknown_count, args.n
        else:
            res = approximate_volume(domain, args.tol, args.n0, args.max_n, depth, args.backend)
            value, unknown, n_used = res.value, res.unknown_count, res.n_used
        doc = {
            "volume": format_fraction(value),
            "decimal": format_decimal(value, 12),
            "unknown_count": unknown,
            "n_used": n_used,
        }
        text = "\n".join(f"{k} {v}" for k, v in doc.items())
        _emit(cfg, text, doc, out)


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
    except ValueError as exc:
        err.write(f"nonperiod: error: {exc}\n")
        return EXIT_USAGE

    decoder = Decoder()
    if cfg.decode_cache_path and os.path.exists(cfg.decode_cache_path):
        try:
            decoder = load_cache(cfg.decode_cache_path)
        except CacheFormatError as exc:
            err.write(f"nonperiod: error: --decode-cache: {exc}\n")
            return EXIT_USAGE
    try:
        _dispatch(args, cfg, decoder, out)
    except BudgetExceeded as exc:
        err.write(f"nonperiod: budget exhausted: {exc}; raise --budget-{exc.resource.split('_')[1]}\n")
        return EXIT_BUDGET
    except AmbiguousAtBudget as exc:
        err.write(f"nonperiod: budget exhausted: {exc}; raise --max-terms\n")
        return EXIT_BUDGET
    except NoConvergenceAtBudget as exc:
        err.write(f"nonperiod: budget exhausted: {exc}; raise --max-n\n")
        return EXIT_BUDGET
    except (DomainFormatError, OSError) as exc:
        err.write(f"nonperiod: error: --domain: {exc}\n")
        return EXIT_USAGE
    if cfg.decode_cache_path:
        save_cache(decoder, cfg.decode_cache_path)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
