"""Command-line interface.

Exit status: 0 for a mathematical result (including a definite "none"),
2 when a budget ran out or the verdict is unknown, 1 on errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from .coefficients import parse_domain
from .division import Relation, divide
from .errors import BudgetExceeded, GringError
from .euclid import euclid, exact_divide, generate_pair, relation_search
from .pair_modules import UNKNOWN, analyze_field, analyze_integral
from .ring import format_element, parse_element, parse_lines
from .words import ball_budget

SCHEMA_VERSION = 1
EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2
FLAGS = {"--json", "--version", "--help", "-h"}


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1, keeping 2 for unknown verdicts."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


class Unknown(Exception):
    """Carries a result whose verdict is unknown (exit 2)."""

    def __init__(self, result: dict, text: str):
        super().__init__(text)
        self.result = result
        self.text = text


# -- argument helpers -----------------------------------------------------------

def _bind_values(argv):
    """Glue option values that start with '-' (like ``--b -1-hg``) to their option."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and "=" not in tok and tok not in FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _source(text: str) -> tuple[str, bool]:
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return fh.read(), True
    return text, False


def _element(args, text):
    body, from_file = _source(text)
    if from_file:
        elts = parse_lines(body, args.domain, args.rank)
        if len(elts) != 1:
            raise GringError(f"expected one element in {text}, found {len(elts)}")
        return elts[0]
    return parse_element(body, args.domain, args.rank)


def _vector(args, text):
    body, from_file = _source(text)
    if from_file:
        return parse_lines(body, args.domain, args.rank)
    return [parse_element(part, args.domain, args.rank) for part in body.split(";")]


def _common(p: argparse.ArgumentParser, field: bool = True) -> None:
    if field:
        p.add_argument("--field", default="q", help="coefficients: q, z or fp:<prime>")
        p.add_argument("--rank", type=int, default=2, help="rank of the free group")
        p.add_argument("--budget", type=int, default=None,
                       help="ball enumeration budget (default: GRING_MAX_BALL_VERTICES or built-in)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="emit a single JSON object")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gring", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gring {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mul", help="multiply two elements")
    _common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)

    p = sub.add_parser("div", help="divide x by y using a relation a*x + b*y = 0")
    _common(p)
    for name in ("x", "y", "a", "b"):
        p.add_argument(f"--{name}", required=True)
    p.add_argument("--trace", help="write the step records to this JSON file")

    p = sub.add_parser("gcd", help="gcd with Bezout data")
    _common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--search-radius", type=int, default=4,
                   help="radius2 for the relation search when no relation is given")

    p = sub.add_parser("exact-div", help="solve c*z = x for c")
    _common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--z", required=True)

    p = sub.add_parser("relation-search", help="find a*x + b*y = 0 with bounded supports")
    _common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--radius2", type=int, default=4)

    p = sub.add_parser("gen-pair", help="seeded related pair with a planted divisor")
    _common(p)
    p.add_argument("--depth", type=int, default=2)

    p = sub.add_parser("pair-analyze", help="freeness of the module generated by v and w")
    _common(p)
    p.add_argument("--n", type=int, default=None, help="vector length (checked if given)")
    p.add_argument("--v", required=True, help="entries separated by ';' or @file")
    p.add_argument("--w", required=True)
    p.add_argument("--search-radius2", type=int, default=4)

    p = sub.add_parser("hyp-check", help="sampled check of an inequality in H^n")
    _common(p, field=False)
    p.add_argument("--lemma", default="all")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--delta", type=float, default=5.0)
    p.add_argument("--mu", type=float, default=185.0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("audit-constants", help="exact audit of the displacement threshold")
    _common(p, field=False)
    p.add_argument("--delta", default="5", help="rational delta, e.g. 5 or 1/2")
    return parser


# -- commands ---------------------------------------------------------------------

def cmd_mul(args):
    x, y = _element(args, args.x), _element(args, args.y)
    prod = format_element(x * y)
    return {"product": prod}, prod


def cmd_div(args):
    x, y = _element(args, args.x), _element(args, args.y)
    rel = Relation(_element(args, args.a), _element(args, args.b))
    res = divide(x, y, rel)
    out = {
        "quotient": format_element(res.quotient),
        "remainder": format_element(res.remainder),
        "steps": len(res.trace),
    }
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump([s.to_json() for s in res.trace], fh, indent=2)
            fh.write("\n")
    return out, f"q = {out['quotient']}\nr = {out['remainder']}"


def cmd_gcd(args):
    x, y = _element(args, args.x), _element(args, args.y)
    if (args.a is None) != (args.b is None):
        raise GringError("give both --a and --b, or neither")
    if args.a is not None:
        rel = Relation(_element(args, args.a), _element(args, args.b))
    else:
        rel = relation_search(x, y, args.search_radius, args.budget)
        if rel is None:
            msg = f"no relation with supports in radius2 {args.search_radius}"
            raise Unknown({"verdict": "no-relation-at-budget", "radius2": args.search_radius}, msg)
    res = euclid(x, y, rel, args.budget)
    out = res.to_json()
    out["relation"] = rel.to_json()
    a, b = out["bezout"]
    c, c2 = out["cofactors"]
    text = f"gcd = {out['gcd']}\nbezout = {a} ; {b}\ncofactors = {c} ; {c2}"
    return out, text


def cmd_exact_div(args):
    x, z = _element(args, args.x), _element(args, args.z)
    c = exact_divide(x, z, args.budget)
    if c is None:
        return {"quotient": None}, "none"
    return {"quotient": format_element(c)}, format_element(c)


def cmd_relation_search(args):
    x, y = _element(args, args.x), _element(args, args.y)
    rel = relation_search(x, y, args.radius2, args.budget)
    if rel is None:
        return {"relation": None, "verdict": "none-at-budget"}, f"none-at-budget (radius2 {args.radius2})"
    return {"relation": rel.to_json()}, f"a = {format_element(rel.a)}\nb = {format_element(rel.b)}"


def cmd_gen_pair(args):
    spec = generate_pair(args.seed, args.depth, args.rank, args.domain)
    out = spec.to_json()
    text = "\n".join([f"x = {out['x']}", f"y = {out['y']}", f"a = {out['relation']['a']}",
                      f"b = {out['relation']['b']}", f"z0 = {out['z0']}"])
    return out, text


def cmd_pair_analyze(args):
    v, w = _vector(args, args.v), _vector(args, args.w)
    if args.n is not None and (len(v) != args.n or len(w) != args.n):
        raise GringError(f"expected vectors of length {args.n}")
    if args.domain.kind == "z":
        rep = analyze_integral(v, w, args.search_radius2, args.budget)
    else:
        rep = analyze_field(v, w, args.search_radius2, args.budget)
    out = rep.to_json()
    lines = [f"verdict: {rep.verdict}"]
    if rep.basis is not None:
        lines.append("basis: " + " ; ".join(out["basis"]))
    if rep.m is not None:
        lines.append(f"m = {rep.m}")
    if rep.verdict == UNKNOWN:
        raise Unknown(out, "\n".join(lines))
    return out, "\n".join(lines)


def cmd_hyp_check(args):
    from .hyperbolic.checks import LEMMA_IDS, run_sweep

    names = LEMMA_IDS if args.lemma == "all" else [args.lemma]
    results = [run_sweep(n, args.dim, args.samples, args.seed, args.delta, args.mu, args.tol, args.jobs)
               for n in names]
    out = {"results": [r.to_json() for r in results], "passed": all(r.passed for r in results)}
    lines = [f"{r.lemma:<22} H^{r.dim}  samples={r.samples}  failures={len(r.failures)}  "
             f"min_slack={r.min_slack:.6g}  {'PASS' if r.passed else 'FAIL'}" for r in results]
    return out, "\n".join(lines)


def cmd_audit_constants(args):
    from .hyperbolic.constants import audit_constants

    led = audit_constants(Fraction(args.delta))
    out = led.to_json()
    text = "\n".join([
        f"delta = {out['delta']}, mu = {out['mu']}",
        f"threshold = {out['threshold']} (satisfied by displacement {out['displacement']}: {out['satisfied']})",
        f"genus exponent = {out['genus_log_bound']}",
    ])
    return out, text


COMMANDS = {
    "mul": cmd_mul, "div": cmd_div, "gcd": cmd_gcd, "exact-div": cmd_exact_div,
    "relation-search": cmd_relation_search, "gen-pair": cmd_gen_pair,
    "pair-analyze": cmd_pair_analyze, "hyp-check": cmd_hyp_check,
    "audit-constants": cmd_audit_constants,
}


def _invocation(args) -> dict:
    inv = {k: v for k, v in vars(args).items() if k not in ("json", "domain")}
    if "budget" in inv and inv["budget"] is None:
        inv["budget"] = ball_budget()
    return inv


def _emit(args, status: str, result: dict | None, error: str | None = None) -> None:
    obj = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "status": status,
        "invocation": _invocation(args),
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    if result is not None:
        obj["result"] = result
    if error is not None:
        obj["error"] = error
    print(json.dumps(obj, indent=2, sort_keys=True))


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_bind_values(argv))
    try:
        if hasattr(args, "field"):
            args.domain = parse_domain(args.field)
        result, text = COMMANDS[args.command](args)
    except Unknown as exc:
        if args.json:
            _emit(args, "unknown", exc.result)
        else:
            print(exc.text)
        return EXIT_UNKNOWN
    except BudgetExceeded as exc:
        if args.json:
            _emit(args, "unknown", None, str(exc))
        else:
            print(f"unknown: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (GringError, OSError, ValueError) as exc:
        if args.json:
            _emit(args, "error", None, f"{type(exc).__name__}: {exc}")
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.json:
        _emit(args, "ok", result)
    else:
        print(text)
    if args.command == "hyp-check" and not result["passed"]:
        return EXIT_ERROR
    return EXIT_OK
