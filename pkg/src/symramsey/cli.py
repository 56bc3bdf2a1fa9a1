"""Command-line front end.

Exit codes: 0 success, 1 property violation, 2 usage or parse error,
3 internal oracle mismatch, 4 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Optional, Sequence

from . import laws
from .errors import BoundExhausted, DegenerateElementWarning, MalformedCertificate, NonIntegerCoefficients, SymRamseyError
from .lk_algebra import Kind, iterated_star, parse_params, symmetric_poly_eval
from .patterns import (
    brauer_chain,
    deuber_config,
    fractional_floor_combiner,
    milliken_taylor_family,
    symmetric_system,
)
from .polyring import (
    check_dagger_sufficient,
    check_ddagger_sufficient,
    format_polynomial,
    parse_polynomial,
    witness_thresholds,
)
from .search import (
    BudgetExceeded,
    ColoringCertificate,
    Generator,
    PatternFamilySpec,
    ResultKind,
    min_ramsey_threshold,
    verify_certificate,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_MISMATCH, EXIT_BUDGET = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {v}")
    return v


def _combiner(text: str):
    # "fracfloor:D:DEN" selects floor({sqrt(D) z1} z2) z2 / (DEN z1^3)
    if text.startswith("fracfloor"):
        parts = text.split(":")
        d = int(parts[1]) if len(parts) > 1 else 2
        den = int(parts[2]) if len(parts) > 2 else 17
        return fractional_floor_combiner(d, den)
    return parse_polynomial(text)


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(human)


# ------------------------------------------------------------------ commands


def cmd_eval(args) -> int:
    p = parse_params(args.lk)
    xs = _ints(args.xs)
    if not xs:
        raise UsageError("--xs needs at least one integer")
    value = iterated_star(p, xs)
    sym = symmetric_poly_eval(p, xs) if p.kind is Kind.GENERAL else None
    payload = {
        "lk": [str(p.ell), str(p.k)],
        "kind": p.kind.value,
        "xs": [str(x) for x in xs],
        "iterated_star": str(value),
        "symmetric_poly": None if sym is None else str(sym),
    }
    if sym is not None and sym != value:
        print(f"internal mismatch: iterated product {value} != symmetric polynomial {sym}", file=sys.stderr)
        _emit(args, payload, str(value))
        return EXIT_MISMATCH
    _emit(args, payload, str(value))
    return EXIT_OK


def cmd_laws(args) -> int:
    p = parse_params(args.lk)
    if args.samples == 0:
        print("warning: --samples 0, every law passes vacuously", file=sys.stderr)
    results = laws.check_laws(p, args.samples, args.seed)
    payload = {
        "lk": [str(p.ell), str(p.k)],
        "samples": str(args.samples),
        "seed": str(args.seed),
        "laws": [
            {
                "name": r.name,
                "passed": r.passed,
                "counterexample": None if r.passed else [str(v) for v in r.counterexample],
            }
            for r in results
        ],
    }
    lines = []
    for r in results:
        status = "PASS" if r.passed else f"FAIL  counterexample {r.counterexample}"
        lines.append(f"{r.name:45s} {status}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


def cmd_pattern(args) -> int:
    kind = args.generator
    if kind == "symmetric":
        out = symmetric_system(parse_params(args.lk), _ints(args.xs), args.max_size)
    elif kind == "deuber":
        with warnings.catch_warnings():
            # degenerate elements are reported from out.notes below
            warnings.simplefilter("ignore", DegenerateElementWarning)
            out = deuber_config(parse_params(args.lk), _ints(args.a), args.L, strict=args.strict)
    elif kind == "brauer":
        if args.L < 1:
            raise UsageError("--L must be positive for brauer")
        out = brauer_chain(parse_params(args.lk), args.a, args.b, args.L)
    else:
        ps = [parse_params(t) for t in args.lks.split(";") if t.strip()]
        f = _combiner(args.f)
        seqs = [_ints(t) for t in args.xs.split(";") if t.strip()]
        if len(seqs) == 1:
            seqs = seqs * len(ps)
        out = milliken_taylor_family(ps, f, seqs, args.bound, args.max_block_size)
    for note in out.notes:
        print(f"warning: {note}", file=sys.stderr)
    payload = out.to_json()
    _emit(args, payload, " ".join(str(v) for v in out.values))
    return EXIT_OK


def cmd_check_poly(args) -> int:
    poly = parse_polynomial(args.f)
    payload: dict = {"f": format_polynomial(poly), "mode": args.mode}
    scaling = None
    if args.mode == "dagger":
        try:
            payload["sufficient"] = check_dagger_sufficient(poly)
        except NonIntegerCoefficients:
            payload["sufficient"] = None
            payload["error"] = "NonIntegerCoefficients"
    else:
        N = check_ddagger_sufficient(poly)
        payload["sufficient"] = N is not None
        payload["N"] = None if N is None else str(N)
        if N is not None:
            scaling = [N] * poly.arity
    if args.scaling:
        scaling = _ints(args.scaling)
    try:
        w = witness_thresholds(poly, args.bound, scaling)
        payload["witness"] = w.to_json()
        witness_line = f"witness: thresholds verified up to {args.bound}"
    except BoundExhausted as exc:
        payload["witness"] = {
            "error": "BoundExhausted",
            "counterexample": [str(v) for v in exc.counterexample],
            "value": str(exc.value),
        }
        witness_line = f"witness: BoundExhausted at {exc.counterexample}"
    human = [f"f = {payload['f']}", f"sufficient: {payload['sufficient']}"]
    if args.mode == "ddagger":
        human.append(f"N = {payload['N']}")
    human.append(witness_line)
    _emit(args, payload, "\n".join(human))
    return EXIT_OK


def _spec_from_args(args) -> PatternFamilySpec:
    gen = Generator(args.generator)
    common = dict(require_distinct=not args.no_distinct, signed=args.signed)
    if gen is Generator.MILLIKEN_TAYLOR:
        if not args.lks or not args.f:
            raise UsageError("mt needs --lks and --f")
        ps = tuple(parse_params(t) for t in args.lks.split(";") if t.strip())
        return PatternFamilySpec(gen, ps, f=_combiner(args.f), index_bound=args.index_bound,
                                 max_block_size=args.max_block_size, **common)
    if not args.lk:
        raise UsageError(f"{gen.value} needs --lk")
    return PatternFamilySpec(gen, (parse_params(args.lk),), L=args.L, depth=args.depth, m=args.m, **common)


def cmd_search(args) -> int:
    spec = _spec_from_args(args)
    rep = min_ramsey_threshold(spec, args.r, args.n_max, workers=args.workers,
                               node_limit=args.node_limit, time_limit=args.time_limit)
    payload = rep.to_json(include_timing=args.timing)
    if rep.result is ResultKind.THRESHOLD:
        human = f"threshold N_min = {rep.N} (r = {args.r})"
    elif rep.result is ResultKind.NO_THRESHOLD_UP_TO:
        human = f"no threshold up to N = {rep.N} (r = {args.r})"
    else:
        human = f"budget exhausted; avoiding colorings exist up to N = {rep.N}"
    if rep.certificate is not None:
        human += "\ncertificate: " + "".join(str(c) for c in rep.certificate.colors)
    _emit(args, payload, human)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return EXIT_BUDGET if rep.result is ResultKind.BUDGET_EXHAUSTED else EXIT_OK


def cmd_verify(args) -> int:
    spec = _spec_from_args(args)
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedCertificate(f"cannot read certificate: {exc}") from exc
    if isinstance(data, dict) and "certificate" in data:
        data = data["certificate"]
    if not isinstance(data, dict):
        raise MalformedCertificate("no certificate record in file")
    cert = ColoringCertificate.from_json(data)
    ok = verify_certificate(spec, cert)
    _emit(args, {"valid": ok, "N": str(cert.N), "r": str(cert.r)}, "valid" if ok else "INVALID")
    return EXIT_OK if ok else EXIT_VIOLATION


# -------------------------------------------------------------------- parser


def _global_flags(parser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=d(False), help="emit JSON")
    parser.add_argument("--workers", type=_positive, default=d(1), metavar="W")
    parser.add_argument("--time-limit", type=float, default=d(None), metavar="S")
    parser.add_argument("--seed", type=_nonneg, default=d(0), metavar="U64")


def _spec_flags(parser) -> None:
    parser.add_argument("generator", choices=[g.value for g in Generator])
    parser.add_argument("--lk", help="ell,k")
    parser.add_argument("--lks", help="ell,k;ell,k;... (mt)")
    parser.add_argument("--L", type=_positive, default=2)
    parser.add_argument("--depth", type=int, default=2)
    parser.add_argument("--m", type=_positive, default=2)
    parser.add_argument("--f", help="combining polynomial, or fracfloor:D:DEN (mt)")
    parser.add_argument("--index-bound", type=_positive, default=2)
    parser.add_argument("--max-block-size", type=_positive, default=2)
    parser.add_argument("--no-distinct", action="store_true")
    parser.add_argument("--signed", action="store_true", help="color [-N..N] instead of [1..N]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symramsey", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        sp = sub.add_parser(name, **kw)
        _global_flags(sp, suppress=True)
        return sp

    sp = add("eval", help="iterated product and symmetric polynomial")
    sp.add_argument("--lk", required=True)
    sp.add_argument("--xs", required=True)
    sp.set_defaults(func=cmd_eval)

    sp = add("laws", help="sampled semigroup law checks")
    sp.add_argument("--lk", required=True)
    sp.add_argument("--samples", type=_nonneg, default=1000)
    sp.set_defaults(func=cmd_laws)

    sp = add("pattern", help="emit a pattern value set")
    sp.add_argument("generator", choices=["symmetric", "deuber", "brauer", "mt"])
    sp.add_argument("--lk")
    sp.add_argument("--lks")
    sp.add_argument("--xs", default="")
    sp.add_argument("--max-size", type=_positive, default=2)
    sp.add_argument("--a", default=None)
    sp.add_argument("--b", type=int, default=None)
    sp.add_argument("--L", type=_nonneg, default=1)
    sp.add_argument("--strict", action="store_true", help="degenerate Deuber elements are errors")
    sp.add_argument("--f")
    sp.add_argument("--bound", type=_positive, default=3)
    sp.add_argument("--max-block-size", type=_positive, default=None)
    sp.set_defaults(func=cmd_pattern)

    sp = add("check-poly", help="positivity conditions for a polynomial")
    sp.add_argument("f")
    sp.add_argument("--mode", choices=["dagger", "ddagger"], default="dagger")
    sp.add_argument("--bound", type=_positive, default=10)
    sp.add_argument("--scaling", help="per-variable factors N1,...,Nm")
    sp.set_defaults(func=cmd_check_poly)

    sp = add("search", help="monochromaticity threshold search")
    _spec_flags(sp)
    sp.add_argument("-r", type=_positive, default=2)
    sp.add_argument("--n-max", type=_positive, default=50)
    sp.add_argument("--node-limit", type=_positive, default=None)
    sp.add_argument("--timing", action="store_true", help="include wall time in the report")
    sp.add_argument("--out", help="also write the JSON report to this file")
    sp.set_defaults(func=cmd_search)

    sp = add("verify", help="check a coloring certificate")
    _spec_flags(sp)
    sp.add_argument("certificate", help="certificate or search report JSON file")
    sp.set_defaults(func=cmd_verify)
    return parser


def _check_pattern_args(args) -> None:
    need = {
        "symmetric": ("lk", "xs"),
        "deuber": ("lk", "a"),
        "brauer": ("lk", "a", "b"),
        "mt": ("lks", "f", "xs"),
    }[args.generator]
    missing = [n for n in need if getattr(args, n) in (None, "")]
    if missing:
        raise UsageError(f"pattern {args.generator} needs " + ", ".join("--" + n for n in missing))
    if args.generator == "brauer":
        try:
            args.a = int(args.a)
        except ValueError as exc:
            raise UsageError("--a must be an integer for brauer") from exc


def _protect_dashed_values(argv: Sequence[str]) -> list[str]:
    """Let values such as ``-3*z1+z2`` or ``-1,4`` through argparse.

    argparse treats any token with a leading dash as an option unless it
    contains a space, so such values get a trailing space (all value parsers
    ignore surrounding whitespace).
    """
    out = []
    for tok in argv:
        if tok.startswith("-") and not tok.startswith("--") and tok[:2] not in ("-h", "-r"):
            tok += " "
        out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parser.parse_args(_protect_dashed_values(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.command == "pattern":
            _check_pattern_args(args)
        return args.func(args)
    except (UsageError, SymRamseyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded:
        print("error: search budget exhausted", file=sys.stderr)
        return EXIT_BUDGET
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
