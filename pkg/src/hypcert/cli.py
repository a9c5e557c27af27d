"""Command-line surface: generate, verify, and report on family certificates.

Every flag falls back to an environment variable HYPCERT_<FLAG>; exit codes
are 0 (success), 1 (verification or search failure), 2 (usage error).
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .certificates import (
    MalformedCertificate,
    certificates_from_json,
    certificates_to_json,
    raw_objs_from_json,
    render_report,
    verify_obj,
)
from .compact import (
    DEFAULT_SEARCH_BUDGET,
    SearchBudgetExceeded,
    gen_compact_family,
    three_squares_decompose,
)
from .geometry import (
    GeometryError,
    LorentzForm,
    NormalVector,
    PairClass,
    classify_pair,
    cosh_sq_distance,
    distance_interval,
)
from .noncompact import (
    ConstructionError,
    decompose,
    gen_noncompact_family,
    gen_noncompact_from_targets,
)
from .quadfield import (
    FieldDescriptor,
    QuadFieldError,
    RATIONAL_FIELD,
    decimal_str,
    parse_quad,
)
from .tracering import FactorizationError

_USAGE_ERRORS = (
    MalformedCertificate,
    QuadFieldError,
    ConstructionError,
    GeometryError,
    FactorizationError,
    ValueError,
)


def _env(flag: str) -> str | None:
    return os.environ.get("HYPCERT_" + flag.upper().replace("-", "_"))


def _resolve(args: argparse.Namespace, flag: str, cast, default=None, required=False):
    """Flag value, then HYPCERT_* environment fallback, then default."""
    value = getattr(args, flag.replace("-", "_"))
    if value is None:
        raw = _env(flag)
        if raw is not None:
            value = raw
        elif required:
            raise ValueError(f"missing --{flag} (or HYPCERT_{flag.upper().replace('-', '_')})")
        else:
            return default
    try:
        return cast(value) if isinstance(value, str) else value
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad value for --{flag}: {value!r}") from exc


def _write_out(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_width(s: str) -> Fraction:
    w = Fraction(s)
    if w <= 0:
        raise ValueError("width must be positive")
    return w


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypcert",
        description=(
            "Exact-arithmetic certificates for families of ultraparallel cut "
            "hyperplanes over Q and Q(sqrt 5)."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g1 = sub.add_parser("gen-noncompact", help="generate the rational family r_k = p^k")
    g1.add_argument("--n", default=None, help="dimension (>= 3, default 3)")
    g1.add_argument("--prime", default=None, help="prime p for targets p^k")
    g1.add_argument("--kmax", default=None, help="largest index k")
    g1.add_argument("--targets", default=None, help="comma list of explicit targets")
    g1.add_argument("--smooth-T", default=None, help="smoothness level for --targets")
    g1.add_argument("--width", default=None, help="distance interval width, e.g. 1/1000000")
    g1.add_argument("--out", default=None, help="output file (default stdout)")

    g2 = sub.add_parser("gen-compact", help="generate the Q(sqrt5) family f(w_k) = rho^k")
    g2.add_argument("--rho", default=None, help='e.g. "6+sqrt5"')
    g2.add_argument("--kmin", default=None, help="smallest index k (>= 1)")
    g2.add_argument("--kmax", default=None, help="largest index k")
    g2.add_argument("--n", default=None, help="dimension (>= 4, default 4)")
    g2.add_argument("--mode", default=None, choices=[None, "analytic", "explicit"],
                    help="analytic (default) or explicit gamma search")
    g2.add_argument("--budget", default=None, help="three-squares pair budget")
    g2.add_argument("--width", default=None, help="distance interval width")
    g2.add_argument("--out", default=None, help="output file (default stdout)")

    v = sub.add_parser("verify", help="independently re-verify a certificate file")
    v.add_argument("file", help="certificate JSON file")

    r = sub.add_parser("report", help="tabulate a certificate file")
    r.add_argument("file", help="certificate JSON file")
    r.add_argument("--format", default=None, choices=[None, "table", "csv", "json"])
    r.add_argument("--out", default=None, help="output file (default stdout)")

    d = sub.add_parser("distance", help="ad-hoc hyperplane pair query")
    d.add_argument("--d", default=None, help='field: "rational" (default) or squarefree d')
    d.add_argument("--coeffs", default=None, help='diagonal, e.g. "-1,1,1,1"')
    d.add_argument("--v", default=None, help='first normal vector, e.g. "0,1,0,0"')
    d.add_argument("--w", default=None, help='second normal vector, e.g. "3,6,2,0"')
    d.add_argument("--width", default=None, help="distance interval width")

    t = sub.add_parser("three-squares", help="decompose eps as a sum of three squares in O_K")
    t.add_argument("--d", default=None, help="field discriminant part (only 5 supported)")
    t.add_argument("--eps", default=None, help='e.g. "26+10sqrt5"')
    t.add_argument("--budget", default=None, help="pair-test budget")

    dec = sub.add_parser("decompose", help="write r as b^2 - 2c - 1")
    dec.add_argument("r", help="positive integer")

    return parser


def _cmd_gen_noncompact(args) -> int:
    n = _resolve(args, "n", int, default=3)
    width = _resolve(args, "width", _parse_width, default=Fraction(1, 10**12))
    out = _resolve(args, "out", str)
    targets_raw = _resolve(args, "targets", str)
    if targets_raw:
        T = _resolve(args, "smooth-T", int, required=True)
        targets = [int(x) for x in targets_raw.split(",") if x.strip()]
        certs = gen_noncompact_from_targets(targets, T=T, n=n, interval_width=width)
    else:
        p = _resolve(args, "prime", int, required=True)
        kmax = _resolve(args, "kmax", int, required=True)
        certs = gen_noncompact_family(p, kmax, n=n, interval_width=width)
    _write_out(certificates_to_json(certs), out)
    return 0


def _cmd_gen_compact(args) -> int:
    rho_s = _resolve(args, "rho", str, default="6+sqrt5")
    kmin = _resolve(args, "kmin", int, default=1)
    kmax = _resolve(args, "kmax", int, required=True)
    n = _resolve(args, "n", int, default=4)
    mode = _resolve(args, "mode", str, default="analytic")
    budget = _resolve(args, "budget", int, default=DEFAULT_SEARCH_BUDGET)
    width = _resolve(args, "width", _parse_width, default=Fraction(1, 10**12))
    out = _resolve(args, "out", str)
    rho = parse_quad(rho_s, FieldDescriptor(5))
    certs = gen_compact_family(
        rho, kmin, kmax, n=n, mode=mode, budget=budget, interval_width=width
    )
    _write_out(certificates_to_json(certs), out)
    return 0


def _cmd_verify(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        objs = raw_objs_from_json(fh.read())
    failures = 0
    for i, obj in enumerate(objs):
        report = verify_obj(obj)
        label = f"certificate[{i}] k={obj.get('k', '?')}"
        if report.overall:
            skipped = report.skipped()
            note = f" ({len(skipped)} skipped)" if skipped else ""
            print(f"PASS {label}{note}")
        else:
            failures += 1
            for c in report.failed():
                print(f"FAIL {label} check={c.name}: {c.witness}")
    print(f"verified {len(objs)} certificate(s): {len(objs) - failures} pass, {failures} fail")
    return 1 if failures else 0


def _cmd_report(args) -> int:
    fmt = _resolve(args, "format", str, default="table")
    out = _resolve(args, "out", str)
    with open(args.file, encoding="utf-8") as fh:
        certs = certificates_from_json(fh.read())
    _write_out(render_report(certs, fmt), out)
    return 0


def _cmd_distance(args) -> int:
    d_raw = _resolve(args, "d", str, default="rational")
    field = RATIONAL_FIELD if d_raw == "rational" else FieldDescriptor(int(d_raw))
    coeffs_s = _resolve(args, "coeffs", str, required=True)
    v_s = _resolve(args, "v", str, required=True)
    w_s = _resolve(args, "w", str, required=True)
    width = _resolve(args, "width", _parse_width, default=Fraction(1, 10**12))
    coeffs = tuple(parse_quad(x, field) for x in coeffs_s.split(","))
    form = LorentzForm(field, len(coeffs) - 1, coeffs)
    v = NormalVector(form, tuple(parse_quad(x, field) for x in v_s.split(",")))
    w = NormalVector(form, tuple(parse_quad(x, field) for x in w_s.split(",")))
    cls = classify_pair(v, w)
    print(f"classification: {cls.value}")
    if cls is PairClass.ULTRAPARALLEL:
        csq = cosh_sq_distance(v, w)
        enclosure = distance_interval(csq, width)
        print(f"cosh^2(d) = {csq} ~ {decimal_str(csq, 12)}")
        print(f"distance in [{enclosure.lo}, {enclosure.hi}]")
        print(f"distance ~ {float(enclosure.midpoint()):.12f}")
    return 0


def _cmd_three_squares(args) -> int:
    d = _resolve(args, "d", int, default=5)
    if d != 5:
        raise ValueError("the three-squares search is specific to d = 5")
    eps_s = _resolve(args, "eps", str, required=True)
    budget = _resolve(args, "budget", int, default=DEFAULT_SEARCH_BUDGET)
    eps = parse_quad(eps_s, FieldDescriptor(5))
    try:
        g1, g2, g3 = three_squares_decompose(eps, budget)
    except SearchBudgetExceeded as exc:
        print(f"search budget exhausted: {exc}", file=sys.stderr)
        return 1
    total = g1 * g1 + g2 * g2 + g3 * g3
    print(f"{eps} = ({g1})^2 + ({g2})^2 + ({g3})^2")
    print(f"check: sum of squares = {total}")
    return 0


def _cmd_decompose(args) -> int:
    r = int(args.r)
    dec = decompose(r)
    print(f"b={dec.b} c={dec.c}")
    return 0


_COMMANDS = {
    "gen-noncompact": _cmd_gen_noncompact,
    "gen-compact": _cmd_gen_compact,
    "verify": _cmd_verify,
    "report": _cmd_report,
    "distance": _cmd_distance,
    "three-squares": _cmd_three_squares,
    "decompose": _cmd_decompose,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
