"""Self-contained family certificates: schema, serialization, independent
re-verification, and reporting.

A certificate bundles everything needed to re-derive its claims from first
principles: the form, the normal vector (or its analytic stub), the exact
inequality verdicts, the distance enclosure, and the trace-ring bound.
Verification recomputes every claim using only the exact-arithmetic and
geometry primitives; decimal strings are annotations and never decide
anything.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import tracering
from .compact import (
    CompactStep,
    ConvergenceDiagnostics,
    compute_step,
    convergence_diagnostics,
    validate_rho,
)
from .geometry import (
    DistanceInterval,
    LorentzForm,
    NormalVector,
    distance_interval,
    interval_brackets,
)
from .noncompact import Decomposition, Eq1Report
from .quadfield import (
    IntegralityClass,
    QSQRT5,
    QuadElem,
    decimal_str,
    fraction_decimal,
    rational,
)
from .tracering import TraceRingBound, factorize, is_T_smooth, is_prime

SCHEMA_VERSION = 1

PASS, FAIL, SKIP = "pass", "fail", "skipped"


class MalformedCertificate(ValueError):
    """Structurally unreadable input (JSON shape or schema version)."""


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    witness: str = ""


@dataclass(frozen=True)
class VerificationReport:
    per_check: tuple[CheckResult, ...]
    overall: bool

    def failed(self) -> list[CheckResult]:
        return [c for c in self.per_check if c.status == FAIL]

    def skipped(self) -> list[CheckResult]:
        return [c for c in self.per_check if c.status == SKIP]


@dataclass(frozen=True)
class FamilyCertificate:
    """One index of a family, self-contained for verification."""

    schema_version: int
    case: str  # "noncompact" | "compact"
    ambient_group_key: str
    form: LorentzForm
    k: int
    target_r: int | None  # noncompact target r_k
    target_uv: tuple[int, int] | None  # compact target rho^k coordinates
    w: tuple[QuadElem, ...] | None
    decomposition: Decomposition | None
    step: CompactStep | None
    eq1: Eq1Report
    cosh_sq: QuadElem
    distance: DistanceInterval | None
    systole_upper_bound: DistanceInterval | None
    smooth_T: int | None
    smooth_ok: bool | None
    trace_ring_bound: TraceRingBound
    diagnostics: ConvergenceDiagnostics | None
    downgraded: bool = False

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_noncompact_data(
        cls,
        form: LorentzForm,
        ambient_group_key: str,
        k: int,
        r: int,
        decomposition: Decomposition,
        w: NormalVector,
        eq1: Eq1Report,
        smooth_T: int,
        interval_width: Fraction,
    ) -> FamilyCertificate:
        dist, systole = _distance_block(eq1, interval_width)
        return cls(
            schema_version=SCHEMA_VERSION,
            case="noncompact",
            ambient_group_key=ambient_group_key,
            form=form,
            k=k,
            target_r=r,
            target_uv=None,
            w=w.components,
            decomposition=decomposition,
            step=None,
            eq1=eq1,
            cosh_sq=eq1.ratio,
            distance=dist,
            systole_upper_bound=systole,
            smooth_T=smooth_T,
            smooth_ok=is_T_smooth(r, smooth_T),
            trace_ring_bound=tracering.trace_ring_bound_rational(r),
            diagnostics=None,
        )

    @classmethod
    def from_compact_data(
        cls,
        form: LorentzForm,
        ambient_group_key: str,
        step: CompactStep,
        eq1: Eq1Report,
        trace_ring_bound: TraceRingBound,
        diagnostics: ConvergenceDiagnostics,
        n: int,
        downgraded: bool,
        interval_width: Fraction,
    ) -> FamilyCertificate:
        from .compact import build_w_compact

        w = build_w_compact(step, n).components if step.gammas else None
        dist, systole = _distance_block(eq1, interval_width)
        return cls(
            schema_version=SCHEMA_VERSION,
            case="compact",
            ambient_group_key=ambient_group_key,
            form=form,
            k=step.k,
            target_r=None,
            target_uv=(step.u, step.v),
            w=w,
            decomposition=None,
            step=step,
            eq1=eq1,
            cosh_sq=eq1.ratio,
            distance=dist,
            systole_upper_bound=systole,
            smooth_T=None,
            smooth_ok=None,
            trace_ring_bound=trace_ring_bound,
            diagnostics=diagnostics,
            downgraded=downgraded,
        )

    # -- serialization ---------------------------------------------------------

    def to_obj(self) -> dict:
        if self.case == "noncompact":
            target = {"r": str(self.target_r)}
            decomposition = self.decomposition.to_obj()
            mode = None
        else:
            target = {"u": str(self.target_uv[0]), "v": str(self.target_uv[1])}
            decomposition = self.step.to_obj()
            mode = {
                "analytic": self.step.gammas is None,
                "gammasIncluded": self.step.gammas is not None,
                "downgraded": self.downgraded,
            }
        return {
            "schemaVersion": self.schema_version,
            "case": self.case,
            "ambientGroupKey": self.ambient_group_key,
            "form": self.form.to_obj(),
            "k": self.k,
            "target": target,
            "w": [c.to_obj() for c in self.w] if self.w is not None else None,
            "decomposition": decomposition,
            "eq1": self.eq1.to_obj(),
            "coshSq": self.cosh_sq.to_obj(),
            "distance": self.distance.to_obj() if self.distance else None,
            "systoleUpperBound": (
                self.systole_upper_bound.to_obj() if self.systole_upper_bound else None
            ),
            "smoothness": (
                {"T": self.smooth_T, "isSmooth": self.smooth_ok}
                if self.smooth_T is not None
                else None
            ),
            "traceRingBound": self.trace_ring_bound.to_obj(),
            "diagnostics": self.diagnostics.to_obj() if self.diagnostics else None,
            "mode": mode,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> FamilyCertificate:
        try:
            version = obj["schemaVersion"]
            if version != SCHEMA_VERSION:
                raise MalformedCertificate(f"unknown schema version {version!r}")
            case = obj["case"]
            if case not in ("noncompact", "compact"):
                raise MalformedCertificate(f"unknown case {case!r}")
            form = LorentzForm.from_obj(obj["form"])
            w = obj["w"]
            smooth = obj.get("smoothness")
            mode = obj.get("mode") or {}
            if case == "noncompact":
                target_r = int(obj["target"]["r"])
                target_uv = None
                decomposition = Decomposition.from_obj(obj["decomposition"])
                step = None
            else:
                target_r = None
                target_uv = (int(obj["target"]["u"]), int(obj["target"]["v"]))
                decomposition = None
                step = CompactStep.from_obj(obj["decomposition"])
            dist = obj.get("distance")
            sys_b = obj.get("systoleUpperBound")
            diag = obj.get("diagnostics")
            return cls(
                schema_version=version,
                case=case,
                ambient_group_key=str(obj["ambientGroupKey"]),
                form=form,
                k=int(obj["k"]),
                target_r=target_r,
                target_uv=target_uv,
                w=tuple(QuadElem.from_obj(c) for c in w) if w is not None else None,
                decomposition=decomposition,
                step=step,
                eq1=Eq1Report.from_obj(obj["eq1"]),
                cosh_sq=QuadElem.from_obj(obj["coshSq"]),
                distance=DistanceInterval.from_obj(dist) if dist else None,
                systole_upper_bound=DistanceInterval.from_obj(sys_b) if sys_b else None,
                smooth_T=int(smooth["T"]) if smooth else None,
                smooth_ok=bool(smooth["isSmooth"]) if smooth else None,
                trace_ring_bound=TraceRingBound.from_obj(obj["traceRingBound"]),
                diagnostics=ConvergenceDiagnostics.from_obj(diag) if diag else None,
                downgraded=bool(mode.get("downgraded", False)),
            )
        except MalformedCertificate:
            raise
        except (KeyError, TypeError) as exc:
            raise MalformedCertificate(f"certificate shape: {exc!r}") from exc


def _distance_block(
    eq1: Eq1Report, interval_width: Fraction
) -> tuple[DistanceInterval | None, DistanceInterval | None]:
    if not (eq1.ultraparallel_holds and eq1.positivity_holds):
        return None, None
    dist = distance_interval(eq1.ratio, interval_width)
    return dist, dist.doubled()


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def verify(cert: FamilyCertificate) -> VerificationReport:
    """Recompute every claim of the certificate from its own body."""
    checks: list[CheckResult] = []
    if cert.case == "noncompact":
        _verify_noncompact(cert, checks)
    else:
        _verify_compact(cert, checks)
    _verify_common(cert, checks)
    overall = all(c.status != FAIL for c in checks)
    return VerificationReport(tuple(checks), overall)


def verify_obj(obj: dict) -> VerificationReport:
    """Parse-and-verify; value-level breakage becomes a failing check."""
    try:
        cert = FamilyCertificate.from_obj(obj)
        return verify(cert)
    except MalformedCertificate:
        raise
    except Exception as exc:  # tampered values that violate type invariants
        return VerificationReport(
            (CheckResult("wellformed", FAIL, f"inconsistent values: {exc}"),), False
        )


def _check(checks: list[CheckResult], name: str, ok: bool, witness: str = "") -> None:
    checks.append(CheckResult(name, PASS if ok else FAIL, witness if not ok else ""))


def _verify_common(cert: FamilyCertificate, checks: list[CheckResult]) -> None:
    # (viii) ambient key is re-derivable from the embedded form
    key = cert.form.ambient_group_key()
    _check(
        checks,
        "ambient-key",
        key == cert.ambient_group_key,
        f"recomputed {key!r} != stored {cert.ambient_group_key!r}",
    )
    # (v) distance enclosure brackets the exact value; systole is its double
    ultra = cert.eq1.ultraparallel_holds and cert.eq1.positivity_holds
    if not ultra:
        if cert.distance is None and cert.systole_upper_bound is None:
            checks.append(
                CheckResult("distance-bracket", SKIP, "pair not ultraparallel")
            )
        else:
            _check(checks, "distance-bracket", False, "distance on a non-ultraparallel pair")
        return
    if cert.distance is None or cert.systole_upper_bound is None:
        _check(checks, "distance-bracket", False, "missing distance interval")
        return
    d, s = cert.distance, cert.systole_upper_bound
    ok = d.is_wellformed()
    witness = f"ill-formed interval [{d.lo}, {d.hi}]"
    if ok and not interval_brackets(cert.cosh_sq, d):
        ok, witness = False, f"arccosh(sqrt({cert.cosh_sq})) escapes [{d.lo}, {d.hi}]"
    if ok and (s.lo, s.hi) != (2 * d.lo, 2 * d.hi):
        ok, witness = False, "systole bound is not exactly twice the distance interval"
    _check(checks, "distance-bracket", ok, witness)


def _verify_noncompact(cert: FamilyCertificate, checks: list[CheckResult]) -> None:
    r, dec = cert.target_r, cert.decomposition
    # (ii) decomposition identity
    _check(
        checks,
        "decomposition-identity",
        dec.identity_holds() and dec.r == r,
        f"b^2-2c-1 = {dec.b**2 - 2*dec.c - 1} vs r = {r} (b={dec.b}, c={dec.c})",
    )
    # w structure: (c+1, b, c, 0, ..., 0)
    expected = [dec.c + 1, dec.b, dec.c] + [0] * (cert.form.n - 2)
    ok_w = cert.w is not None and list(cert.w) == [rational(x) for x in expected]
    _check(checks, "w-structure", ok_w, f"w != (c+1, b, c, 0...) for {dec}")
    if cert.w is None:
        checks.append(CheckResult("target-norm", FAIL, "missing w"))
        return
    # (i) f(w) equals the stated target
    fw = cert.form.eval(cert.w)
    _check(
        checks,
        "target-norm",
        fw == rational(r),
        f"f(w) = {fw} != target {r}",
    )
    _verify_eq1(cert, fw, cert.w[1], checks)
    # (vi) factorization and smoothness; T minimality is informational
    try:
        fact = factorize(r)
        primes_ok = all(is_prime(p) for p, _ in fact.factors)
        smooth = is_T_smooth(r, cert.smooth_T)
        if not primes_ok or smooth != cert.smooth_ok:
            _check(
                checks,
                "smoothness",
                False,
                f"T-smoothness({r}, T={cert.smooth_T}) = {smooth} != {cert.smooth_ok}",
            )
        else:
            minimal_T = (fact.factors[-1][0] + 1) if fact.factors else 2
            if cert.smooth_T == minimal_T:
                _check(checks, "smoothness", True)
            else:
                checks.append(
                    CheckResult(
                        "smoothness",
                        SKIP,
                        f"verdict holds but T = {cert.smooth_T} is not the minimal "
                        f"sufficient level {minimal_T}",
                    )
                )
    except tracering.FactorizationError as exc:
        _check(checks, "smoothness", False, str(exc))
    # index binding for prime-power families; informational elsewhere
    base = cert.smooth_T - 1
    if base >= 2 and is_prime(base) and base**cert.k == r:
        _check(checks, "index-binding", True)
    else:
        checks.append(
            CheckResult(
                "index-binding",
                SKIP,
                f"k = {cert.k} is not bound by r = (T-1)^k for this target",
            )
        )
    # (vii) trace-ring radical
    try:
        bound = tracering.trace_ring_bound_rational(r)
        _check(
            checks,
            "trace-ring",
            bound == cert.trace_ring_bound,
            f"recomputed {bound.describe()} != stored {cert.trace_ring_bound.describe()}",
        )
    except tracering.FactorizationError as exc:
        _check(checks, "trace-ring", False, str(exc))


def _verify_compact(cert: FamilyCertificate, checks: list[CheckResult]) -> None:
    step = cert.step
    rho = step.rho
    # rho hypotheses
    try:
        rho_ok = validate_rho(rho).validated
    except Exception:
        rho_ok = False
    _check(checks, "rho-valid", rho_ok, f"rho = {rho} fails its inequalities")
    # (ii) power coordinates: rho^k = u + v sqrt5, matching the stated target
    rk = rho**step.k
    ok_pow = (
        rk == step.rho_pow_k()
        and cert.k == step.k
        and cert.target_uv == (step.u, step.v)
        and rk.a.denominator == 1
        and rk.b.denominator == 1
    )
    _check(
        checks,
        "power-coordinates",
        ok_pow,
        f"rho^{step.k} = {rk} != stored ({step.u}, {step.v}) "
        f"/ target {cert.target_uv} / index {cert.k}",
    )
    # (ii) the ceil/floor recipes for alpha, y, beta
    try:
        fresh = compute_step(validate_rho(rho), step.k)
        ok_recipe = (
            fresh.alpha == step.alpha
            and fresh.y == step.y
            and fresh.beta == step.beta
            and fresh.eps_scale_note == step.eps_scale_note
        )
        witness = (
            f"recomputed (alpha, y, beta) = ({fresh.alpha}, {fresh.y}, {fresh.beta})"
            f" != stored ({step.alpha}, {step.y}, {step.beta})"
        )
    except Exception as exc:
        ok_recipe, witness = False, f"recipe recomputation failed: {exc}"
    _check(checks, "alpha-beta-recipe", ok_recipe, witness)
    # (ii) defining identity of epsilon
    sqrt5 = QSQRT5.sqrt_gen()
    lhs = -sqrt5 * step.alpha * step.alpha + step.beta * step.beta + step.epsilon
    _check(
        checks,
        "epsilon-identity",
        lhs == step.rho_pow_k(),
        f"-sqrt5 a^2 + b^2 + eps = {lhs} != rho^k = {step.rho_pow_k()}",
    )
    _check(
        checks,
        "epsilon-positivity",
        step.epsilon.is_totally_positive() == step.eps_totally_positive,
        f"total positivity of {step.epsilon} is "
        f"{step.epsilon.is_totally_positive()}, stored {step.eps_totally_positive}",
    )
    # (ii) gamma clause
    if step.gammas is None:
        checks.append(CheckResult("gamma-sum", SKIP, "analytic mode: gammas omitted"))
    else:
        total = QSQRT5.zero()
        for g in step.gammas:
            total = total + g * g
        integral = all(
            g.integrality() is not IntegralityClass.NONE for g in step.gammas
        )
        _check(
            checks,
            "gamma-sum",
            total == step.epsilon and integral,
            f"sum gamma^2 = {total} != eps = {step.epsilon} (integral: {integral})",
        )
    # (i) f(w) equals rho^k
    if step.gammas is None:
        checks.append(
            CheckResult(
                "target-norm",
                SKIP,
                "analytic mode: f(w) = rho^k holds modulo the gamma clause "
                "(epsilon identity checked above)",
            )
        )
        fw = step.rho_pow_k()
    else:
        expected_w = (step.alpha, step.beta) + step.gammas + tuple(
            QSQRT5.zero() for _ in range(cert.form.n - 4)
        )
        ok_w = cert.w is not None and tuple(cert.w) == expected_w
        _check(checks, "w-structure", ok_w, "w != (alpha, beta, gammas, 0...)")
        if cert.w is None:
            checks.append(CheckResult("target-norm", FAIL, "missing w"))
            return
        fw = cert.form.eval(cert.w)
        _check(
            checks,
            "target-norm",
            fw == step.rho_pow_k(),
            f"f(w) = {fw} != rho^k = {step.rho_pow_k()}",
        )
    _verify_eq1(cert, step.rho_pow_k(), step.beta, checks)
    # convergence diagnostics are annotations, but still deterministic
    if cert.diagnostics is None:
        checks.append(CheckResult("diagnostics", SKIP, "no diagnostics recorded"))
    else:
        try:
            fresh_diag = convergence_diagnostics(validate_rho(rho), step.k)
            _check(
                checks,
                "diagnostics",
                fresh_diag == cert.diagnostics,
                "recomputed convergence diagnostics differ from stored values",
            )
        except Exception as exc:
            _check(checks, "diagnostics", False, f"recomputation failed: {exc}")
    # (vii) trace-ring bound over O_K
    try:
        bound = tracering.trace_ring_bound_quadratic(rho)
        _check(
            checks,
            "trace-ring",
            bound == cert.trace_ring_bound,
            f"recomputed {bound.describe()} != stored {cert.trace_ring_bound.describe()}",
        )
    except tracering.FactorizationError as exc:
        _check(checks, "trace-ring", False, str(exc))


def _verify_eq1(
    cert: FamilyCertificate,
    fw: QuadElem,
    w1: QuadElem,
    checks: list[CheckResult],
) -> None:
    # (iii) the two sign conditions
    w1sq = w1 * w1
    ultra = (w1sq - fw).sign() > 0
    positive = fw.sign() > 0
    ok = ultra == cert.eq1.ultraparallel_holds and positive == cert.eq1.positivity_holds
    _check(
        checks,
        "eq1-signs",
        ok,
        f"signs (ultra={ultra}, positive={positive}) != stored "
        f"({cert.eq1.ultraparallel_holds}, {cert.eq1.positivity_holds})",
    )
    # (iv) exact cosh^2 ratio
    if positive:
        ratio = w1sq / fw
        ok_ratio = ratio == cert.cosh_sq == cert.eq1.ratio
        sign_ok = (ratio - 1).sign() == cert.eq1.ratio_minus_one_sign
        _check(
            checks,
            "cosh-sq-ratio",
            ok_ratio and sign_ok,
            f"w1^2/f(w) = {ratio} vs stored coshSq {cert.cosh_sq} "
            f"(ratio-1 sign {(ratio - 1).sign()} vs {cert.eq1.ratio_minus_one_sign})",
        )
    else:
        _check(checks, "cosh-sq-ratio", False, "f(w) not positive: no ratio")


# ---------------------------------------------------------------------------
# file I/O
# ---------------------------------------------------------------------------


def certificates_to_json(certs: Iterable[FamilyCertificate]) -> str:
    payload = {
        "schemaVersion": SCHEMA_VERSION,
        "certificates": [c.to_obj() for c in certs],
    }
    return json.dumps(payload, indent=2) + "\n"


def raw_objs_from_json(text: str) -> list[dict]:
    """Certificate dicts from an envelope, a bare list, or a single object."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedCertificate(f"not JSON: {exc}") from exc
    if isinstance(payload, dict) and "certificates" in payload:
        version = payload.get("schemaVersion")
        if version != SCHEMA_VERSION:
            raise MalformedCertificate(f"unknown schema version {version!r}")
        objs = payload["certificates"]
    elif isinstance(payload, list):
        objs = payload
    elif isinstance(payload, dict):
        objs = [payload]
    else:
        raise MalformedCertificate("unrecognized certificate payload")
    if not isinstance(objs, list) or not all(isinstance(o, dict) for o in objs):
        raise MalformedCertificate("certificates field is not a list of objects")
    return objs


def certificates_from_json(text: str) -> list[FamilyCertificate]:
    return [FamilyCertificate.from_obj(o) for o in raw_objs_from_json(text)]


# ---------------------------------------------------------------------------
# reporting
# ---------------------------------------------------------------------------


def _target_label(cert: FamilyCertificate) -> str:
    if cert.case == "noncompact":
        return str(cert.target_r)
    return f"rho^{cert.k}"


def _row(cert: FamilyCertificate) -> dict:
    ratio_dec = decimal_str(cert.cosh_sq, 12)
    if cert.distance is not None:
        mid = fraction_decimal(cert.distance.midpoint(), 12)
        sys_hi = fraction_decimal(cert.systole_upper_bound.hi, 12)
    else:
        mid = sys_hi = "-"
    return {
        "k": cert.k,
        "target": _target_label(cert),
        "coshSq": ratio_dec,
        "distanceMid": mid,
        "systoleUpperBound": sys_hi,
        "traceRing": cert.trace_ring_bound.describe(),
    }


def _footer(certs: list[FamilyCertificate]) -> dict:
    partition = tracering.pigeonhole_groups(certs)
    bounds = [
        (c.k, c.systole_upper_bound.hi) for c in certs if c.systole_upper_bound
    ]
    trend = "no ultraparallel members"
    if bounds:
        onset = len(bounds) - 1
        while onset > 0 and bounds[onset - 1][1] > bounds[onset][1]:
            onset -= 1
        if onset == 0 and len(bounds) > 1:
            trend = f"systole bounds strictly decreasing from k={bounds[0][0]}"
        elif onset < len(bounds) - 1:
            trend = f"systole bounds strictly decreasing from k={bounds[onset][0]}"
        elif len(bounds) == 1:
            trend = "single member: no trend"
        else:
            trend = "no strictly decreasing tail"
    return {
        "pigeonhole": {key: len(ks) for key, ks in partition.classes},
        "systoleTrend": trend,
    }


def render_report(certs: list[FamilyCertificate], fmt: str = "table") -> str:
    """Per-index summary rows plus a pigeonhole/trend footer."""
    if not certs:
        raise ValueError("cannot report on an empty certificate list")
    versions = {c.schema_version for c in certs}
    if len(versions) != 1:
        raise ValueError(f"mixed schema versions {sorted(versions)}")
    keys = {c.ambient_group_key for c in certs}
    if len(keys) != 1:
        raise ValueError(f"mixed ambient group keys: {sorted(keys)}")
    rows = [_row(c) for c in certs]
    footer = _footer(list(certs))
    if fmt == "json":
        return json.dumps({"rows": rows, "footer": footer}, indent=2) + "\n"
    if fmt == "csv":
        header = "k,target,cosh_sq,distance_mid,systole_upper_bound,trace_ring"
        lines = [header]
        for r in rows:
            lines.append(
                f"{r['k']},{r['target']},{r['coshSq']},{r['distanceMid']},"
                f"{r['systoleUpperBound']},{r['traceRing']}"
            )
        for key, size in footer["pigeonhole"].items():
            lines.append(f"# pigeonhole {key}: {size}")
        lines.append(f"# {footer['systoleTrend']}")
        return "\n".join(lines) + "\n"
    if fmt == "table":
        cols = ["k", "target", "coshSq", "distanceMid", "systoleUpperBound", "traceRing"]
        headers = ["k", "target", "cosh^2(d)", "distance", "systole<=", "trace ring"]
        widths = [
            max(len(h), *(len(str(r[c])) for r in rows)) for h, c in zip(headers, cols)
        ]
        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
        lines.append("  ".join("-" * w for w in widths))
        for r in rows:
            lines.append("  ".join(str(r[c]).ljust(w) for c, w in zip(cols, widths)))
        lines.append("")
        for key, size in footer["pigeonhole"].items():
            lines.append(f"pigeonhole {key}: {size} certificate(s)")
        lines.append(footer["systoleTrend"])
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")
