"""The compact family over Q(sqrt 5): powers of a validated unit-like
parameter rho, the ceil/floor coordinates alpha_k and beta_k, the exact
error element epsilon with its three-squares decompositions in O_K, and the
convergence diagnostics that drive the distance-to-zero claim.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .geometry import LorentzForm, NormalVector
from .quadfield import (
    IntegralityClass,
    QSQRT5,
    QuadElem,
    decimal_str,
    decimal_bounds,
    fraction_decimal,
)
from .noncompact import ConstructionError, Eq1Report
from . import tracering

DEFAULT_SEARCH_BUDGET = 5_000_000


class SearchBudgetExceeded(RuntimeError):
    """Three-squares search ran out of budget (existence is still guaranteed)."""


@dataclass(frozen=True)
class RhoParameter:
    """rho in Z[sqrt 5] with the growth hypotheses sigma(rho)^2 > rho >
    sigma(rho) > 1, each checked by one exact sign test."""

    rho: QuadElem
    validated: bool

    @classmethod
    def check(cls, rho: QuadElem) -> RhoParameter:
        if rho.field != QSQRT5:
            raise ConstructionError("rho must live in Q(sqrt 5)")
        if rho.integrality() not in (IntegralityClass.Z, IntegralityClass.Z_SQRT_D):
            raise ConstructionError(f"rho = {rho} is not in Z[sqrt 5]")
        sig = rho.conjugate()
        ok = (
            (sig * sig - rho).sign() > 0
            and (rho - sig).sign() > 0
            and (sig - 1).sign() > 0
        )
        return cls(rho, ok)


def validate_rho(rho: QuadElem) -> RhoParameter:
    return RhoParameter.check(rho)


@dataclass(frozen=True)
class CompactStep:
    """All exact data of one index k: rho^k = u + v sqrt5, the coordinates
    alpha = ceil(x) + sqrt5 and beta = floor(sqrt5 y) + sqrt5 y, the error
    epsilon with -sqrt5 alpha^2 + beta^2 + epsilon = rho^k, and (in explicit
    mode) a three-squares decomposition of epsilon."""

    rho: QuadElem
    k: int
    u: int
    v: int
    alpha: QuadElem
    y: int
    beta: QuadElem
    epsilon: QuadElem
    eps_totally_positive: bool
    eps_scale_note: str
    gammas: tuple[QuadElem, QuadElem, QuadElem] | None = None

    @property
    def mode(self) -> str:
        return "analytic" if self.gammas is None else "explicit"

    def rho_pow_k(self) -> QuadElem:
        return QuadElem(QSQRT5, Fraction(self.u), Fraction(self.v))

    def with_gammas(self, gammas: tuple[QuadElem, QuadElem, QuadElem]) -> CompactStep:
        return CompactStep(
            self.rho,
            self.k,
            self.u,
            self.v,
            self.alpha,
            self.y,
            self.beta,
            self.epsilon,
            self.eps_totally_positive,
            self.eps_scale_note,
            gammas,
        )

    def to_obj(self) -> dict:
        return {
            "rho": self.rho.to_obj(),
            "k": self.k,
            "u": str(self.u),
            "v": str(self.v),
            "alpha": self.alpha.to_obj(),
            "y": str(self.y),
            "beta": self.beta.to_obj(),
            "epsilon": self.epsilon.to_obj(),
            "epsTotallyPositive": self.eps_totally_positive,
            "epsScaleNote": self.eps_scale_note,
            "gammas": [g.to_obj() for g in self.gammas] if self.gammas else None,
            "mode": self.mode,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> CompactStep:
        gammas = obj.get("gammas")
        return cls(
            QuadElem.from_obj(obj["rho"]),
            int(obj["k"]),
            int(obj["u"]),
            int(obj["v"]),
            QuadElem.from_obj(obj["alpha"]),
            int(obj["y"]),
            QuadElem.from_obj(obj["beta"]),
            QuadElem.from_obj(obj["epsilon"]),
            bool(obj["epsTotallyPositive"]),
            str(obj["epsScaleNote"]),
            tuple(QuadElem.from_obj(g) for g in gammas) if gammas else None,
        )


def compute_step(rho_param: RhoParameter, k: int) -> CompactStep:
    """Analytic-mode step: everything except the gamma triple.

    alpha is the exact ceiling of sqrt(sigma(rho^k)/sqrt5) plus sqrt5;
    y is the largest integer with 10 y^2 <= u_k, so beta = floor(sqrt5 y)
    + sqrt5 y matches the floor(sqrt(u_k/10)) recipe without rational
    radicand corner cases.
    """
    if not rho_param.validated:
        raise ConstructionError("rho fails its validity inequalities")
    if k < 1:
        raise ConstructionError(f"need k >= 1, got {k}")
    rho = rho_param.rho
    rk = rho**k
    u, v = rk.a.numerator, rk.b.numerator
    # sigma(rho^k)/sqrt5 = -v + (u/5) sqrt5
    x_sq = QuadElem(QSQRT5, Fraction(-v), Fraction(u, 5))
    alpha = QuadElem(QSQRT5, Fraction(x_sq.sqrt_ceil()), Fraction(1))
    y = math.isqrt(u // 10)
    beta = QuadElem(QSQRT5, Fraction(math.isqrt(5 * y * y)), Fraction(y))
    sqrt5 = QSQRT5.sqrt_gen()
    eps = rk + sqrt5 * alpha * alpha - beta * beta
    if beta:
        note = f"eps/beta ~ {decimal_str(eps / beta, 6)}"
    else:
        note = f"eps ~ {decimal_str(eps, 6)} (beta = 0)"
    return CompactStep(
        rho=rho,
        k=k,
        u=u,
        v=v,
        alpha=alpha,
        y=y,
        beta=beta,
        epsilon=eps,
        eps_totally_positive=eps.is_totally_positive(),
        eps_scale_note=note,
    )


# ---------------------------------------------------------------------------
# three squares in O_K, K = Q(sqrt 5)
# ---------------------------------------------------------------------------


def _sgn5(x: int, y: int) -> int:
    """Exact sign of x + y sqrt5 for integers x, y."""
    if x == 0 and y == 0:
        return 0
    if y == 0:
        return 1 if x > 0 else -1
    if x == 0:
        return 1 if y > 0 else -1
    sx = 1 if x > 0 else -1
    sy = 1 if y > 0 else -1
    if sx == sy:
        return sx
    return sx if x * x > 5 * y * y else sy


def _candidate_cmp(c1: tuple[int, int], c2: tuple[int, int]) -> int:
    return -_sgn5(c1[0] - c2[0], c1[1] - c2[1])


def _quarter_square(P: int, Q: int) -> tuple[int, int]:
    """4 * ((P + Q sqrt5)/2)^2 as an integer pair."""
    return P * P + 5 * Q * Q, 2 * P * Q


def _perfect_square_root(X: int, Y: int) -> tuple[int, int] | None:
    """(P, Q) with ((P + Q sqrt5)/2)^2 = (X + Y sqrt5)/4 and P + Q sqrt5 >= 0,
    matching parity; None when no such root exists."""
    if X == 0 and Y == 0:
        return 0, 0
    if Y % 2 != 0:
        return None
    h = Y // 2  # = P*Q
    if h == 0:
        s = math.isqrt(X) if X >= 0 else -1
        if s >= 0 and s * s == X and s % 2 == 0:
            return s, 0
        if X >= 0 and X % 5 == 0:
            t = math.isqrt(X // 5)
            if t * t * 5 == X and t % 2 == 0:
                return 0, t
        return None
    disc = X * X - 5 * Y * Y
    if disc < 0:
        return None
    s = math.isqrt(disc)
    if s * s != disc:
        return None
    for num in (X + s, X - s):
        if num < 0 or num % 2 != 0:
            continue
        psq = num // 2
        P = math.isqrt(psq)
        if P == 0 or P * P != psq:
            continue
        if h % P != 0:
            continue
        Q = h // P
        if (P - Q) % 2 != 0 or P * P + 5 * Q * Q != X:
            continue
        if _sgn5(P, Q) < 0:
            P, Q = -P, -Q
        return P, Q
    return None


def three_squares_decompose(
    eps: QuadElem, budget: int = DEFAULT_SEARCH_BUDGET
) -> tuple[QuadElem, QuadElem, QuadElem]:
    """gamma_1^2 + gamma_2^2 + gamma_3^2 = eps with all gamma_i in O_K.

    Existence is guaranteed for totally positive eps (this is the sum-of-
    three-squares property special to Q and Q(sqrt 5)); the search enumerates
    half-coordinate candidates gamma with gamma^2 bounded by eps at both real
    embeddings, greedily in decreasing identity value, and closes each pair
    by an exact perfect-square test on the remainder.  Raises
    SearchBudgetExceeded after `budget` pair inspections - never "not found".
    """
    if eps.field != QSQRT5:
        raise ConstructionError("three-squares search is specific to Q(sqrt 5)")
    if eps.integrality() is IntegralityClass.NONE:
        raise ConstructionError(f"eps = {eps} is not integral")
    if not eps.is_totally_positive():
        raise ConstructionError(f"eps = {eps} is not totally positive")

    E = (int(4 * eps.a), int(4 * eps.b))  # eps scaled by 4
    m1 = eps.sqrt_ceil()
    m2 = eps.conjugate().sqrt_ceil()
    cands: list[tuple[int, int]] = []
    q_lo = -(math.isqrt(m2 * m2 // 5) + 1)
    q_hi = math.isqrt((m1 + m2) ** 2 // 5) + 1
    for P in range(-m2, m1 + m2 + 1):
        for Q in range(q_lo, q_hi + 1):
            if (P - Q) % 2 != 0:
                continue
            if _sgn5(P, Q) < 0:
                continue  # one representative of each +/- pair
            sq = _quarter_square(P, Q)
            if _sgn5(E[0] - sq[0], E[1] - sq[1]) < 0:
                continue  # identity embedding bound
            if _sgn5(E[0] - sq[0], sq[1] - E[1]) < 0:
                continue  # conjugate embedding bound
            cands.append((P, Q))
    cands.sort(key=functools.cmp_to_key(_candidate_cmp))

    def as_elem(P: int, Q: int) -> QuadElem:
        return QuadElem(QSQRT5, Fraction(P, 2), Fraction(Q, 2))

    tested = 0
    for i, (P1, Q1) in enumerate(cands):
        sq1 = _quarter_square(P1, Q1)
        # gamma_1 is the largest of the triple: 3 gamma_1^2 >= eps
        if _sgn5(3 * sq1[0] - E[0], 3 * sq1[1] - E[1]) < 0:
            break
        R1 = (E[0] - sq1[0], E[1] - sq1[1])  # >= 0 at both embeddings by the filter
        for j in range(i, len(cands)):
            P2, Q2 = cands[j]
            sq2 = _quarter_square(P2, Q2)
            if _sgn5(R1[0] - sq2[0], R1[1] - sq2[1]) < 0:
                continue
            if _sgn5(2 * sq2[0] - R1[0], 2 * sq2[1] - R1[1]) < 0:
                break  # gamma_2 must still dominate gamma_3
            if _sgn5(R1[0] - sq2[0], sq2[1] - R1[1]) < 0:
                continue
            tested += 1
            if tested > budget:
                raise SearchBudgetExceeded(
                    f"no decomposition of {eps} within {budget} pair tests"
                )
            root = _perfect_square_root(R1[0] - sq2[0], R1[1] - sq2[1])
            if root is not None:
                return (as_elem(P1, Q1), as_elem(P2, Q2), as_elem(*root))
    raise SearchBudgetExceeded(
        f"candidate enumeration for {eps} exhausted without a hit "
        f"(tested {tested} pairs); widen the budget"
    )


def build_w_compact(step: CompactStep, n: int = 4) -> NormalVector:
    """w = (alpha, beta, gamma_1, gamma_2, gamma_3, 0, ..., 0) with
    f(w) = rho^k exactly."""
    if step.gammas is None:
        raise ConstructionError("explicit mode requires a gamma triple")
    if n < 4:
        raise ConstructionError(f"the compact family needs n >= 4, got {n}")
    form = LorentzForm.compact_sqrt5(n)
    comps = (step.alpha, step.beta) + step.gammas + tuple(
        QSQRT5.zero() for _ in range(n - 4)
    )
    w = NormalVector(form, comps)
    if w.norm_value() != step.rho_pow_k():
        raise ConstructionError("f(w) != rho^k: inconsistent step data")
    return w


def check_eq1_compact(step: CompactStep) -> Eq1Report:
    """Exact signs of beta^2 - rho^k and rho^k, plus the ratio beta^2/rho^k.

    Only beta and rho^k enter: valid in analytic and explicit mode alike.
    """
    rk = step.rho_pow_k()
    beta_sq = step.beta * step.beta
    ratio = beta_sq / rk
    return Eq1Report(
        ultraparallel_holds=(beta_sq - rk).sign() > 0,
        positivity_holds=rk.sign() > 0,
        ratio=ratio,
        ratio_minus_one_sign=(ratio - 1).sign(),
    )


@dataclass(frozen=True)
class ConvergenceDiagnostics:
    """The three exact quantities whose limits drive the proof, with decimal
    renderings as annotations."""

    k: int
    sqrt5v_over_u_sq: Fraction  # exact companion 5 v_k^2 / u_k^2
    sqrt5v_over_u_lo: str
    sqrt5v_over_u_hi: str
    alpha_sq_over_beta_sq: QuadElem | None
    alpha_sq_over_beta_sq_decimal: str | None
    sigma_rho_2k_over_u: QuadElem
    sigma_rho_2k_over_u_decimal: str

    def to_obj(self) -> dict:
        r = self.sqrt5v_over_u_sq
        return {
            "k": self.k,
            "sqrt5vOverUSquared": f"{r.numerator}/{r.denominator}",
            "sqrt5vOverUInterval": [self.sqrt5v_over_u_lo, self.sqrt5v_over_u_hi],
            "alphaSqOverBetaSq": (
                self.alpha_sq_over_beta_sq.to_obj()
                if self.alpha_sq_over_beta_sq is not None
                else None
            ),
            "alphaSqOverBetaSqDecimal": self.alpha_sq_over_beta_sq_decimal,
            "sigmaRho2kOverU": self.sigma_rho_2k_over_u.to_obj(),
            "sigmaRho2kOverUDecimal": self.sigma_rho_2k_over_u_decimal,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> ConvergenceDiagnostics:
        a = obj.get("alphaSqOverBetaSq")
        return cls(
            int(obj["k"]),
            Fraction(obj["sqrt5vOverUSquared"]),
            obj["sqrt5vOverUInterval"][0],
            obj["sqrt5vOverUInterval"][1],
            QuadElem.from_obj(a) if a else None,
            obj.get("alphaSqOverBetaSqDecimal"),
            QuadElem.from_obj(obj["sigmaRho2kOverU"]),
            obj["sigmaRho2kOverUDecimal"],
        )


def convergence_diagnostics(rho_param: RhoParameter, k: int) -> ConvergenceDiagnostics:
    step = compute_step(rho_param, k)
    u, v = step.u, step.v
    companion = Fraction(5 * v * v, u * u)
    irr = QuadElem(QSQRT5, Fraction(0), Fraction(v, u))
    lo, hi = decimal_bounds(irr, 14)
    if step.beta:
        ab = (step.alpha * step.alpha) / (step.beta * step.beta)
        ab_dec = decimal_str(ab, 12)
    else:
        ab, ab_dec = None, None
    rho2k = rho_param.rho ** (2 * k)
    sig_over_u = rho2k.conjugate() / u
    return ConvergenceDiagnostics(
        k=k,
        sqrt5v_over_u_sq=companion,
        sqrt5v_over_u_lo=fraction_decimal(lo, 12),
        sqrt5v_over_u_hi=fraction_decimal(hi, 12),
        alpha_sq_over_beta_sq=ab,
        alpha_sq_over_beta_sq_decimal=ab_dec,
        sigma_rho_2k_over_u=sig_over_u,
        sigma_rho_2k_over_u_decimal=decimal_str(sig_over_u, 12),
    )


def gen_compact_family(
    rho: QuadElem,
    kmin: int,
    kmax: int,
    n: int = 4,
    mode: str = "analytic",
    budget: int = DEFAULT_SEARCH_BUDGET,
    interval_width: Fraction = Fraction(1, 10**12),
):
    """Certificates for k in [kmin, kmax]; explicit mode searches for gamma
    triples (falling back, flagged, to analytic when the budget runs out)."""
    from .certificates import FamilyCertificate  # local import: layering

    if mode not in ("analytic", "explicit"):
        raise ConstructionError(f"unknown mode {mode!r}")
    if kmin < 1 or kmax < kmin:
        raise ConstructionError(f"bad index range [{kmin}, {kmax}]")
    rho_param = validate_rho(rho)
    if not rho_param.validated:
        raise ConstructionError(
            f"rho = {rho} violates sigma(rho)^2 > rho > sigma(rho) > 1"
        )
    if n < 4:
        raise ConstructionError(f"the compact family needs n >= 4, got {n}")
    form = LorentzForm.compact_sqrt5(n)
    key = form.ambient_group_key()
    bound = tracering.trace_ring_bound_quadratic(rho)
    certs = []
    for k in range(kmin, kmax + 1):
        step = compute_step(rho_param, k)
        downgraded = False
        if mode == "explicit":
            try:
                step = step.with_gammas(three_squares_decompose(step.epsilon, budget))
            except SearchBudgetExceeded:
                downgraded = True
        eq1 = check_eq1_compact(step)
        diag = convergence_diagnostics(rho_param, k)
        certs.append(
            FamilyCertificate.from_compact_data(
                form=form,
                ambient_group_key=key,
                step=step,
                eq1=eq1,
                trace_ring_bound=bound,
                diagnostics=diag,
                n=n,
                downgraded=downgraded,
                interval_width=interval_width,
            )
        )
    return certs
