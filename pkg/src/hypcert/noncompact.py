"""The noncompact family over Q: decompose smooth targets as r = b^2 - 2c - 1,
build the cut-hyperplane normals w = (c+1, b, c, 0, ..., 0), and check the
ultraparallelism inequalities exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .geometry import LorentzForm, NormalVector
from .quadfield import QuadElem, rational
from . import tracering


class ConstructionError(ValueError):
    """Family construction parameters out of range."""


@dataclass(frozen=True)
class Decomposition:
    """r = b^2 - 2c - 1 with b > 0 and 0 <= c <= 2b.

    Deliberately not self-validating: certificate verification re-derives the
    identity and must report tampered values instead of failing to parse.
    """

    r: int
    b: int
    c: int

    def identity_holds(self) -> bool:
        return (
            self.r >= 1
            and self.b >= 1
            and 0 <= self.c <= 2 * self.b
            and self.b * self.b - 2 * self.c - 1 == self.r
        )

    def to_obj(self) -> dict:
        return {"r": str(self.r), "b": str(self.b), "c": str(self.c)}

    @classmethod
    def from_obj(cls, obj: dict) -> Decomposition:
        return cls(int(obj["r"]), int(obj["b"]), int(obj["c"]))


def decompose(r: int) -> Decomposition:
    """Minimal-b decomposition r = b^2 - 2c - 1, total for r >= 1.

    b starts at ceil(sqrt(r+1)); consecutive squares alternate parity, so at
    most one bump fixes b^2 - r - 1 even, and then c = (b^2 - r - 1)/2 <= 2b.
    """
    if r < 1:
        raise ConstructionError(f"need r >= 1, got {r}")
    t = math.isqrt(r + 1)
    b = t if t * t == r + 1 else t + 1
    if (b * b - r - 1) % 2 != 0:
        b += 1
    return Decomposition(r, b, (b * b - r - 1) // 2)


@dataclass(frozen=True)
class Eq1Report:
    """Exact verdicts on w_1^2 > f(w) > 0 and the ratio w_1^2/f(w)."""

    ultraparallel_holds: bool
    positivity_holds: bool
    ratio: QuadElem
    ratio_minus_one_sign: int

    def to_obj(self) -> dict:
        return {
            "ultraparallelHolds": self.ultraparallel_holds,
            "positivityHolds": self.positivity_holds,
            "ratio": self.ratio.to_obj(),
            "ratioMinusOneSign": self.ratio_minus_one_sign,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> Eq1Report:
        return cls(
            bool(obj["ultraparallelHolds"]),
            bool(obj["positivityHolds"]),
            QuadElem.from_obj(obj["ratio"]),
            int(obj["ratioMinusOneSign"]),
        )


def build_w_noncompact(dec: Decomposition, n: int = 3) -> NormalVector:
    """w = (c+1, b, c, 0, ..., 0) over the standard form; f(w) = r exactly."""
    if n < 3:
        raise ConstructionError(f"the noncompact family needs n >= 3, got {n}")
    form = LorentzForm.standard(n)
    comps = [rational(dec.c + 1), rational(dec.b), rational(dec.c)]
    comps += [rational(0)] * (n - 2)
    return NormalVector(form, tuple(comps))


def check_eq1(w: NormalVector) -> Eq1Report:
    """The two sign conditions and the exact ratio against R_0 = (0,1,0,..)-perp.

    The ratio w_1^2 / f(w) equals cosh^2 of the hyperplane distance whenever
    the pair is ultraparallel.
    """
    fw = w.norm_value()
    if fw.sign() == 0:
        raise ConstructionError("f(w) = 0: not a hyperplane normal")
    w1 = w.components[1]
    w1sq = w1 * w1
    ratio = w1sq / fw
    return Eq1Report(
        ultraparallel_holds=(w1sq - fw).sign() > 0,
        positivity_holds=fw.sign() > 0,
        ratio=ratio,
        ratio_minus_one_sign=(ratio - 1).sign(),
    )


def gen_noncompact_family(
    p: int,
    kmax: int,
    n: int = 3,
    interval_width: Fraction = Fraction(1, 10**12),
):
    """Certificates for the targets r_k = p^k, k = 1..kmax (trace ring bound
    Z[1/p] for every member)."""
    if kmax < 1:
        raise ConstructionError(f"need kmax >= 1, got {kmax}")
    targets = tracering.smooth_targets(p, kmax)
    return gen_noncompact_from_targets(
        targets, T=p + 1, n=n, interval_width=interval_width
    )


def gen_noncompact_from_targets(
    targets: list[int],
    T: int,
    n: int = 3,
    interval_width: Fraction = Fraction(1, 10**12),
):
    """Certificates for arbitrary T-smooth targets (gated: every target must
    actually be T-smooth)."""
    from .certificates import FamilyCertificate  # local import: layering

    if not targets:
        raise ConstructionError("empty target list")
    if n < 3:
        raise ConstructionError(f"the noncompact family needs n >= 3, got {n}")
    certs = []
    form = LorentzForm.standard(n)
    key = form.ambient_group_key()
    for k, r in enumerate(targets, start=1):
        if not tracering.is_T_smooth(r, T):
            raise ConstructionError(f"target {r} is not {T}-smooth")
        dec = decompose(r)
        w = build_w_noncompact(dec, n)
        eq1 = check_eq1(w)
        certs.append(
            FamilyCertificate.from_noncompact_data(
                form=form,
                ambient_group_key=key,
                k=k,
                r=r,
                decomposition=dec,
                w=w,
                eq1=eq1,
                smooth_T=T,
                interval_width=interval_width,
            )
        )
    return certs
