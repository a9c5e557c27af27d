"""Diagonal Lorentzian forms, hyperplane pair classification, exact
cosh^2 distances, and rigorous arccosh enclosures.

Every pass/fail decision is an exact sign test on field elements.  The
only approximate object is DistanceInterval, and even there the bracketing
is certified by exact comparisons of rational cosh bounds against the
exact cosh^2 value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .quadfield import (
    FieldDescriptor,
    QuadElem,
    RATIONAL_FIELD,
    QSQRT5,
)


class GeometryError(ValueError):
    """Invalid geometric input."""


class PairClass(Enum):
    INCIDENT = "incident"
    ASYMPTOTICALLY_PARALLEL = "asymptotically_parallel"
    ULTRAPARALLEL = "ultraparallel"


@dataclass(frozen=True)
class LorentzForm:
    """Diagonal quadratic form of signature (n,1) at the identity embedding."""

    field: FieldDescriptor
    n: int
    coefficients: tuple[QuadElem, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if self.n < 2:
            raise GeometryError(f"need n >= 2, got n = {self.n}")
        if len(self.coefficients) != self.n + 1:
            raise GeometryError(
                f"expected {self.n + 1} coefficients, got {len(self.coefficients)}"
            )
        negatives = 0
        for c in self.coefficients:
            if c.field != self.field:
                raise GeometryError("coefficient field mismatch")
            s = c.sign()
            if s == 0:
                raise GeometryError("degenerate diagonal coefficient")
            if s < 0:
                negatives += 1
        if negatives != 1:
            raise GeometryError(
                f"signature must be ({self.n},1): found {negatives} negative entries"
            )

    @classmethod
    def standard(cls, n: int) -> LorentzForm:
        """-x_0^2 + x_1^2 + ... + x_n^2 over Q."""
        f = RATIONAL_FIELD
        return cls(f, n, (f.element(-1),) + tuple(f.element(1) for _ in range(n)))

    @classmethod
    def compact_sqrt5(cls, n: int) -> LorentzForm:
        """-sqrt(5) x_0^2 + x_1^2 + ... + x_n^2 over Q(sqrt 5)."""
        f = QSQRT5
        return cls(f, n, (f.element(0, -1),) + tuple(f.element(1) for _ in range(n)))

    def eval(self, v: tuple[QuadElem, ...]) -> QuadElem:
        """Sum of a_i v_i^2, exact."""
        if len(v) != self.n + 1:
            raise GeometryError(f"vector length {len(v)} != {self.n + 1}")
        acc = self.field.zero()
        for a, x in zip(self.coefficients, v):
            acc = acc + a * x * x
        return acc

    def inner(self, v: tuple[QuadElem, ...], w: tuple[QuadElem, ...]) -> QuadElem:
        """Diagonal polarization: sum of a_i v_i w_i."""
        if len(v) != self.n + 1 or len(w) != self.n + 1:
            raise GeometryError("vector length mismatch")
        acc = self.field.zero()
        for a, x, y in zip(self.coefficients, v, w):
            acc = acc + a * x * y
        return acc

    def ambient_group_key(self) -> str:
        """Canonical identifier of PO_f over the field: field|n|coefficients."""
        coeffs = ",".join(str(c) for c in self.coefficients)
        return f"{self.field}|{self.n}|{coeffs}"

    def basis_vector(self, i: int) -> tuple[QuadElem, ...]:
        return tuple(
            self.field.one() if j == i else self.field.zero()
            for j in range(self.n + 1)
        )

    def to_obj(self) -> dict:
        return {
            "field": self.field.to_obj(),
            "n": self.n,
            "coefficients": [c.to_obj() for c in self.coefficients],
        }

    @classmethod
    def from_obj(cls, obj: dict) -> LorentzForm:
        field = FieldDescriptor.from_obj(obj["field"])
        coeffs = tuple(QuadElem.from_obj(c) for c in obj["coefficients"])
        return cls(field, int(obj["n"]), coeffs)


@dataclass(frozen=True)
class NormalVector:
    """A K-rational vector v with f(v) > 0, defining the hyperplane v-perp."""

    form: LorentzForm
    components: tuple[QuadElem, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        if all(not c for c in self.components):
            raise GeometryError("zero vector defines no hyperplane")
        if self.norm_value().sign() <= 0:
            raise GeometryError("f(v) must be positive for a hyperplane normal")

    def norm_value(self) -> QuadElem:
        return self.form.eval(self.components)


def classify_pair(v1: NormalVector, v2: NormalVector) -> PairClass:
    """Ultraparallel, asymptotically parallel, or incident, by the exact sign
    of <v1,v2>^2 - f(v1) f(v2).

    Convention: positive sign means ultraparallel (the only convention under
    which the cosh distance formula returns a real value > 1 there).
    """
    if v1.form != v2.form:
        raise GeometryError("normal vectors live over different forms")
    ip = v1.form.inner(v1.components, v2.components)
    disc = ip * ip - v1.norm_value() * v2.norm_value()
    s = disc.sign()
    if s > 0:
        return PairClass.ULTRAPARALLEL
    if s == 0:
        return PairClass.ASYMPTOTICALLY_PARALLEL
    return PairClass.INCIDENT


def cosh_sq_distance(v1: NormalVector, v2: NormalVector) -> QuadElem:
    """Exact cosh^2 of the distance between ultraparallel hyperplanes:
    <v1,v2>^2 / (f(v1) f(v2))."""
    if classify_pair(v1, v2) is not PairClass.ULTRAPARALLEL:
        raise GeometryError("cosh_sq_distance requires an ultraparallel pair")
    ip = v1.form.inner(v1.components, v2.components)
    return (ip * ip) / (v1.norm_value() * v2.norm_value())


@dataclass(frozen=True)
class DistanceInterval:
    """Rational enclosure [lo, hi] of a hyperbolic length.

    Not self-validating (parsed certificates may carry tampered bounds);
    well-formedness is a verification check.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))

    def is_wellformed(self) -> bool:
        return 0 <= self.lo <= self.hi

    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def doubled(self) -> DistanceInterval:
        return DistanceInterval(2 * self.lo, 2 * self.hi)

    def to_obj(self) -> dict:
        return {
            "lo": f"{self.lo.numerator}/{self.lo.denominator}",
            "hi": f"{self.hi.numerator}/{self.hi.denominator}",
        }

    @classmethod
    def from_obj(cls, obj: dict) -> DistanceInterval:
        return cls(Fraction(obj["lo"]), Fraction(obj["hi"]))


class EnclosureError(RuntimeError):
    """The series comparison failed to resolve (not reachable for
    transcendental-vs-algebraic comparisons at sane depths)."""


_MAX_COSH_TERMS = 4096


def _cosh_bounds(t: Fraction, terms: int) -> tuple[Fraction, Fraction]:
    """Rational lower/upper bounds on cosh(t) from the truncated even series.

    Tail bound: geometric majorant after `terms` terms; valid whenever
    t^2 < (2*terms+1)(2*terms+2), which holds for every call site here.
    """
    t2 = t * t
    term = Fraction(1)
    total = Fraction(1)
    for i in range(1, terms):
        term = term * t2 / ((2 * i - 1) * (2 * i))
        total += term
    nxt = term * t2 / ((2 * terms - 1) * (2 * terms))
    ratio = t2 / ((2 * terms + 1) * (2 * terms + 2))
    if ratio >= 1:
        raise EnclosureError("cosh series called outside its convergence guard")
    tail = nxt / (1 - ratio)
    return total, total + tail


def _cmp_cosh_sq(t: Fraction, cosh_sq: QuadElem) -> int:
    """Exact sign of cosh(t)^2 - cosh_sq for rational t >= 0.

    Zero is only returned for t = 0 against cosh_sq = 1; for t > 0 the
    comparison always resolves at a finite series depth because cosh(t) is
    transcendental while cosh_sq is algebraic.
    """
    if t == 0:
        return (1 - cosh_sq).sign() if (cosh_sq - 1).sign() != 0 else 0
    terms = 8
    while terms <= _MAX_COSH_TERMS:
        lo, hi = _cosh_bounds(t, terms)
        if (lo * lo - cosh_sq).sign() > 0:
            return 1
        if (hi * hi - cosh_sq).sign() < 0:
            return -1
        terms *= 2
    raise EnclosureError(f"cosh({t})^2 vs {cosh_sq} undecided at depth {_MAX_COSH_TERMS}")


def distance_interval(cosh_sq: QuadElem, width: Fraction = Fraction(1, 10**12)) -> DistanceInterval:
    """Enclose arccosh(sqrt(cosh_sq)) in a rational interval of width <= width.

    Bisection on dyadic candidates t, each step certified by the exact
    comparison of cosh(t)^2 against cosh_sq.
    """
    width = Fraction(width)
    if width <= 0:
        raise GeometryError("width must be positive")
    rel = (cosh_sq - 1).sign()
    if rel < 0:
        raise GeometryError("cosh_sq must be >= 1")
    if rel == 0:
        return DistanceInterval(Fraction(0), Fraction(0))
    lo, hi = Fraction(0), Fraction(1)
    while _cmp_cosh_sq(hi, cosh_sq) < 0:
        lo = hi
        hi *= 2
    while hi - lo > width:
        mid = (lo + hi) / 2
        c = _cmp_cosh_sq(mid, cosh_sq)
        if c == 0:
            return DistanceInterval(mid, mid)
        if c < 0:
            lo = mid
        else:
            hi = mid
    return DistanceInterval(lo, hi)


def interval_brackets(cosh_sq: QuadElem, interval: DistanceInterval) -> bool:
    """Exact check that arccosh(sqrt(cosh_sq)) lies in the interval."""
    if (cosh_sq - 1).sign() < 0:
        return False
    if interval.lo == interval.hi:
        return (cosh_sq - 1).sign() == 0 and interval.lo == 0
    return _cmp_cosh_sq(interval.lo, cosh_sq) <= 0 and _cmp_cosh_sq(interval.hi, cosh_sq) >= 0


class Compactness(Enum):
    NONCOMPACT_WITNESS = "noncompact_witness"
    COMPACT_BY_DEFINITENESS = "compact_by_definiteness"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class CompactnessResult:
    kind: Compactness
    witness: tuple[QuadElem, ...] | None = None


def classify_compactness(form: LorentzForm, box_bound: int = 10) -> CompactnessResult:
    """Two cheap decision rules for PO_f(O) acting cocompactly or not.

    Over a quadratic field, a conjugate-definite form is anisotropic over K
    (apply the conjugation to any isotropic vector), hence compact quotient.
    Over any field, an explicit isotropic vector found in the integer box of
    height <= box_bound witnesses noncompactness.  Otherwise: unknown.
    """
    if not form.field.is_rational:
        if all(c.sign("conjugate") > 0 for c in form.coefficients):
            return CompactnessResult(Compactness.COMPACT_BY_DEFINITENESS)
    witness = _isotropic_box_search(form, box_bound)
    if witness is not None:
        return CompactnessResult(Compactness.NONCOMPACT_WITNESS, witness)
    return CompactnessResult(Compactness.UNKNOWN)


def _isotropic_box_search(
    form: LorentzForm, box_bound: int
) -> tuple[QuadElem, ...] | None:
    if box_bound < 1:
        return None
    dim = form.n + 1
    # integer fast path when the diagonal is rational-integral
    int_coeffs: list[int] | None = []
    for c in form.coefficients:
        if c.b == 0 and c.a.denominator == 1:
            int_coeffs.append(c.a.numerator)
        else:
            int_coeffs = None
            break
    for height in range(1, box_bound + 1):
        for vec in itertools.product(range(-height, height + 1), repeat=dim):
            if max(abs(x) for x in vec) != height:
                continue
            if int_coeffs is not None:
                if sum(a * x * x for a, x in zip(int_coeffs, vec)) != 0:
                    continue
                return tuple(form.field.element(x) for x in vec)
            qvec = tuple(form.field.element(x) for x in vec)
            if not form.eval(qvec):
                return qvec
    return None
