"""Exact arithmetic in Q and real quadratic fields Q(sqrt d).

Elements are stored over the basis (1, sqrt d) with Fraction coordinates,
even when half-integer coordinates occur (d = 1 mod 4); integrality is a
predicate, not a representation.  Every comparison routine here is exact:
floating point never participates in a sign decision.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

MAX_EXPONENT = 10_000

Scalar = Union[int, Fraction, "QuadElem"]


class QuadFieldError(ValueError):
    """Invalid operation on field elements."""


class MixedFieldError(QuadFieldError):
    """Operands live in different fields."""


class ExponentCapError(QuadFieldError):
    """Exponent beyond the supported range (coordinates grow like rho^k)."""


def _is_squarefree(d: int) -> bool:
    if d % 4 == 0:
        return False
    p = 3
    while p * p <= d:
        if d % (p * p) == 0:
            return False
        p += 2
    return True


@dataclass(frozen=True)
class FieldDescriptor:
    """Q (d is None) or the real quadratic field Q(sqrt d), d squarefree >= 2."""

    d: int | None = None

    def __post_init__(self) -> None:
        if self.d is not None:
            if self.d < 2:
                raise QuadFieldError(f"d must be >= 2, got {self.d}")
            if not _is_squarefree(self.d):
                raise QuadFieldError(f"d must be squarefree, got {self.d}")

    @property
    def is_rational(self) -> bool:
        return self.d is None

    def zero(self) -> QuadElem:
        return QuadElem(self, Fraction(0), Fraction(0))

    def one(self) -> QuadElem:
        return QuadElem(self, Fraction(1), Fraction(0))

    def sqrt_gen(self) -> QuadElem:
        if self.is_rational:
            raise QuadFieldError("Q has no quadratic generator")
        return QuadElem(self, Fraction(0), Fraction(1))

    def element(self, a: int | Fraction, b: int | Fraction = 0) -> QuadElem:
        return QuadElem(self, Fraction(a), Fraction(b))

    def __str__(self) -> str:
        return "Q" if self.is_rational else f"Q(sqrt{self.d})"

    def to_obj(self) -> int | str:
        return "rational" if self.is_rational else self.d

    @classmethod
    def from_obj(cls, obj: int | str) -> FieldDescriptor:
        if obj == "rational":
            return cls(None)
        if isinstance(obj, int):
            return cls(obj)
        raise QuadFieldError(f"bad field descriptor {obj!r}")


RATIONAL_FIELD = FieldDescriptor(None)
QSQRT5 = FieldDescriptor(5)


class IntegralityClass(Enum):
    """Smallest standard ring containing the element: Z < Z[sqrt d] < O_K."""

    Z = 0
    Z_SQRT_D = 1
    O_K = 2
    NONE = 3


@dataclass(frozen=True)
class QuadElem:
    """a + b*sqrt(d), exact.  Immutable; all operations return new elements."""

    field: FieldDescriptor
    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.field.is_rational and self.b != 0:
            raise QuadFieldError("rational field forces b = 0")

    # -- coercion ----------------------------------------------------------

    def _coerce(self, other: Scalar) -> QuadElem:
        if isinstance(other, QuadElem):
            if other.field != self.field:
                raise MixedFieldError(f"{other.field} vs {self.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(self.field, Fraction(other), Fraction(0))
        return NotImplemented  # type: ignore[return-value]

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: Scalar) -> QuadElem:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadElem(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> QuadElem:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadElem(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other: Scalar) -> QuadElem:
        return (-self) + other

    def __neg__(self) -> QuadElem:
        return QuadElem(self.field, -self.a, -self.b)

    def __mul__(self, other: Scalar) -> QuadElem:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = self.field.d or 0
        return QuadElem(
            self.field,
            self.a * o.a + d * self.b * o.b,
            self.a * o.b + self.b * o.a,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> QuadElem:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero field element")
        # x / y = x * conj(y) / N(y)
        num = self * o.conjugate()
        return QuadElem(self.field, num.a / n, num.b / n)

    def __rtruediv__(self, other: Scalar) -> QuadElem:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, k: int) -> QuadElem:
        if not isinstance(k, int) or k < 0:
            raise QuadFieldError("exponent must be a nonnegative integer")
        if k > MAX_EXPONENT:
            raise ExponentCapError(f"exponent {k} exceeds cap {MAX_EXPONENT}")
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    # -- Galois structure ----------------------------------------------------

    def conjugate(self) -> QuadElem:
        """The image under the nontrivial automorphism, a - b*sqrt(d)."""
        return QuadElem(self.field, self.a, -self.b)

    def norm(self) -> Fraction:
        """x * conj(x) = a^2 - d*b^2."""
        d = self.field.d or 0
        return self.a * self.a - d * self.b * self.b

    def sign(self, embedding: str = "identity") -> int:
        """Exact sign of the chosen real embedding, by rational comparisons only."""
        if embedding == "conjugate":
            return self.conjugate().sign()
        if embedding != "identity":
            raise QuadFieldError(f"unknown embedding {embedding!r}")
        a, b = self.a, self.b
        if not a and not b:
            return 0
        if not b:
            return 1 if a > 0 else -1
        if not a:
            return 1 if b > 0 else -1
        sa = 1 if a > 0 else -1
        sb = 1 if b > 0 else -1
        if sa == sb:
            return sa
        lhs, rhs = a * a, self.field.d * b * b
        if lhs == rhs:
            # would make sqrt(d) rational; impossible for squarefree d >= 2
            raise QuadFieldError("degenerate comparison a^2 == d b^2")
        return sa if lhs > rhs else sb

    def is_totally_positive(self) -> bool:
        return self.sign() > 0 and self.sign("conjugate") > 0

    # -- exact floor / ceil / sqrt-ceil at the identity embedding ------------

    def _cmp_int(self, m: int) -> int:
        """Sign of (self - m) at the identity embedding."""
        return (self - m).sign()

    def floor(self) -> int:
        """floor of the real number a + b*sqrt(d), exact."""
        if self.field.is_rational or self.b == 0:
            return math.floor(self.a)
        p, q = self.b.numerator, self.b.denominator
        big = self.field.d * p * p
        s = math.isqrt(big)
        if p >= 0:
            t = s // q
        else:
            # floor(-x) = -ceil(x); sqrt(d p^2) irrational for p != 0
            t = -(s // q + 1)
        m = math.floor(self.a) + t
        # the two floors each lose < 1, so at most one step of correction
        while self._cmp_int(m + 1) >= 0:
            m += 1
        while self._cmp_int(m) < 0:
            m -= 1
        return m

    def ceil(self) -> int:
        return -((-self).floor())

    def sqrt_ceil(self) -> int:
        """Smallest integer m >= 0 with m^2 >= a + b*sqrt(d).

        Decided exactly: m^2 >= x reduces to a sign test on m^2 - x.
        """
        if self.sign() < 0:
            raise QuadFieldError("sqrt_ceil needs a nonnegative value")
        fl = max(self.floor(), 0)
        m = math.isqrt(fl)
        while (self._coerce(m * m) - self).sign() < 0:
            m += 1
        return m

    # -- integrality ----------------------------------------------------------

    def integrality(self) -> IntegralityClass:
        a, b = self.a, self.b
        if b == 0 and a.denominator == 1:
            return IntegralityClass.Z
        if self.field.is_rational:
            return IntegralityClass.NONE
        if a.denominator == 1 and b.denominator == 1:
            return IntegralityClass.Z_SQRT_D
        if self.field.d % 4 == 1:
            ta, tb = 2 * a, 2 * b
            if (
                ta.denominator == 1
                and tb.denominator == 1
                and (ta.numerator - tb.numerator) % 2 == 0
            ):
                return IntegralityClass.O_K
        return IntegralityClass.NONE

    # -- rendering & serialization ---------------------------------------------

    def __str__(self) -> str:
        if self.b == 0:
            return _frac_str(self.a)
        d = self.field.d
        if self.a == 0:
            if self.b == 1:
                return f"sqrt{d}"
            if self.b == -1:
                return f"-sqrt{d}"
            return f"{_frac_str(self.b)}sqrt{d}"
        bs = self.b
        op = "+" if bs > 0 else "-"
        mag = abs(bs)
        coeff = "" if mag == 1 else _frac_str(mag)
        return f"{_frac_str(self.a)}{op}{coeff}sqrt{d}"

    def __repr__(self) -> str:
        return f"QuadElem({self.field}, {self})"

    def to_obj(self) -> dict:
        return {
            "d": self.field.to_obj(),
            "a": _frac_canonical(self.a),
            "b": _frac_canonical(self.b),
        }

    @classmethod
    def from_obj(cls, obj: dict) -> QuadElem:
        field = FieldDescriptor.from_obj(obj["d"])
        return cls(field, parse_fraction(obj["a"]), parse_fraction(obj["b"]))


def rational(x: int | Fraction) -> QuadElem:
    return QuadElem(RATIONAL_FIELD, Fraction(x), Fraction(0))


def quad(a: int | Fraction, b: int | Fraction, d: int = 5) -> QuadElem:
    return QuadElem(FieldDescriptor(d), Fraction(a), Fraction(b))


def integer_sqrt_floor(n: int) -> int:
    """Largest m with m^2 <= n (arbitrary-precision)."""
    if n < 0:
        raise QuadFieldError("integer_sqrt_floor needs n >= 0")
    return math.isqrt(n)


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _frac_canonical(x: Fraction) -> str:
    """Always num/den, for bit-exact serialization round trips."""
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str | int) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(s.strip())


# rational head only when a sign separates it from the sqrt coefficient
_QUAD_LEFT_RE = re.compile(
    r"^(?P<a>[+-]?\d+(?:/\d+)?(?=[+-]))?(?P<b>[+-]?(?:\d+(?:/\d+)?)?)$"
)


def parse_quad(s: str, field: FieldDescriptor | None = None) -> QuadElem:
    """Parse the CLI scalar grammar, e.g. "6+sqrt5", "-5+4sqrt5", "3/2", "0".

    When `field` is given, the parsed element is checked (and, for plain
    rationals, promoted) into it.
    """
    t = s.replace(" ", "")
    try:
        if "sqrt" not in t:
            a = Fraction(t)
            return QuadElem(field if field is not None else RATIONAL_FIELD, a, Fraction(0))
        left, dpart = t.split("sqrt", 1)
        d = int(dpart)
        m = _QUAD_LEFT_RE.match(left)
        if m is None:
            raise ValueError(left)
        a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
        braw = m.group("b")
        if braw in ("", "+"):
            b = Fraction(1)
        elif braw == "-":
            b = Fraction(-1)
        else:
            b = Fraction(braw)
    except (ValueError, ZeroDivisionError) as exc:
        raise QuadFieldError(f"cannot parse field element {s!r}") from exc
    elem = QuadElem(FieldDescriptor(d), a, b)
    if field is not None and elem.field != field:
        raise MixedFieldError(f"parsed {elem.field}, expected {field}")
    return elem


def decimal_bounds(x: QuadElem, digits: int = 12) -> tuple[Fraction, Fraction]:
    """A rational interval [lo, hi] containing the identity embedding of x,
    of width below 10^-digits."""
    if x.b == 0:
        return x.a, x.a
    scale = 10 ** (digits + 2)
    p, q = x.b.numerator, x.b.denominator
    big = x.field.d * p * p * scale * scale
    s = math.isqrt(big)
    if p >= 0:
        lo = Fraction(s, q * scale)
        hi = Fraction(s + 1, q * scale)
    else:
        lo = Fraction(-(s + 1), q * scale)
        hi = Fraction(-s, q * scale)
    return x.a + lo, x.a + hi


def fraction_decimal(x: Fraction, digits: int = 12) -> str:
    """Exact truncated decimal rendering of a rational (annotation only)."""
    sign = "-" if x < 0 else ""
    x = abs(x)
    whole = x.numerator // x.denominator
    rem = x.numerator - whole * x.denominator
    frac = rem * 10**digits // x.denominator
    return f"{sign}{whole}.{frac:0{digits}d}"


def decimal_str(x: QuadElem, digits: int = 12) -> str:
    """Truncated decimal rendering of the identity embedding (annotation only)."""
    lo, hi = decimal_bounds(x, digits + 2)
    return fraction_decimal((lo + hi) / 2, digits)
