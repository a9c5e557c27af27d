"""Integer factorization, T-smoothness, prime splitting in quadratic fields,
and the finitely-generated trace-ring upper bounds Z[1/N] and O_K[1/rho].

Factorization is trial division up to 10^6 followed by Brent-cycle Pollard
rho with a fixed seed schedule; primality is certified by deterministic
Miller-Rabin below its proven bound and fails loudly above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .quadfield import FieldDescriptor, IntegralityClass, QuadElem

TRIAL_DIVISION_BOUND = 10**6

# deterministic Miller-Rabin witness set, valid below this bound
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_CERTIFIED_BOUND = 3_317_044_064_679_887_385_961_981


class FactorizationError(RuntimeError):
    """Factor or primality certification failed; never silent."""


_small_primes_cache: list[int] | None = None


def _small_primes() -> list[int]:
    global _small_primes_cache
    if _small_primes_cache is None:
        limit = TRIAL_DIVISION_BOUND
        sieve = bytearray([1]) * (limit + 1)
        sieve[0] = sieve[1] = 0
        for p in range(2, math.isqrt(limit) + 1):
            if sieve[p]:
                start = p * p
                sieve[start :: p] = bytearray(len(range(start, limit + 1, p)))
        _small_primes_cache = [i for i, flag in enumerate(sieve) if flag]
    return _small_primes_cache


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin.  Raises beyond the certified bound when
    the bases cannot refute primality."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    if n >= _MR_CERTIFIED_BOUND:
        raise FactorizationError(f"cannot certify primality of {n}")
    return True


def _brent_rho(n: int) -> int:
    """Nontrivial factor of odd composite n, Brent cycle detection with a
    fixed parameter schedule for deterministic output."""
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            if r > 1 << 24:
                break  # next c
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise FactorizationError(f"Pollard rho exhausted its schedule on {n}")


@dataclass(frozen=True)
class Factorization:
    """Positive integer with its complete sorted prime factorization."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prod = 1
        for p, e in self.factors:
            prod *= p**e
        if prod != self.value:
            raise FactorizationError(
                f"factorization of {self.value} does not reconstruct it"
            )

    def radical(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factorize(n: int) -> Factorization:
    """Complete factorization; deterministic; loud failure past certification."""
    if n < 1:
        raise FactorizationError(f"need n >= 1, got {n}")
    remaining = n
    counts: dict[int, int] = {}
    for p in _small_primes():
        if p * p > remaining:
            break
        while remaining % p == 0:
            counts[p] = counts.get(p, 0) + 1
            remaining //= p
    stack = [remaining] if remaining > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        g = _brent_rho(m)
        stack.append(g)
        stack.append(m // g)
    return Factorization(n, tuple(sorted(counts.items())))


def is_T_smooth(n: int, T: int) -> bool:
    """True iff every prime factor of n is strictly less than T."""
    if n < 1:
        raise FactorizationError(f"need n >= 1, got {n}")
    if T <= 1:
        raise ValueError("T must exceed 1")
    remaining = n
    for p in _small_primes():
        if p >= T or p > remaining:
            break
        while remaining % p == 0:
            remaining //= p
    if remaining == 1:
        return True
    if T <= TRIAL_DIVISION_BOUND:
        # every factor left is >= min(T, sqrt cutoff) >= T
        return False
    return all(p < T for p, _ in factorize(remaining).factors)


def smooth_targets(p: int, kmax: int) -> list[int]:
    """The target sequence p^1, ..., p^kmax."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    return [p**k for k in range(1, kmax + 1)]


# ---------------------------------------------------------------------------
# prime splitting in Q(sqrt d)
# ---------------------------------------------------------------------------


class IdealKind(Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@dataclass(frozen=True)
class PrimeIdealFactor:
    """A prime of O_K above p with multiplicity.

    For split p, `branch` is the residue r (0 < r < p, r^2 = d mod p)
    identifying the ideal (p, sqrt(d) - r).
    """

    p: int
    kind: IdealKind
    branch: int | None
    exponent: int

    def residue_norm(self) -> int:
        return self.p * self.p if self.kind is IdealKind.INERT else self.p

    def to_obj(self) -> dict:
        return {
            "p": self.p,
            "kind": self.kind.value,
            "branch": self.branch,
            "exponent": self.exponent,
        }


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for odd prime p."""
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def sqrt_mod(a: int, p: int) -> int:
    """Tonelli-Shanks square root mod odd prime p; requires (a|p) = 1."""
    a %= p
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        r = r * b % p
    return r


def splitting_kind(d: int, p: int) -> tuple[IdealKind, int | None]:
    """How the rational prime p decomposes in Q(sqrt d); branch for split p."""
    disc = d if d % 4 == 1 else 4 * d
    if disc % p == 0:
        return IdealKind.RAMIFIED, None
    if p == 2:
        # d odd here (2 ramifies otherwise); d = 1 mod 8 splits, 5 mod 8 inert
        if d % 8 == 1:
            raise FactorizationError(
                "split prime 2 (d = 1 mod 8) has no residue branch; unsupported"
            )
        return IdealKind.INERT, None
    sym = legendre(d, p)
    if sym == 1:
        return IdealKind.SPLIT, sqrt_mod(d, p)
    return IdealKind.INERT, None


def _half_coordinates(x: QuadElem) -> tuple[int, int]:
    """(A, B) with x = (A + B sqrt d)/2; defined for integral x."""
    ta, tb = 2 * x.a, 2 * x.b
    if ta.denominator != 1 or tb.denominator != 1:
        raise FactorizationError("element is not integral")
    return ta.numerator, tb.numerator


def _divisible_by_rational_prime(x: QuadElem, p: int) -> bool:
    scaled = QuadElem(x.field, x.a / p, x.b / p)
    return scaled.integrality() is not IntegralityClass.NONE


def _branch_divides(x: QuadElem, p: int, r: int) -> bool:
    """Membership of integral x in the ideal (p, sqrt(d) - r), p odd split."""
    A, B = _half_coordinates(x)
    return (A + B * r) % p == 0


def factor_principal_ideal(rho: QuadElem) -> list[PrimeIdealFactor]:
    """Prime-ideal factorization of the principal ideal (rho) in O_K."""
    if rho.field.is_rational:
        raise FactorizationError("factor_principal_ideal needs a quadratic field")
    if rho.integrality() is IntegralityClass.NONE:
        raise FactorizationError(f"{rho} is not integral")
    if not rho:
        raise FactorizationError("zero generates no nontrivial ideal")
    d = rho.field.d
    norm = rho.norm()
    assert norm.denominator == 1
    n_abs = abs(norm.numerator)
    out: list[PrimeIdealFactor] = []
    if n_abs == 1:
        return out
    for p, e in factorize(n_abs).factors:
        kind, branch = splitting_kind(d, p)
        if kind is IdealKind.RAMIFIED:
            out.append(PrimeIdealFactor(p, kind, None, e))
        elif kind is IdealKind.INERT:
            if e % 2 != 0:
                raise FactorizationError(
                    f"odd norm valuation {e} at inert prime {p}"
                )
            out.append(PrimeIdealFactor(p, kind, None, e // 2))
        else:
            assert branch is not None
            # strip the rationally-divisible part: v_P = v_Pbar = m on it
            m = 0
            reduced = rho
            while _divisible_by_rational_prime(reduced, p):
                reduced = QuadElem(rho.field, reduced.a / p, reduced.b / p)
                m += 1
            leftover = e - 2 * m
            r, rbar = branch, p - branch
            if leftover == 0:
                if m:
                    out.append(PrimeIdealFactor(p, kind, min(r, rbar), m))
                    out.append(PrimeIdealFactor(p, kind, max(r, rbar), m))
                continue
            if _branch_divides(reduced, p, r):
                hit, miss = r, rbar
            elif _branch_divides(reduced, p, rbar):
                hit, miss = rbar, r
            else:
                raise FactorizationError(
                    f"neither branch above {p} divides {reduced}"
                )
            entries = [(hit, m + leftover)]
            if m:
                entries.append((miss, m))
            for b, exp in sorted(entries):
                out.append(PrimeIdealFactor(p, kind, b, exp))
    return sorted(out, key=lambda f: (f.p, f.branch if f.branch is not None else -1))


# ---------------------------------------------------------------------------
# trace-ring bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvertedPrime:
    """One inverted prime of a localization; kind/branch absent over Q."""

    p: int
    kind: IdealKind | None = None
    branch: int | None = None

    def to_obj(self) -> dict:
        return {
            "p": self.p,
            "kind": self.kind.value if self.kind else None,
            "branch": self.branch,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> InvertedPrime:
        kind = IdealKind(obj["kind"]) if obj.get("kind") else None
        return cls(int(obj["p"]), kind, obj.get("branch"))


@dataclass(frozen=True)
class TraceRingBound:
    """Z[1/p_1..1/p_r] or O_K localized at prime ideals; radical only
    (Z[1/p^e] = Z[1/p], so exponents carry no information here)."""

    field: FieldDescriptor
    inverted: tuple[InvertedPrime, ...]

    def __post_init__(self) -> None:
        entries = tuple(
            sorted(
                set(self.inverted),
                key=lambda q: (q.p, q.branch if q.branch is not None else -1),
            )
        )
        object.__setattr__(self, "inverted", entries)

    def describe(self) -> str:
        if self.field.is_rational:
            if not self.inverted:
                return "Z"
            inside = ",".join(f"1/{q.p}" for q in self.inverted)
            return f"Z[{inside}]"
        base = f"O_{self.field}"
        if not self.inverted:
            return base
        parts = []
        for q in self.inverted:
            if q.kind is IdealKind.SPLIT:
                parts.append(f"1/({q.p};{q.branch})")
            else:
                parts.append(f"1/({q.p};{q.kind.value})")
        return f"{base}[{','.join(parts)}]"

    def to_obj(self) -> dict:
        return {
            "field": self.field.to_obj(),
            "inverted": [q.to_obj() for q in self.inverted],
        }

    @classmethod
    def from_obj(cls, obj: dict) -> TraceRingBound:
        field = FieldDescriptor.from_obj(obj["field"])
        inverted = tuple(InvertedPrime.from_obj(q) for q in obj["inverted"])
        return cls(field, inverted)


def trace_ring_bound_rational(fw: int) -> TraceRingBound:
    """Z[1/fw] presented by its radical: Z[1/p_1, ..., 1/p_r]."""
    if fw < 1:
        raise FactorizationError(f"need fw >= 1, got {fw}")
    primes = factorize(fw).radical()
    return TraceRingBound(
        FieldDescriptor(None), tuple(InvertedPrime(p) for p in primes)
    )


def trace_ring_bound_quadratic(rho: QuadElem) -> TraceRingBound:
    """O_K[1/rho] presented by the prime ideals dividing (rho)."""
    factors = factor_principal_ideal(rho)
    return TraceRingBound(
        rho.field,
        tuple(InvertedPrime(f.p, f.kind, f.branch) for f in factors),
    )


def subring_lattice(bound: TraceRingBound) -> list[TraceRingBound]:
    """All 2^r localizations between the base ring and the bound: the finite
    lattice the pigeonhole argument runs over (subrings of Z[1/p_1..p_r]
    containing Z, resp. integrally closed subrings containing O_K)."""
    entries = bound.inverted
    out = []
    for mask in range(1 << len(entries)):
        subset = tuple(q for i, q in enumerate(entries) if mask >> i & 1)
        out.append(TraceRingBound(bound.field, subset))
    return out


@dataclass(frozen=True)
class PigeonholePartition:
    """Certificates grouped by their canonical trace-ring bound."""

    classes: tuple[tuple[str, tuple[int, ...]], ...]

    def sizes(self) -> dict[str, int]:
        return {key: len(ks) for key, ks in self.classes}

    def largest(self) -> tuple[str, int] | None:
        if not self.classes:
            return None
        key, ks = max(self.classes, key=lambda item: len(item[1]))
        return key, len(ks)


def pigeonhole_groups(certs: Sequence) -> PigeonholePartition:
    """Partition certificates by trace-ring bound; requires one ambient group.

    Accepts any objects exposing .k, .ambient_group_key and .trace_ring_bound.
    """
    if not certs:
        return PigeonholePartition(())
    keys = {c.ambient_group_key for c in certs}
    if len(keys) != 1:
        raise ValueError(f"mixed ambient group keys: {sorted(keys)}")
    groups: dict[str, list[int]] = {}
    for c in certs:
        groups.setdefault(c.trace_ring_bound.describe(), []).append(c.k)
    classes = tuple(
        (key, tuple(sorted(ks))) for key, ks in sorted(groups.items())
    )
    return PigeonholePartition(classes)
