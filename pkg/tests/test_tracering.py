import os
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypcert.quadfield import QSQRT5, QuadElem, quad
from hypcert.tracering import (
    FactorizationError,
    IdealKind,
    InvertedPrime,
    PrimeIdealFactor,
    TraceRingBound,
    factor_principal_ideal,
    factorize,
    is_T_smooth,
    is_prime,
    legendre,
    pigeonhole_groups,
    smooth_targets,
    splitting_kind,
    sqrt_mod,
    subring_lattice,
    trace_ring_bound_quadratic,
    trace_ring_bound_rational,
)

EXHAUSTIVE_BOUND = 10**6 if os.environ.get("HYPCERT_EXHAUSTIVE") else 10**5


def _spf_sieve(limit):
    spf = list(range(limit + 1))
    for p in range(2, int(limit**0.5) + 1):
        if spf[p] == p:
            for m in range(p * p, limit + 1, p):
                if spf[m] == m:
                    spf[m] = p
    return spf


class TestFactorize:
    def test_examples(self):
        assert factorize(31).factors == ((31, 1),)
        assert factorize(1).factors == ()
        assert factorize(2**40).factors == ((2, 40),)

    def test_rejects_nonpositive(self):
        with pytest.raises(FactorizationError):
            factorize(0)

    def test_exhaustive_reconstruction(self):
        spf = _spf_sieve(EXHAUSTIVE_BOUND)
        for n in range(1, EXHAUSTIVE_BOUND + 1):
            fact = factorize(n)
            prod = 1
            m = n
            expected = {}
            while m > 1:
                p = spf[m]
                expected[p] = expected.get(p, 0) + 1
                m //= p
            assert fact.factors == tuple(sorted(expected.items()))
            for p, e in fact.factors:
                prod *= p**e
            assert prod == n

    def test_random_64bit(self):
        rng = random.Random(99)
        for _ in range(1000):
            n = rng.getrandbits(64) | 1
            fact = factorize(n)
            prod = 1
            for p, e in fact.factors:
                assert is_prime(p)
                prod *= p**e
            assert prod == n

    def test_semiprime_beyond_trial_division(self):
        p, q = 1_000_003, 1_000_033
        assert factorize(p * q).factors == ((p, 1), (q, 1))


class TestPrimality:
    def test_small(self):
        assert is_prime(2) and is_prime(31) and not is_prime(1) and not is_prime(561)

    def test_carmichael(self):
        assert not is_prime(341550071728321)  # strong pseudoprime to few bases

    def test_beyond_certification_fails_loudly(self):
        # a titanic probable prime: 2^127 - 1 (Mersenne prime, above the bound)
        with pytest.raises(FactorizationError):
            is_prime(2**127 - 1)


class TestSmoothness:
    def test_strict_less_than(self):
        assert is_T_smooth(31, 32)
        assert not is_T_smooth(31, 31)

    def test_one_is_vacuously_smooth(self):
        assert is_T_smooth(1, 2)

    def test_power_of_two(self):
        assert is_T_smooth(2**40, 3)

    def test_brute_force_agreement(self):
        spf = _spf_sieve(10**5)
        for T in (2, 3, 5, 10, 100):
            for n in range(1, 10**5 + 1):
                m = n
                smooth = True
                while m > 1:
                    if spf[m] >= T:
                        smooth = False
                        break
                    m //= spf[m]
                assert is_T_smooth(n, T) == smooth, (n, T)

    def test_targets(self):
        assert smooth_targets(2, 3) == [2, 4, 8]
        assert smooth_targets(3, 2) == [3, 9]
        assert smooth_targets(5, 1) == [5]
        with pytest.raises(ValueError):
            smooth_targets(6, 2)


class TestRationalBound:
    def test_examples(self):
        assert trace_ring_bound_rational(31).describe() == "Z[1/31]"
        assert trace_ring_bound_rational(2**40).describe() == "Z[1/2]"
        assert trace_ring_bound_rational(1).describe() == "Z"

    def test_radical_only(self):
        assert trace_ring_bound_rational(8) == trace_ring_bound_rational(2)

    def test_serialization(self):
        bound = trace_ring_bound_rational(30)
        assert TraceRingBound.from_obj(bound.to_obj()) == bound


class TestSplitting:
    def test_kinds(self):
        kind, branch = splitting_kind(5, 31)
        assert kind is IdealKind.SPLIT and branch in (6, 25)
        assert splitting_kind(5, 5) == (IdealKind.RAMIFIED, None)
        assert splitting_kind(5, 2) == (IdealKind.INERT, None)
        assert splitting_kind(5, 3) == (IdealKind.INERT, None)

    def test_sqrt_mod(self):
        for p in (11, 19, 29, 31, 41):
            if legendre(5, p) == 1:
                r = sqrt_mod(5, p)
                assert r * r % p == 5 % p


class TestPrincipalIdeal:
    def test_split_example(self):
        (f,) = factor_principal_ideal(quad(6, 1))
        assert (f.p, f.kind, f.exponent) == (31, IdealKind.SPLIT, 1)
        assert f.branch == 25  # 6 + 25 = 0 mod 31 picks the dividing branch
        assert pow(f.branch, 2, 31) == 5

    def test_ramified(self):
        (f,) = factor_principal_ideal(quad(0, 1))
        assert (f.p, f.kind, f.branch, f.exponent) == (5, IdealKind.RAMIFIED, None, 1)

    def test_inert(self):
        (f,) = factor_principal_ideal(quad(2, 0))
        assert (f.p, f.kind, f.exponent) == (2, IdealKind.INERT, 1)

    def test_rational_prime_in_split_position(self):
        # 31 = P * Pbar: both branches, exponent 1 each
        fs = factor_principal_ideal(quad(31, 0))
        assert len(fs) == 2
        assert {f.branch for f in fs} == {6, 25}
        assert all(f.exponent == 1 and f.kind is IdealKind.SPLIT for f in fs)

    def test_half_integer_element(self):
        phi = quad(F(1, 2), F(1, 2))  # golden ratio, a unit
        assert factor_principal_ideal(phi) == []

    def test_unit_times_prime(self):
        fs = factor_principal_ideal(quad(6, 1) * quad(F(1, 2), F(1, 2)))
        assert [(f.p, f.exponent) for f in fs] == [(31, 1)]

    def test_rejects_nonintegral(self):
        with pytest.raises(FactorizationError):
            factor_principal_ideal(quad(F(1, 3), 0))

    def test_rejects_zero(self):
        with pytest.raises(FactorizationError):
            factor_principal_ideal(quad(0, 0))

    @settings(max_examples=300, deadline=None)
    @given(
        st.integers(-400, 400),
        st.integers(-400, 400),
        st.integers(0, 3),
    )
    def test_norm_product_invariant(self, p, q, unit_pow):
        if (p - q) % 2 != 0 or (p == 0 and q == 0):
            return
        rho = QuadElem(QSQRT5, F(p, 2), F(q, 2)) * (quad(F(1, 2), F(1, 2)) ** unit_pow)
        factors = factor_principal_ideal(rho)
        prod = 1
        for f in factors:
            prod *= f.residue_norm() ** f.exponent
        assert prod == abs(rho.norm())


class TestSubringLattice:
    def test_z_one_over_30(self):
        rings = subring_lattice(trace_ring_bound_rational(30))
        assert len(rings) == 8
        assert len({r.describe() for r in rings}) == 8

    def test_z_alone(self):
        assert subring_lattice(trace_ring_bound_rational(1)) == [
            trace_ring_bound_rational(1)
        ]

    def test_quadratic_single_prime(self):
        rings = subring_lattice(trace_ring_bound_quadratic(quad(6, 1)))
        assert len(rings) == 2

    @given(st.sets(st.sampled_from([2, 3, 5, 7, 11, 13]), max_size=5))
    def test_power_of_two_count(self, primes):
        bound = TraceRingBound(
            trace_ring_bound_rational(1).field,
            tuple(InvertedPrime(p) for p in primes),
        )
        assert len(subring_lattice(bound)) == 2 ** len(primes)


class _Cert:
    def __init__(self, k, key, bound):
        self.k = k
        self.ambient_group_key = key
        self.trace_ring_bound = bound


class TestPigeonhole:
    def test_single_class_family(self):
        certs = [
            _Cert(k, "Q|3|-1,1,1,1", trace_ring_bound_rational(2**k))
            for k in range(1, 41)
        ]
        part = pigeonhole_groups(certs)
        assert part.sizes() == {"Z[1/2]": 40}
        assert part.largest() == ("Z[1/2]", 40)

    def test_empty(self):
        assert pigeonhole_groups([]).classes == ()

    def test_mixed_targets(self):
        certs = [
            _Cert(1, "key", trace_ring_bound_rational(6)),
            _Cert(2, "key", trace_ring_bound_rational(12)),
            _Cert(3, "key", trace_ring_bound_rational(5)),
        ]
        part = pigeonhole_groups(certs)
        assert part.sizes() == {"Z[1/2,1/3]": 2, "Z[1/5]": 1}

    def test_partition_properties(self):
        rng = random.Random(5)
        certs = [
            _Cert(k, "key", trace_ring_bound_rational(rng.randint(1, 1000)))
            for k in range(1, 101)
        ]
        part = pigeonhole_groups(certs)
        seen = [k for _, ks in part.classes for k in ks]
        assert sorted(seen) == list(range(1, 101))

    def test_mixed_ambient_rejected(self):
        certs = [
            _Cert(1, "key-a", trace_ring_bound_rational(2)),
            _Cert(2, "key-b", trace_ring_bound_rational(2)),
        ]
        with pytest.raises(ValueError):
            pigeonhole_groups(certs)
