import math
import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypcert.quadfield import (
    ExponentCapError,
    FieldDescriptor,
    IntegralityClass,
    MixedFieldError,
    QSQRT5,
    QuadElem,
    QuadFieldError,
    RATIONAL_FIELD,
    decimal_bounds,
    integer_sqrt_floor,
    parse_quad,
    quad,
    rational,
)

mpmath.mp.dps = 60


fractions_st = st.fractions(
    min_value=-10**6, max_value=10**6, max_denominator=10**4
)


def elems(d=5):
    field = FieldDescriptor(d)
    return st.builds(lambda a, b: QuadElem(field, a, b), fractions_st, fractions_st)


def ok_elems():
    """Elements of O_K for d = 5: (p + q sqrt5)/2 with p = q mod 2."""

    def build(p, q):
        return QuadElem(QSQRT5, F(p, 2), F(q, 2))

    pairs = st.tuples(
        st.integers(-10**4, 10**4), st.integers(-10**4, 10**4)
    ).filter(lambda t: (t[0] - t[1]) % 2 == 0)
    return pairs.map(lambda t: build(*t))


class TestArithmetic:
    def test_product(self):
        assert quad(6, 1) * quad(6, 1) == quad(41, 12)

    def test_additive_inverse(self):
        assert not (quad(6, 1) + quad(-6, -1))

    def test_cubic_coordinate(self):
        assert quad(41, 12) * quad(6, 1) == quad(306, 113)

    def test_division_roundtrip(self):
        x, y = quad(41, 12), quad(6, 1)
        assert (x / y) * y == x

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            quad(1, 1) / quad(0, 0)

    def test_mixed_fields_rejected(self):
        with pytest.raises(MixedFieldError):
            quad(1, 1, d=5) + quad(1, 1, d=2)

    def test_rational_field_forces_b_zero(self):
        with pytest.raises(QuadFieldError):
            QuadElem(RATIONAL_FIELD, F(1), F(1))

    @settings(max_examples=200)
    @given(elems(), elems())
    def test_shadow_float_agreement(self, x, y):
        s5 = mpmath.sqrt(5)
        fx = mpmath.mpf(x.a.numerator) / x.a.denominator + s5 * x.b.numerator / x.b.denominator
        fy = mpmath.mpf(y.a.numerator) / y.a.denominator + s5 * y.b.numerator / y.b.denominator
        z = x * y
        fz = mpmath.mpf(z.a.numerator) / z.a.denominator + s5 * z.b.numerator / z.b.denominator
        assert abs(fz - fx * fy) <= 1e-30 * (1 + abs(fx * fy))


def test_shadow_float_bulk():
    # 10^4 random pairs against high-precision floating evaluation
    rng = random.Random(7)
    s5 = mpmath.sqrt(5)

    def emb(e):
        return mpmath.mpf(e.a.numerator) / e.a.denominator + s5 * mpmath.mpf(
            e.b.numerator
        ) / e.b.denominator

    for _ in range(10**4):
        x = quad(F(rng.randint(-999, 999), rng.randint(1, 99)),
                 F(rng.randint(-999, 999), rng.randint(1, 99)))
        y = quad(F(rng.randint(-999, 999), rng.randint(1, 99)),
                 F(rng.randint(-999, 999), rng.randint(1, 99)))
        op = rng.choice(["add", "sub", "mul", "div"])
        if op == "div" and not y:
            continue
        z = {"add": x + y, "sub": x - y, "mul": x * y, "div": (x / y) if y else None}[op]
        ref = {"add": emb(x) + emb(y), "sub": emb(x) - emb(y),
               "mul": emb(x) * emb(y), "div": emb(x) / emb(y) if y else None}[op]
        assert abs(emb(z) - ref) <= 1e-40 * (1 + abs(ref))


class TestConjugation:
    def test_example(self):
        assert quad(6, 1).conjugate() == quad(6, -1)

    def test_rational_fixed(self):
        assert rational(7).conjugate() == rational(7)

    def test_involution(self):
        x = quad(26, 10)
        assert x.conjugate().conjugate() == x

    @given(elems(), elems())
    def test_ring_homomorphism(self, x, y):
        assert (x * y).conjugate() == x.conjugate() * y.conjugate()
        assert (x + y).conjugate() == x.conjugate() + y.conjugate()


class TestNorm:
    def test_examples(self):
        assert quad(6, 1).norm() == 31
        assert quad(0, 1).norm() == -5
        assert quad(41, 12).norm() == 961 == 31 * 31

    @given(elems(), elems())
    def test_multiplicative(self, x, y):
        assert (x * y).norm() == x.norm() * y.norm()


class TestSign:
    def test_examples(self):
        assert quad(-5, 4).sign() == 1
        assert quad(26, 10).sign("conjugate") == 1
        assert quad(0, 0).sign() == 0

    def test_bad_embedding_name(self):
        with pytest.raises(QuadFieldError):
            quad(1, 1).sign("galois")

    @settings(max_examples=150)
    @given(st.integers(10**199, 10**200 - 1), st.sampled_from([2, 3, 5, 13]))
    def test_adversarial_near_zero(self, b, d):
        # a/b adjacent to sqrt(d) with ~200-digit numerators
        a = math.isqrt(d * b * b)
        below = QuadElem(FieldDescriptor(d), F(-a), F(b))
        above = QuadElem(FieldDescriptor(d), F(-(a + 1)), F(b))
        assert below.sign() == 1  # a = floor(b sqrt d) < b sqrt d
        assert above.sign() == -1
        assert below.conjugate().sign() == -1
        assert above.conjugate().sign() == -1

    def test_totally_positive(self):
        assert quad(26, 10).is_totally_positive()
        assert not quad(0, 1).is_totally_positive()
        assert quad(2, 0).is_totally_positive()


class TestIntegerSqrtFloor:
    def test_examples(self):
        assert integer_sqrt_floor(0) == 0
        assert integer_sqrt_floor(500) == 22
        assert integer_sqrt_floor(5 * 15 * 15) == 33

    def test_negative_input_rejected(self):
        with pytest.raises(QuadFieldError):
            integer_sqrt_floor(-1)


class TestFloorCeil:
    def test_examples(self):
        assert quad(0, 2).floor() == 4
        assert quad(0, 15).floor() == 33
        assert rational(7).floor() == 7

    def test_negative_coefficient(self):
        assert quad(0, -1).floor() == -3  # -sqrt5 = -2.236...
        assert quad(0, -1).ceil() == -2

    @given(elems())
    def test_floor_brackets(self, x):
        m = x.floor()
        assert (x - m).sign() >= 0
        assert (x - (m + 1)).sign() < 0


class TestSqrtCeil:
    def test_spec_instances(self):
        # sigma(rho)/sqrt5 for rho = 6+sqrt5, i.e. (6 sqrt5 - 5)/5
        x1 = QuadElem(QSQRT5, F(-1), F(6, 5))
        assert x1.sqrt_ceil() == 2
        assert rational(4).sqrt_ceil() == 2
        # sigma(rho^2)/sqrt5 = -12 + (41/5) sqrt5 ~ 6.337
        x2 = QuadElem(QSQRT5, F(-12), F(41, 5))
        assert x2.sqrt_ceil() == 3

    def test_negative_rejected(self):
        with pytest.raises(QuadFieldError):
            quad(-1, 0).sqrt_ceil()

    @given(elems().filter(lambda e: e.sign() >= 0))
    def test_bracket_property(self, x):
        m = x.sqrt_ceil()
        assert (QuadElem(x.field, F(m * m), F(0)) - x).sign() >= 0
        if m > 0:
            assert (QuadElem(x.field, F((m - 1) ** 2), F(0)) - x).sign() < 0


class TestIntegrality:
    def test_examples(self):
        assert quad(F(1, 2), F(1, 2)).integrality() is IntegralityClass.O_K
        assert quad(6, 1).integrality() is IntegralityClass.Z_SQRT_D
        assert quad(0, F(1, 3)).integrality() is IntegralityClass.NONE
        assert quad(7, 0).integrality() is IntegralityClass.Z
        assert rational(F(1, 2)).integrality() is IntegralityClass.NONE

    def test_non_1_mod_4_has_no_half_integers(self):
        assert quad(F(1, 2), F(1, 2), d=2).integrality() is IntegralityClass.NONE

    @given(ok_elems(), ok_elems())
    def test_closure_under_multiplication(self, x, y):
        join = max(x.integrality().value, y.integrality().value)
        assert (x * y).integrality().value <= join


class TestPow:
    def test_examples(self):
        assert quad(6, 1) ** 2 == quad(41, 12)
        assert quad(6, 1) ** 5 == quad(19326, 8305)
        assert quad(6, 1) ** 0 == QSQRT5.one()

    def test_cap(self):
        with pytest.raises(ExponentCapError):
            quad(6, 1) ** 10_001

    def test_negative_rejected(self):
        with pytest.raises(QuadFieldError):
            quad(6, 1) ** -1


class TestSerialization:
    def test_shape(self):
        obj = quad(6, 1).to_obj()
        assert obj == {"d": 5, "a": "6/1", "b": "1/1"}
        assert QuadElem.from_obj(obj) == quad(6, 1)

    def test_rational_marker(self):
        obj = rational(F(3, 2)).to_obj()
        assert obj["d"] == "rational"
        assert QuadElem.from_obj(obj) == rational(F(3, 2))

    @given(elems())
    def test_bit_exact_roundtrip(self, x):
        assert QuadElem.from_obj(x.to_obj()) == x


class TestParse:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("6+sqrt5", quad(6, 1)),
            ("-5+4sqrt5", quad(-5, 4)),
            ("26+10sqrt5", quad(26, 10)),
            ("10sqrt5", quad(0, 10)),
            ("sqrt5", quad(0, 1)),
            ("-sqrt5", quad(0, -1)),
            ("3/2", rational(F(3, 2))),
            ("0", rational(0)),
            ("1/2+1/2sqrt5", quad(F(1, 2), F(1, 2))),
            ("6 - sqrt5", quad(6, -1)),
        ],
    )
    def test_grammar(self, text, expected):
        assert parse_quad(text) == expected

    def test_field_promotion(self):
        assert parse_quad("7", QSQRT5) == quad(7, 0)

    def test_field_mismatch(self):
        with pytest.raises(MixedFieldError):
            parse_quad("1+sqrt2", QSQRT5)

    @pytest.mark.parametrize("bad", ["", "sqrt", "1+", "x+sqrt5", "1+sqrt5+2"])
    def test_rejects_garbage(self, bad):
        with pytest.raises(QuadFieldError):
            parse_quad(bad)


class TestFieldDescriptor:
    def test_squarefree_required(self):
        with pytest.raises(QuadFieldError):
            FieldDescriptor(12)
        with pytest.raises(QuadFieldError):
            FieldDescriptor(1)

    def test_str(self):
        assert str(RATIONAL_FIELD) == "Q"
        assert str(QSQRT5) == "Q(sqrt5)"


def test_decimal_bounds_contain_value():
    x = quad(26, 10)
    lo, hi = decimal_bounds(x, 12)
    ref = mpmath.mpf(26) + 10 * mpmath.sqrt(5)
    assert mpmath.mpf(lo.numerator) / lo.denominator <= ref
    assert mpmath.mpf(hi.numerator) / hi.denominator >= ref
    assert hi - lo <= F(1, 10**12)
