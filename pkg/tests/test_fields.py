import random
from fractions import Fraction

import pytest

from cmlattes.fields import (
    Q,
    Q_I,
    Q_ZETA5,
    NumberFieldSpec,
    QuadraticExtension,
    field_from_spec,
    format_element,
    gaussian_gcd,
    is_rational_integer,
    is_root_of_unity,
    parse_element,
    rational_sqrt,
    root_of_unity_orders,
)

SEED = 20260810


def random_element(field, rng, span=9):
    return field([Fraction(rng.randint(-span, span), rng.randint(1, 4))
                  for _ in range(field.degree)])


@pytest.mark.parametrize("field", [Q, Q_I, Q_ZETA5], ids=lambda f: f.name)
def test_field_axioms_on_random_samples(field):
    rng = random.Random(SEED)
    one = field.one()
    for _ in range(100):
        a = random_element(field, rng)
        b = random_element(field, rng)
        c = random_element(field, rng)
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        if not a.is_zero():
            assert a * a.inverse() == one


@pytest.mark.parametrize("field", [Q, Q_I, Q_ZETA5], ids=lambda f: f.name)
def test_conjugation_is_an_involutive_ring_homomorphism(field):
    rng = random.Random(SEED + 1)
    for _ in range(50):
        a = random_element(field, rng)
        b = random_element(field, rng)
        assert a.conjugate().conjugate() == a
        assert (a * b).conjugate() == a.conjugate() * b.conjugate()
        assert (a + b).conjugate() == a.conjugate() + b.conjugate()


def test_defining_relation_in_qi():
    i = Q_I.generator()
    assert i * i == Q_I(-1)


def test_gaussian_norm_of_two_plus_i_is_five():
    a = Q_I("2+1*w")
    assert a * a.conjugate() == Q_I(5)


def test_cyclotomic_product_reduces_to_power_basis():
    # (1 + z)(1 + z^-1) with z a fifth root of unity; the independent
    # oracle expands and reduces symbolically
    sympy = pytest.importorskip("sympy")
    z = sympy.symbols("z")
    modulus = sympy.Poly(z**4 + z**3 + z**2 + z + 1, z)
    prod = sympy.Poly(sympy.expand((1 + z) * (1 + z**4)), z)
    reduced = prod.rem(modulus)
    expected = [Fraction(int(c)) for c in reversed(reduced.all_coeffs())]
    expected += [Fraction(0)] * (4 - len(expected))

    zeta = Q_ZETA5.generator()
    result = (1 + zeta) * (1 + zeta**-1)
    assert list(result.coeffs) == expected
    # frozen value: 2 + z + z^4 on the power basis
    assert list(result.coeffs) == [Fraction(1), Fraction(0), Fraction(-1), Fraction(-1)]
    assert is_rational_integer(result) is None


def test_conjugate_examples():
    assert Q_I.generator().conjugate() == -Q_I.generator()
    assert Q_I("2+1*w").conjugate() == Q_I("2-1*w")
    z = Q_ZETA5("4+3*w+12*w^2")
    zbar = z.conjugate()
    # substituting w -> w^4 and reducing gives 1 - 3w - 3w^2 + 9w^3
    assert zbar == Q_ZETA5("1-3*w-3*w^2+9*w^3")
    assert is_rational_integer(z * zbar) == 121


def test_is_rational_integer():
    assert is_rational_integer(Q_ZETA5(5)) == 5
    assert is_rational_integer(Q_I("2+1*w")) is None
    assert is_rational_integer(Q_I(Fraction(1, 2))) is None
    assert is_rational_integer(Q(-7)) == -7


def test_root_of_unity_examples():
    u = Q_I("1+1*w") / Q_I("1-1*w")
    assert u == Q_I.generator()
    assert is_root_of_unity(u) == 4
    assert is_root_of_unity(Q_I("2+1*w") / Q_I("2-1*w")) is None
    assert is_root_of_unity(Q_I(1)) == 1
    assert is_root_of_unity(Q_I(-1)) == 2
    assert is_root_of_unity(Q_ZETA5.generator()) == 5
    with pytest.raises(ValueError):
        is_root_of_unity(Q_I(0))


def test_root_of_unity_order_is_minimal():
    # every returned order n satisfies u^n = 1 and u^m != 1 for m < n
    candidates = [Q_I.generator(), Q_I(-1), Q_ZETA5.generator(),
                  -Q_ZETA5.generator()]
    for u in candidates:
        n = is_root_of_unity(u)
        assert n is not None
        one = u.field.one()
        assert u ** n == one
        for m in range(1, n):
            assert u ** m != one


def test_candidate_order_set_matches_totient_bound():
    assert root_of_unity_orders(2) == [1, 2, 3, 4, 6]
    assert root_of_unity_orders(4) == [1, 2, 3, 4, 5, 6, 8, 10, 12]


def test_inversion_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        Q_I(0).inverse()
    with pytest.raises(ZeroDivisionError):
        Q_ZETA5(1) / Q_ZETA5(0)


def test_mixed_field_operands_raise():
    with pytest.raises(ValueError):
        Q_I.generator() + Q_ZETA5.generator()
    with pytest.raises(ValueError):
        Q_I.generator() * Q_ZETA5(2)


def test_literal_round_trip():
    rng = random.Random(SEED + 2)
    for field in (Q_I, Q_ZETA5):
        for _ in range(25):
            a = random_element(field, rng)
            assert parse_element(field, format_element(a)) == a
    assert parse_element(Q_I, "2+1*w") == Q_I([2, 1])
    assert parse_element(Q_ZETA5, "4+3*w+12*w^2") == Q_ZETA5([4, 3, 12, 0])
    assert parse_element(Q_I, "-w") == -Q_I.generator()
    assert parse_element(Q_I, "3/2") == Q_I(Fraction(3, 2))


def test_malformed_literals_raise():
    for bad in ("", "2++w", "w^", "2*q", "1/0", "*w"):
        with pytest.raises(ValueError):
            parse_element(Q_I, bad)


def test_inline_field_spec():
    f = field_from_spec({"modulus": [1, 0, 1]})
    assert f.degree == 2
    assert (f.generator() ** 2) == f(-1)
    with pytest.raises(ValueError):
        field_from_spec("Qj")
    with pytest.raises(ValueError):
        field_from_spec({"modulus": [-1, 0, 1]})  # x^2 - 1 has rational roots


def test_conjugation_must_be_involutive():
    with pytest.raises(ValueError):
        NumberFieldSpec([1, 1, 1, 1, 1], conjugation=[0, 0, 1])  # w -> w^2


def test_sqrt_decisions():
    assert Q.sqrt(Fraction(9, 4)) == Q(Fraction(3, 2))
    assert Q.sqrt(Q(2)) is None
    assert Q_I.sqrt(Q_I(-1)) in (Q_I.generator(), -Q_I.generator())
    assert Q_I.sqrt(Q_I("0+2*w")) is not None  # sqrt(2i) = 1+i
    s = Q_I.sqrt(Q_I("0+2*w"))
    assert s * s == Q_I("0+2*w")
    assert Q_I.sqrt(Q_I(2)) is None
    with pytest.raises(NotImplementedError):
        Q_ZETA5.sqrt(Q_ZETA5(4))


def test_quadratic_extension_arithmetic():
    tau = Q_I("-1/5-2/5*w")
    ext = QuadraticExtension(Q_I, tau)
    t = ext.generator()
    assert t * t == ext(tau)
    a = ext(Q_I("1+1*w")) + t
    assert a * a.inverse() == ext.one()
    # extending by a square is rejected
    with pytest.raises(ValueError):
        QuadraticExtension(Q_I, Q_I(4))


def test_rational_sqrt():
    assert rational_sqrt(Fraction(49, 9)) == Fraction(7, 3)
    assert rational_sqrt(2) is None
    assert rational_sqrt(-4) is None


def test_gaussian_gcd():
    g = gaussian_gcd((5, 0), (2, 1))
    assert g[0] ** 2 + g[1] ** 2 == 5  # 2+i divides 5
    assert gaussian_gcd((4, 0), (6, 0))[0] ** 2 + gaussian_gcd((4, 0), (6, 0))[1] ** 2 == 4
