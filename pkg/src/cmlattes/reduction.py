"""Reduction of the CM curve modulo split primes and empirical Frobenius
identification.

The Frobenius multiplier is found by exhaustive point-action matching, not
by normalization conventions: among the unit multiples and conjugates of a
norm-p Gaussian integer, the one that acts as (x, y) -> (x^p, y^p) is
selected.  Inert primes (supersingular reduction) and the ramified prime 2
are refused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .curves import EllipticCurve, Endomorphism
from .fields import Q_I, QuadraticExtension, two_squares, gaussian_gcd
from .polarize import cm_polarization_check
from .rfunc import Polynomial, RationalFunction
from .fields import is_root_of_unity


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


class PrimeFieldElement:
    __slots__ = ("field", "value")

    def __init__(self, field, value):
        self.field = field
        self.value = value % field.p

    def _coerce(self, other):
        if isinstance(other, PrimeFieldElement):
            if other.field == self.field:
                return other
            raise ValueError("mixed prime fields")
        if isinstance(other, int):
            return PrimeFieldElement(self.field, other)
        if isinstance(other, Fraction):
            return self.field(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return PrimeFieldElement(self.field, self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return PrimeFieldElement(self.field, self.value - other.value)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return PrimeFieldElement(self.field, self.value * other.value)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElement(self.field, -self.value)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("inversion of zero mod %d" % self.field.p)
        return PrimeFieldElement(self.field, pow(self.value, -1, self.field.p))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return PrimeFieldElement(self.field, pow(self.value, n, self.field.p))

    def is_zero(self):
        return self.value == 0

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.value == other.value

    def __hash__(self):
        return hash((self.field.p, self.value))

    def __str__(self):
        return str(self.value)

    __repr__ = __str__


class PrimeField:
    """F_p with canonical residue representatives."""

    degree = 1
    generator_symbol = "x"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError("%d is not prime" % p)
        self.p = p
        self.characteristic = p
        self.name = "F%d" % p
        self._key = ("primefield", p)
        self._sqrt_table = None

    def __call__(self, value):
        if isinstance(value, PrimeFieldElement):
            if value.field == self:
                return value
            raise ValueError("mixed prime fields")
        if isinstance(value, int):
            return PrimeFieldElement(self, value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(
                    "denominator %d is not invertible mod %d" % (value.denominator, self.p))
            return PrimeFieldElement(
                self, value.numerator * pow(value.denominator, -1, self.p))
        raise TypeError("cannot coerce %r into %s" % (value, self.name))

    def zero(self):
        return PrimeFieldElement(self, 0)

    def one(self):
        return PrimeFieldElement(self, 1)

    def elements(self):
        for v in range(self.p):
            yield PrimeFieldElement(self, v)

    def sqrt(self, element):
        element = self(element)
        if self._sqrt_table is None:
            table = {}
            for y in range(self.p - 1, -1, -1):
                table[y * y % self.p] = y  # smallest root wins
            self._sqrt_table = table
        y = self._sqrt_table.get(element.value)
        return None if y is None else PrimeFieldElement(self, y)

    def square_roots_of_minus_one(self):
        u = self.sqrt(self(-1))
        if u is None:
            return []
        return [u, -u]

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return self.name


def reduce_element(element, prime_field, i_image=None):
    """Image of a Q or Qi element mod p; i_image realizes the generator."""
    coeffs = element.coeffs
    out = prime_field(coeffs[0])
    if len(coeffs) > 1 and coeffs[1] != 0:
        if i_image is None:
            raise ValueError("reduction of an imaginary element needs a square "
                             "root of -1 mod p")
        out = out + prime_field(coeffs[1]) * i_image
    if any(c != 0 for c in coeffs[2:]):
        raise ValueError("only elements of degree <= 2 fields reduce here")
    return out


def reduce_curve(curve: EllipticCurve, p: int, i_choice: str = "low") -> EllipticCurve:
    """Good reduction of a CM curve at a split odd prime.

    p = 2 is refused as ramified; p = 3 mod 4 is refused as inert
    (supersingular, out of scope); p dividing the discriminant is bad
    reduction.  i_choice picks which square root of -1 realizes the CM
    action ("low" or "high").
    """
    if not is_prime(p):
        raise ValueError("%d is not prime" % p)
    if p == 2:
        raise ValueError("p = 2 is ramified; reduction is refused")
    if p % 4 == 3:
        raise ValueError("p = %d is inert (3 mod 4): supersingular case out of scope" % p)
    pf = PrimeField(p)
    roots = pf.square_roots_of_minus_one()
    u = min(roots, key=lambda e: e.value) if i_choice == "low" \
        else max(roots, key=lambda e: e.value)
    a = reduce_element(curve.a, pf, u)
    b = reduce_element(curve.b, pf, u)
    disc = 4 * a * a * a + 27 * b * b
    if disc.is_zero():
        raise ValueError("bad reduction at %d: the discriminant vanishes" % p)
    return EllipticCurve(pf, a, b, cm_unit=u if b.is_zero() else None)


def reduce_map(rf: RationalFunction, prime_field: PrimeField, i_image) -> RationalFunction:
    """Reduction of a map over Q(i) mod p: coefficients are cleared to
    Gaussian integers, the common Gaussian content is divided out, and the
    result is reduced coefficientwise."""
    lcm = 1
    for poly in (rf.num, rf.den):
        for c in poly.coeffs:
            for part in c.coeffs:
                lcm = lcm * part.denominator // math.gcd(lcm, part.denominator)
    pairs = []
    for poly in (rf.num, rf.den):
        row = []
        for c in poly.coeffs:
            c0 = int(c.coeffs[0] * lcm)
            c1 = int(c.coeffs[1] * lcm) if len(c.coeffs) > 1 else 0
            row.append((c0, c1))
        pairs.append(row)
    content = (0, 0)
    for row in pairs:
        for z in row:
            content = gaussian_gcd(content, z)
    from .fields import gaussian_exact_div
    num_pairs = [gaussian_exact_div(z, content) for z in pairs[0]]
    den_pairs = [gaussian_exact_div(z, content) for z in pairs[1]]
    p = prime_field.p

    def red(z):
        return prime_field(z[0]) + prime_field(z[1]) * i_image

    num = Polynomial(prime_field, [red(z) for z in num_pairs])
    den = Polynomial(prime_field, [red(z) for z in den_pairs])
    if den.is_zero():
        raise ValueError("the map has bad reduction mod %d" % p)
    return RationalFunction(num, den)


@dataclass
class FrobeniusData:
    p: int
    alpha: tuple                # Gaussian integer (a, b) with a^2 + b^2 = p
    trace: int
    point_count: int
    curve: EllipticCurve        # the reduced curve the data belongs to
    i_unit: object              # square root of -1 used for the CM action

    def alpha_element(self):
        return Q_I([self.alpha[0], self.alpha[1]])

    def to_jsonable(self):
        return {
            "p": self.p,
            "alpha": "%d%+d*w" % self.alpha,
            "trace": self.trace,
            "point_count": self.point_count,
            "i_unit": str(self.i_unit),
        }


def identify_frobenius(curve: EllipticCurve) -> FrobeniusData:
    """Match the p-power map against the unit multiples and conjugates of a
    norm-p multiplier by exhaustive point action.

    The p-power map fixes every rational point, so candidates are first
    filtered on E(F_p); if several survive (possible when the group is all
    2-torsion) the match is repeated on E(F_p^2) where the p-power map is
    no longer trivial.
    """
    pf = curve.field
    if not isinstance(pf, PrimeField):
        raise ValueError("identify_frobenius expects a reduced curve")
    p = pf.p
    if curve.cm_unit is None:
        raise ValueError("the reduced curve carries no CM action")
    points = curve.points()
    count = len(points)
    reps = [(a, b) for a, b in two_squares(p) if a > 0 and b > 0]
    if not reps:
        raise ValueError("%d is not a sum of two squares; not a split prime" % p)
    a0, b0 = reps[0]
    candidates = sorted({(a0, b0), (a0, -b0), (-a0, b0), (-a0, -b0),
                         (b0, a0), (b0, -a0), (-b0, a0), (-b0, -a0)})
    survivors = []
    for cand in candidates:
        endo = Endomorphism(curve, cand)
        if all(endo(pt) == pt for pt in points):
            survivors.append(cand)
    if len(survivors) > 1:
        survivors = _disambiguate_over_quadratic(curve, survivors)
    if len(survivors) != 1:
        raise ArithmeticError(
            "Frobenius matching found %d candidates at p = %d; this signals "
            "an implementation bug or a wrong square root of -1 (both were tried)"
            % (len(survivors), p))
    alpha = survivors[0]
    trace = 2 * alpha[0]
    if count != p + 1 - trace:
        raise ArithmeticError(
            "point count %d disagrees with p + 1 - trace = %d" % (count, p + 1 - trace))
    return FrobeniusData(p, alpha, trace, count, curve, curve.cm_unit)


def _disambiguate_over_quadratic(curve, survivors):
    pf = curve.field
    p = pf.p
    nonresidue = None
    for v in range(2, p):
        if pf.sqrt(pf(v)) is None:
            nonresidue = pf(v)
            break
    if nonresidue is None:
        raise ArithmeticError("no quadratic nonresidue mod %d" % p)
    ext = QuadraticExtension(pf, nonresidue)
    ecurve = curve.base_change(ext)
    pts = ecurve.points()
    out = []
    for cand in survivors:
        endo = Endomorphism(ecurve, cand)
        ok = True
        for pt in pts:
            if pt.is_infinity():
                continue
            frob_x = pt.x ** p
            frob_y = pt.y ** p
            image = endo(pt)
            if image.is_infinity() or not (image.x == frob_x and image.y == frob_y):
                ok = False
                break
        if ok:
            out.append(cand)
    return out


def verify_frobenius_verschiebung(data: FrobeniusData) -> bool:
    """On every rational point the Frobenius composed with its conjugate is
    multiplication by p, and both multipliers certify weight p."""
    curve = data.curve
    frob = Endomorphism(curve, data.alpha)
    versch = frob.conjugate()
    p = data.p
    for pt in curve.points():
        if not (frob(versch(pt)) == p * pt):
            return False
    alpha = data.alpha_element()
    cert_f = cm_polarization_check(alpha)
    cert_v = cm_polarization_check(alpha.conjugate())
    return cert_f.polarized and cert_f.weight == p \
        and cert_v.polarized and cert_v.weight == p


def s3_membership(data: FrobeniusData) -> bool:
    """True when no power of the Frobenius equals the same power of the
    Verschiebung, i.e. alpha/conj(alpha) is not a root of unity; this is
    the condition that makes the diagonal escape argument work."""
    alpha = data.alpha_element()
    ratio = alpha / alpha.conjugate()
    return is_root_of_unity(ratio) is None


def split_primes(bound: int, start: int = 5):
    """Split odd primes (1 mod 4) up to the bound, ascending."""
    for p in range(start, bound + 1):
        if p % 4 == 1 and is_prime(p):
            yield p
