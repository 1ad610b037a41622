"""Lattes maps: the x-coordinate pushdown of a curve endomorphism.

The map is derived by evaluating the endomorphism at the generic point
(x, y) of the function field through the ordinary chord-tangent formulas
and checking that the resulting x-coordinate is free of y.  Comparisons
against built-in golden formulas are exact, on canonical forms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .curves import EllipticCurve, Endomorphism
from .fields import Q_I, QuadraticExtension
from .polarize import PolarizationCertificate, REASON_PULLBACK_DEGREES
from .rfunc import INFINITY, Polynomial, RationalFunction, roots_in_field


@dataclass(frozen=True)
class LattesMap:
    curve: EllipticCurve
    a: int
    b: int
    map: RationalFunction
    degree: int

    def multiplier(self):
        return (self.a, self.b)

    def endomorphism(self):
        return Endomorphism(self.curve, (self.a, self.b))

    def __str__(self):
        return "lattes[%d%+d*i](x) = %s" % (self.a, self.b, self.map)


_BUILD_CACHE: dict = {}
_DIVISION_TABLES: dict = {}


def _unit_representative(a, b):
    """Canonical associate in the quarter plane a > 0, b >= 0.

    x-coordinates kill [-1], and the order-4 unit negates x, so
    lattes(u * alpha) is +-lattes(alpha) for every unit u.
    """
    for aa, bb, sign in ((a, b, 1), (-a, -b, 1), (b, -a, -1), (-b, a, -1)):
        if aa > 0 and bb >= 0:
            return aa, bb, sign
    raise ValueError("zero multiplier")


def _division_polys(curve, upto):
    """Stripped division polynomials f_0..f_upto: psi_n = f_n for odd n
    and psi_n = y * f_n for even n, with y^2 reduced to the cubic."""
    table = _DIVISION_TABLES.get(curve)
    if table is None:
        field = curve.field
        x = Polynomial.x(field)
        a, b = curve.a, curve.b
        f3 = 3 * x ** 4 + (6 * a) * x ** 2 + (12 * b) * x - a * a
        f4 = 4 * (x ** 6 + (5 * a) * x ** 4 + (20 * b) * x ** 3
                  - (5 * a * a) * x ** 2 - (4 * a * b) * x
                  - (8 * b * b + a * a * a))
        table = [Polynomial(field, []), Polynomial(field, [1]),
                 Polynomial(field, [2]), f3, f4]
        _DIVISION_TABLES[curve] = table
    field = curve.field
    cubic = Polynomial(field, [curve.b, curve.a, 0, 1])
    csq = cubic * cubic
    half = Fraction(1, 2)
    while len(table) <= upto:
        n = len(table)
        m = n // 2
        if n % 2 == 1:
            if m % 2 == 0:
                table.append(csq * table[m + 2] * table[m] ** 3
                             - table[m - 1] * table[m + 1] ** 3)
            else:
                table.append(table[m + 2] * table[m] ** 3
                             - csq * table[m - 1] * table[m + 1] ** 3)
        else:
            table.append((table[m] * (table[m + 2] * table[m - 1] ** 2
                                      - table[m - 2] * table[m + 1] ** 2)) * half)
    return table


def _multiple_of_generic_point(curve, n):
    """Coordinates of [n](x, y) in the split form (X, y*R) with X, R
    rational functions of x alone."""
    if n == 0:
        return None
    sign = 1 if n > 0 else -1
    n = abs(n)
    field = curve.field
    if n == 1:
        X = RationalFunction.x(field)
        R = RationalFunction.constant(field, 1)
        return (X, R if sign > 0 else -R)
    f = _division_polys(curve, 2 * n)
    cubic = Polynomial(field, [curve.b, curve.a, 0, 1])
    x = Polynomial.x(field)
    if n % 2 == 1:
        X = RationalFunction(x * f[n] ** 2 - cubic * f[n - 1] * f[n + 1], f[n] ** 2)
        R = RationalFunction(f[2 * n], 2 * f[n] ** 4)
    else:
        X = RationalFunction(x * cubic * f[n] ** 2 - f[n - 1] * f[n + 1],
                             cubic * f[n] ** 2)
        R = RationalFunction(f[2 * n], 2 * cubic ** 2 * f[n] ** 4)
    return (X, R if sign > 0 else -R)


def _split_add(p1, p2, a_coeff, cubic_rf):
    """Chord-tangent addition on points written as (X, y*R); the shape is
    preserved because y^2 equals the cubic."""
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, r1 = p1
    x2, r2 = p2
    if x1 == x2:
        if r1 == -r2:
            return None
        s = (3 * x1 * x1 + a_coeff) / ((2 * r1) * cubic_rf)
    else:
        s = (r2 - r1) / (x2 - x1)
    x3 = cubic_rf * s * s - x1 - x2
    r3 = s * (x1 - x3) - r1
    return (x3, r3)


def _pushdown(curve, a, b) -> RationalFunction:
    field = curve.field
    cubic_rf = RationalFunction(Polynomial(field, [curve.b, curve.a, 0, 1]))
    pa = _multiple_of_generic_point(curve, a)
    if b:
        u = curve.cm_unit
        if u is None:
            raise ValueError("curve has no order-4 unit, so b must be 0")
        pb = _multiple_of_generic_point(curve, b)
        pb = (-pb[0], u * pb[1])  # the order-4 unit sends (x, y) to (-x, u*y)
    else:
        pb = None
    if pa is None and pb is None:
        raise ValueError("zero multiplier")
    if pa is None or pb is None:
        return (pa or pb)[0]
    # final chord: the two x-coordinates are distinct as functions for any
    # nonzero a and b, and only x3 is needed
    x1, r1 = pa
    x2, r2 = pb
    s = (r2 - r1) / (x2 - x1)
    return cubic_rf * s * s - x1 - x2


def _gaussian_prime_split(a, b):
    """A factorization (pi, rho) of a + b*i into strictly smaller pieces,
    or None when the multiplier is a unit or a Gaussian prime."""
    n = a * a + b * b
    if n <= 1:
        return None
    norm_factors = _prime_factors(n)
    if len(norm_factors) == 1:
        return None  # prime norm, hence a Gaussian prime
    q = norm_factors[0]
    if q % 4 == 3:
        # inert prime: q divides both parts
        if len(norm_factors) == 2 and a % q == 0 and b % q == 0 \
                and (a // q) ** 2 + (b // q) ** 2 == 1:
            return None  # unit times an inert prime is itself prime
        return ((q, 0), (a // q, b // q))
    from .fields import gaussian_exact_div, two_squares
    for s, t in two_squares(q):
        if s * s + t * t != q or (s, t) == (0, 0):
            continue
        for pi in ((s, t), (s, -t)):
            if pi[0] == 0 and pi[1] == 0:
                continue
            rho = gaussian_exact_div((a, b), pi)
            if rho is not None:
                return (pi, rho)
    raise ArithmeticError("failed to split %d%+d*i" % (a, b))


def _prime_factors(n):
    out = []
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _build_representative(curve, ra, rb) -> RationalFunction:
    key = (curve, ra, rb)
    cached = _BUILD_CACHE.get(key)
    if cached is not None:
        return cached
    split = _gaussian_prime_split(ra, rb)
    if split is None:
        rf = _pushdown(curve, ra, rb)
    else:
        # build composite multipliers through their factors: the x-map of a
        # product is the composition of the factors' x-maps
        (pa, pb), (qa, qb) = split
        left = build_lattes(Endomorphism(curve, (pa, pb))).map
        right = build_lattes(Endomorphism(curve, (qa, qb))).map
        rf = left.compose(right)
    _BUILD_CACHE[key] = rf
    return rf


def build_lattes(endo: Endomorphism) -> LattesMap:
    """Symbolic x-map of the endomorphism, in canonical form; its degree
    equals the norm of the multiplier."""
    curve, a, b = endo.curve, endo.a, endo.b
    ra, rb, sign = _unit_representative(a, b)
    base = _build_representative(curve, ra, rb)
    rf = base if sign == 1 else -base
    deg = rf.degree()
    norm = a * a + b * b
    if deg != norm:
        raise ArithmeticError(
            "pushdown degree %d does not match the multiplier norm %d" % (deg, norm))
    return LattesMap(curve, a, b, rf, deg)


def verify_semiconjugacy(lm: LattesMap, samples: int = 50, seed: int = 1729) -> bool:
    """Exact check map(x(P)) = x(f(P)) at random affine points, sampled over
    the base field with y lifted to a quadratic extension where needed;
    kernel points must map to infinity."""
    curve = lm.curve
    field = curve.field
    endo = Endomorphism(curve, (lm.a, lm.b))
    rng = random.Random(seed)
    checked = 0
    while checked < samples:
        coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 3))
                  for _ in range(field.degree)]
        if not any(coeffs):
            continue
        x0 = field(coeffs)
        point = curve.lift_x(x0)
        image = endo(point)
        lhs = lm.map.evaluate_projective(x0)
        if image.is_infinity():
            if lhs is not INFINITY:
                return False
        else:
            if lhs is INFINITY:
                return False
            rhs = image.x
            target = getattr(rhs, "field", field)
            if not (target(lhs) == rhs if target != field else lhs == rhs):
                return False
        checked += 1
    return True


def pullback_degree(lm: LattesMap) -> int:
    """Multiplicity d in map^*(infinity-class) ~ d * (infinity-class)."""
    return lm.degree


def product_pullback_check(lm1, lm2) -> PolarizationCertificate:
    """Certificate for the product map on P^1 x P^1 against the divisor
    {inf} x P^1 + P^1 x {inf}; requires both factors of equal degree."""
    d1 = lm1.degree if isinstance(lm1, LattesMap) else lm1.degree()
    d2 = lm2.degree if isinstance(lm2, LattesMap) else lm2.degree()
    if d1 != d2:
        raise ValueError("unequal degrees %d and %d: the product is not "
                         "polarized by the split divisor with a single weight"
                         % (d1, d2))
    diagnostics = {"degrees": [d1, d2]}
    if d1 == 1:
        diagnostics["note"] = ("weight 1: an automorphism-like pair, not a "
                               "polarization in the strict sense")
    return PolarizationCertificate(True, d1, REASON_PULLBACK_DEGREES, diagnostics)


def kernel_x_coordinates(lm: LattesMap):
    """Roots of the map's denominator: the x-coordinates of the nonzero
    kernel points.  Returns (coordinates, field_they_live_in)."""
    kpoly = lm.map.den.radical()
    field = lm.curve.field
    if kpoly.degree() == 0:
        return [], field
    roots, residual = roots_in_field(kpoly)
    if residual.degree() == 0:
        return roots, field
    if residual.degree() != 2:
        raise ValueError("denominator has an irreducible factor of degree %d; "
                         "only quadratic factors are supported" % residual.degree())
    b1, c1 = residual.coeffs[1], residual.coeffs[0]
    ext = QuadraticExtension(field, (b1 * b1 - 4 * c1) * Fraction(1, 4))
    t = ext.generator()
    half_b = ext(b1) * Fraction(1, 2)
    coords = [ext(r) for r in roots] + [t - half_b, -t - half_b]
    return coords, ext


# golden formulas for the multipliers 2 + i and 2 - i on y^2 = x^3 + x
def golden_map(field, a, b) -> RationalFunction:
    if field != Q_I:
        raise ValueError("golden formulas are stated over Qi")
    i = field.generator()
    x = Polynomial.x(field)
    if (a, b) == (2, 1):
        num = (3 - 4 * i) * x * (x * x + (1 - 2 * i)) ** 2
        den = (5 * x * x + (1 + 2 * i)) ** 2
    elif (a, b) == (2, -1):
        num = (3 + 4 * i) * x * (x * x + (1 + 2 * i)) ** 2
        den = (5 * x * x + (1 - 2 * i)) ** 2
    else:
        raise ValueError("no golden formula for multiplier %d%+d*i" % (a, b))
    return RationalFunction(num, den)


def default_curve() -> EllipticCurve:
    """The built-in CM curve y^2 = x^3 + x over Qi."""
    return EllipticCurve(Q_I, 1, 0)
