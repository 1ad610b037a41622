"""Short Weierstrass elliptic curves over exact fields.

The chord-tangent group law is written once, on bare coordinate pairs, so
the same code evaluates endomorphisms on numeric points and on the generic
point of the function field (which is how the x-coordinate pushdown in
``lattes`` is derived).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .fields import QuadraticExtension
from .polarize import PolarizationCertificate, REASON_KERNEL_TWO_TORSION
from .rfunc import Polynomial, RationalFunction, roots_in_field


def _affine_add(p, q, a):
    """Chord-tangent addition on affine coordinate pairs; None is the
    point at infinity.  Coordinates may be field elements or curve
    functions; they only need ring operations, equality, and division."""
    if p is None:
        return q
    if q is None:
        return p
    x1, y1 = p
    x2, y2 = q
    if x1 == x2:
        if y1 == -y2:
            return None
        lam = (3 * x1 * x1 + a) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    y3 = lam * (x1 - x3) - y1
    return (x3, y3)


def _affine_neg(p):
    if p is None:
        return None
    return (p[0], -p[1])


def _affine_mul(n, p, a):
    if n < 0:
        return _affine_mul(-n, _affine_neg(p), a)
    result = None
    base = p
    while n:
        if n & 1:
            result = _affine_add(result, base, a)
        base = _affine_add(base, base, a)
        n >>= 1
    return result


class EllipticCurve:
    """y^2 = x^3 + a*x + b over an exact field with nonzero discriminant.

    cm_unit, when present, is a square root of -1 in the base field and
    equips the curve (which must then have b = 0) with the order-4
    automorphism (x, y) -> (-x, cm_unit * y).
    """

    def __init__(self, field, a, b, cm_unit=None):
        self.field = field
        self.a = field(a)
        self.b = field(b)
        disc = 4 * self.a ** 3 + 27 * self.b ** 2
        if disc.is_zero():
            raise ValueError("zero discriminant: the curve is singular")
        if cm_unit is None and self.b.is_zero():
            try:
                cm_unit = field.sqrt(field(-1))
            except NotImplementedError:
                cm_unit = None
        if cm_unit is not None:
            cm_unit = field(cm_unit)
            if not (cm_unit * cm_unit == field(-1)):
                raise ValueError("cm_unit must square to -1")
            if not self.b.is_zero():
                raise ValueError("the order-4 action (x,y) -> (-x, u*y) needs b = 0")
        self.cm_unit = cm_unit

    @property
    def characteristic(self):
        return self.field.characteristic

    def rhs(self, x):
        return x * x * x + self.a * x + self.b

    def infinity(self):
        return CurvePoint(self, None, None, infinity=True)

    def point(self, x, y):
        x = self.field(x)
        y = self.field(y)
        if not (y * y == self.rhs(x)):
            raise ValueError("point (%s, %s) is not on the curve" % (x, y))
        return CurvePoint(self, x, y)

    def base_change(self, new_field):
        return EllipticCurve(
            new_field, new_field(self.a), new_field(self.b),
            cm_unit=new_field(self.cm_unit) if self.cm_unit is not None else None)

    def lift_x(self, x):
        """A point with the given x-coordinate, over the base field when the
        needed square root exists there, else over one quadratic extension."""
        x = self.field(x)
        rhs = self.rhs(x)
        s = self.field.sqrt(rhs)
        if s is not None:
            return self.point(x, s)
        ext = QuadraticExtension(self.field, rhs)
        curve = self.base_change(ext)
        return curve.point(ext(x), ext.generator())

    def two_torsion(self):
        """O plus the three points (r, 0); errors if the cubic does not
        split over the base field."""
        cubic = Polynomial(self.field, [self.b, self.a, 0, 1])
        roots, residual = roots_in_field(cubic)
        if residual.degree() > 0:
            raise ValueError(
                "the 2-division cubic does not split over %s; extend the field"
                % getattr(self.field, "name", self.field))
        pts = [self.infinity()]
        zero = self.field.zero()
        for r in sorted(roots, key=str):
            pts.append(self.point(r, zero))
        return pts

    def points(self):
        """Full point enumeration (finite base fields only), O first."""
        out = [self.infinity()]
        for x in self.field.elements():
            rhs = self.rhs(x)
            s = self.field.sqrt(rhs)
            if s is None:
                continue
            out.append(self.point(x, s))
            if not (s == -s):
                out.append(self.point(x, -s))
        return out

    def __eq__(self, other):
        return isinstance(other, EllipticCurve) and other.field == self.field \
            and other.a == self.a and other.b == self.b and other.cm_unit == self.cm_unit

    def __hash__(self):
        return hash(("curve", getattr(self.field, "_key", id(self.field)),
                     _hkey(self.a), _hkey(self.b)))

    def __repr__(self):
        return "E: y^2 = x^3 + (%s)*x + (%s) over %s" % (
            self.a, self.b, getattr(self.field, "name", self.field))


def _hkey(x):
    try:
        return hash(x)
    except TypeError:
        return id(x)


class CurvePoint:
    __slots__ = ("curve", "x", "y", "infinity")

    def __init__(self, curve, x, y, infinity=False):
        self.curve = curve
        self.x = x
        self.y = y
        self.infinity = infinity

    def is_infinity(self):
        return self.infinity

    def _pair(self):
        return None if self.infinity else (self.x, self.y)

    @staticmethod
    def _wrap(curve, pair):
        if pair is None:
            return curve.infinity()
        return CurvePoint(curve, pair[0], pair[1])

    def __add__(self, other):
        if not isinstance(other, CurvePoint) or other.curve != self.curve:
            raise ValueError("points on different curves")
        return CurvePoint._wrap(
            self.curve, _affine_add(self._pair(), other._pair(), self.curve.a))

    def __neg__(self):
        if self.infinity:
            return self
        return CurvePoint(self.curve, self.x, -self.y)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        return CurvePoint._wrap(self.curve, _affine_mul(n, self._pair(), self.curve.a))

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.infinity or other.infinity:
            return self.infinity and other.infinity
        return self.curve == other.curve and self.x == other.x and self.y == other.y

    def __hash__(self):
        if self.infinity:
            return hash("point-at-infinity")
        return hash(("point", _hkey(self.x), _hkey(self.y)))

    def __repr__(self):
        if self.infinity:
            return "O"
        return "(%s, %s)" % (self.x, self.y)


class Endomorphism:
    """The CM multiplier a + b*i acting on a curve through its order-4 unit.

    Evaluation is [a]P + [b](iP) via the group law; the symbolic rational
    map is derived on demand in ``lattes`` from the same formulas.
    """

    __slots__ = ("curve", "a", "b")

    def __init__(self, curve, multiplier):
        if isinstance(multiplier, (tuple, list)):
            a, b = multiplier
        else:
            from .fields import Q_I
            elem = Q_I(multiplier)
            if any(c.denominator != 1 for c in elem.coeffs):
                raise ValueError("multiplier must be a Gaussian integer")
            a, b = int(elem.coeffs[0]), int(elem.coeffs[1])
        if a == 0 and b == 0:
            raise ValueError("the zero multiplier is not an isogeny")
        if b != 0 and curve.cm_unit is None:
            raise ValueError("curve has no order-4 unit, so b must be 0")
        self.curve = curve
        self.a = a
        self.b = b

    def degree(self):
        return self.a * self.a + self.b * self.b

    def conjugate(self):
        return Endomorphism(self.curve, (self.a, -self.b))

    def multiplier_element(self):
        from .fields import Q_I
        return Q_I([self.a, self.b])

    def __call__(self, point):
        if not isinstance(point, CurvePoint):
            raise TypeError("expected a CurvePoint")
        # points may live on a base-changed copy of the curve; evaluation
        # uses that curve's own parameters and embedded order-4 unit
        curve = point.curve
        if self.b != 0 and curve.cm_unit is None:
            raise ValueError("point's curve has no order-4 unit")
        result = _apply_multiplier(self.a, self.b, point._pair(), curve)
        return CurvePoint._wrap(curve, result)

    def __repr__(self):
        return "[%s]" % self.multiplier_element()


def _apply_multiplier(a, b, pair, curve):
    ap = _affine_mul(a, pair, curve.a) if a else None
    if b:
        u = curve.cm_unit
        ipair = None if pair is None else (-pair[0], u * pair[1])
        bp = _affine_mul(b, ipair, curve.a)
    else:
        bp = None
    return _affine_add(ap, bp, curve.a)


# ---------------------------------------------------------------------------
# function-field algebra u(x) + v(x)*y modulo y^2 = x^3 + a x + b
# ---------------------------------------------------------------------------

class CurveFunction:
    """Element u + v*y of the curve's function field, with u, v rational
    functions in x.  The representation (u, v) is unique."""

    __slots__ = ("curve", "u", "v")

    def __init__(self, curve, u, v=None):
        field = curve.field
        if not isinstance(u, RationalFunction):
            u = RationalFunction(Polynomial(field, [field(u)]))
        if v is None:
            v = RationalFunction(Polynomial(field, []))
        elif not isinstance(v, RationalFunction):
            v = RationalFunction(Polynomial(field, [field(v)]))
        self.curve = curve
        self.u = u
        self.v = v

    @staticmethod
    def x(curve):
        return CurveFunction(curve, RationalFunction.x(curve.field))

    @staticmethod
    def y(curve):
        field = curve.field
        return CurveFunction(curve, RationalFunction(Polynomial(field, [])),
                             RationalFunction(Polynomial(field, [1])))

    def _cubic(self):
        field = self.curve.field
        return RationalFunction(
            Polynomial(field, [self.curve.b, self.curve.a, 0, 1]))

    def _coerce(self, other):
        if isinstance(other, CurveFunction):
            if other.curve != self.curve:
                raise ValueError("functions on different curves")
            return other
        if isinstance(other, (RationalFunction, Polynomial, int, Fraction)):
            return CurveFunction(self.curve,
                                 other if isinstance(other, RationalFunction)
                                 else RationalFunction(
                                     other if isinstance(other, Polynomial)
                                     else Polynomial(self.curve.field,
                                                     [self.curve.field(other)])))
        try:
            e = self.curve.field(other)
        except (TypeError, ValueError):
            return None
        return CurveFunction(self.curve,
                             RationalFunction(Polynomial(self.curve.field, [e])))

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CurveFunction(self.curve, self.u + other.u, self.v + other.v)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CurveFunction(self.curve, self.u - other.u, self.v - other.v)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return CurveFunction(self.curve, -self.u, -self.v)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        c = self._cubic()
        return CurveFunction(
            self.curve,
            self.u * other.u + self.v * other.v * c,
            self.u * other.v + self.v * other.u)

    __rmul__ = __mul__

    def inverse(self):
        # (u + v y)^-1 = (u - v y) / (u^2 - v^2 (x^3 + a x + b)); the cubic
        # is not a square in the rational function field, so the denominator
        # vanishes only for u = v = 0
        c = self._cubic()
        d = self.u * self.u - self.v * self.v * c
        if d.is_zero():
            raise ZeroDivisionError("inversion of the zero curve function")
        return CurveFunction(self.curve, self.u / d, -self.v / d)

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

    def is_zero(self):
        return self.u.is_zero() and self.v.is_zero()

    def is_y_free(self):
        return self.v.is_zero()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash(("curvefn", hash(self.u), hash(self.v)))

    def __repr__(self):
        if self.v.is_zero():
            return str(self.u)
        return "(%s) + (%s)*y" % (self.u, self.v)


# ---------------------------------------------------------------------------
# kernels and the two-torsion polarizability criterion
# ---------------------------------------------------------------------------

@dataclass
class KernelData:
    x_polynomial: Polynomial           # monic; roots = x-coords of nonzero kernel points
    points: Optional[list]             # full kernel including O, when available
    extension: Optional[object]        # field the points live in (None = base field)
    note: str = ""

    @property
    def points_available(self):
        return self.points is not None


def _require_char_zero(curve, what):
    if curve.characteristic != 0:
        raise ValueError("%s is only available in characteristic zero" % what)


def kernel_x_polynomial(endo: Endomorphism) -> Polynomial:
    """Monic polynomial whose roots are exactly the x-coordinates of the
    nonzero kernel points: the squarefree part of the denominator of the
    pushed-down x-map."""
    from .lattes import build_lattes
    lm = build_lattes(endo)
    return lm.map.den.radical()


def kernel(endo: Endomorphism, extension=None) -> KernelData:
    """Kernel points over the base field or one quadratic extension.

    When the x-polynomial has a factor of degree > 2, or the needed y does
    not live in the quadratic extension either, the polynomial is still
    returned but the point list is marked unavailable.
    """
    _require_char_zero(endo.curve, "kernel enumeration")
    curve = endo.curve
    field = curve.field
    kpoly = kernel_x_polynomial(endo)
    roots, residual = roots_in_field(kpoly)

    target_field = None
    ext_points_x = []
    if residual.degree() == 0:
        pass
    elif residual.degree() == 2:
        b1, c1 = residual.coeffs[1], residual.coeffs[0]
        disc_quarter = (b1 * b1 - 4 * c1) * Fraction(1, 4)
        ext = extension if extension is not None else QuadraticExtension(field, disc_quarter)
        t = ext.sqrt(ext(disc_quarter))
        if t is None:
            return KernelData(kpoly, None, None,
                              "x-roots do not lie in the supplied extension")
        half_b = ext(b1) * Fraction(1, 2)
        ext_points_x = [t - half_b, -t - half_b]
        target_field = ext
    else:
        return KernelData(kpoly, None, None,
                          "kernel x-polynomial has a factor of degree > 2; "
                          "points unavailable over a single quadratic extension")

    if target_field is None and extension is not None:
        target_field = extension
    # try to realize every point, lifting y where needed
    if target_field is None:
        # all x-roots in the base field; y may still force one extension
        lifted = []
        pending_ext = None
        for r in roots:
            rhs = curve.rhs(r)
            s = field.sqrt(rhs)
            if s is not None:
                lifted.append((r, s, None))
            else:
                pending_ext = QuadraticExtension(field, rhs) if pending_ext is None else pending_ext
                lifted.append((r, None, rhs))
        if pending_ext is None:
            pts = [curve.infinity()]
            for r, s, _ in lifted:
                pts.append(curve.point(r, s))
                if not (s == -s):
                    pts.append(curve.point(r, -s))
            return KernelData(kpoly, pts, None)
        ecurve = curve.base_change(pending_ext)
        pts = [ecurve.infinity()]
        for r, s, rhs in lifted:
            if s is not None:
                ys = pending_ext(s)
            else:
                ys = pending_ext.sqrt(pending_ext(rhs))
                if ys is None:
                    return KernelData(kpoly, None, None,
                                      "y-coordinates do not lie in one quadratic extension")
            xr = pending_ext(r)
            pts.append(ecurve.point(xr, ys))
            if not (ys == -ys):
                pts.append(ecurve.point(xr, -ys))
        return KernelData(kpoly, pts, pending_ext)

    ecurve = curve.base_change(target_field)
    pts = [ecurve.infinity()]
    for r in roots:
        xr = target_field(r)
        ys = target_field.sqrt(ecurve.rhs(xr))
        if ys is None:
            return KernelData(kpoly, None, None,
                              "y-coordinates do not lie in one quadratic extension")
        pts.append(ecurve.point(xr, ys))
        if not (ys == -ys):
            pts.append(ecurve.point(xr, -ys))
    for xr in ext_points_x:
        ys = target_field.sqrt(ecurve.rhs(xr))
        if ys is None:
            return KernelData(kpoly, None, target_field,
                              "y-coordinates do not lie in one quadratic extension")
        pts.append(ecurve.point(xr, ys))
        if not (ys == -ys):
            pts.append(ecurve.point(xr, -ys))
    return KernelData(kpoly, pts, target_field)


def two_torsion_criterion(endo: Endomorphism) -> PolarizationCertificate:
    """Polarized iff the kernel meets the 2-torsion in m != 2 points;
    the weight is then the degree."""
    _require_char_zero(endo.curve, "the two-torsion criterion")
    d = endo.degree()
    m = 0
    for t in endo.curve.two_torsion():
        if endo(t).is_infinity():
            m += 1
    polarized = m != 2
    return PolarizationCertificate(
        polarized, d if polarized else None, REASON_KERNEL_TWO_TORSION,
        {"two_torsion_in_kernel": m, "degree": d})


def divisor_sum_oracle(endo: Endomorphism) -> bool:
    """Whether the pullback of (O) minus degree * (O) is principal.

    Decided by summing the kernel under the group law: the nonzero kernel
    points with y != 0 come in pairs (P, -P) whose chord is vertical, so
    each pair contributes O; what remains are the 2-torsion kernel points,
    i.e. the kernel points on the 2-division cubic, which are summed
    explicitly.  Independent of ``two_torsion_criterion``: the kernel here
    comes from the symbolic x-map denominator, not from point evaluation.
    """
    _require_char_zero(endo.curve, "the divisor-sum oracle")
    curve = endo.curve
    field = curve.field
    kpoly = kernel_x_polynomial(endo)
    cubic = Polynomial(field, [curve.b, curve.a, 0, 1])
    shared = Polynomial.gcd(kpoly, cubic)
    roots, residual = roots_in_field(shared)
    if residual.degree() > 0:
        raise ValueError("kernel points unavailable: a 2-torsion x-coordinate "
                         "does not lie in the base field")
    total = curve.infinity()
    zero = field.zero()
    for r in roots:
        total = total + curve.point(r, zero)
    # |Ker f| = deg f: every non-2-torsion x-root carries two points
    paired = kpoly.degree() - shared.degree()
    assert endo.degree() - 1 == shared.degree() + 2 * paired
    return total.is_infinity()
