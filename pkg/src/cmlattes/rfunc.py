"""Polynomials and rational functions over an exact field.

Rational functions are kept in canonical form: numerator and denominator
coprime (monic Euclidean gcd over the field) with a monic denominator, so
structural equality is semantic equality.
"""

from __future__ import annotations

from fractions import Fraction

from .fields import (
    NumberFieldSpec,
    gaussian_divisors,
    gaussian_exact_div,
    _int_divisors,
)


class _Infinity:
    """The point at infinity of the projective line."""

    __slots__ = ()

    def __repr__(self):
        return "inf"

    def __reduce__(self):
        return (_infinity_instance, ())


INFINITY = _Infinity()


def _infinity_instance():
    return INFINITY


class Polynomial:
    """Dense univariate polynomial, ascending coefficients, no trailing zeros."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        cs = [field(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @staticmethod
    def x(field):
        return Polynomial(field, [0, 1])

    @staticmethod
    def constant(field, value):
        return Polynomial(field, [value])

    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def lc(self):
        if not self.coeffs:
            return self.field.zero()
        return self.coeffs[-1]

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.field == self.field:
                return other
            raise ValueError("polynomials over different fields")
        try:
            return Polynomial(self.field, [self.field(other)])
        except (TypeError, ValueError):
            return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero()
        a = list(self.coeffs) + [z] * (n - len(self.coeffs))
        b = list(other.coeffs) + [z] * (n - len(other.coeffs))
        return Polynomial(self.field, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return Polynomial(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Polynomial(self.field, [])
        z = self.field.zero()
        out = [z] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ca in enumerate(self.coeffs):
            if ca.is_zero():
                continue
            for j, cb in enumerate(other.coeffs):
                if not cb.is_zero():
                    out[i + j] = out[i + j] + ca * cb
        return Polynomial(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Polynomial(self.field, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other):
        other = self._coerce(other)
        if other is None or other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [self.field.zero()] * max(len(rem) - len(other.coeffs) + 1, 0)
        inv_lead = other.lc().inverse() if hasattr(other.lc(), "inverse") \
            else 1 / other.lc()
        db = other.degree()
        while len(rem) - 1 >= db and rem:
            while rem and rem[-1].is_zero():
                rem.pop()
            if len(rem) - 1 < db or not rem:
                break
            shift = len(rem) - 1 - db
            factor = rem[-1] * inv_lead
            quot[shift] = factor
            for i, cb in enumerate(other.coeffs):
                rem[i + shift] = rem[i + shift] - factor * cb
        return Polynomial(self.field, quot), Polynomial(self.field, rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def monic(self):
        if self.is_zero():
            return self
        lead = self.lc()
        return Polynomial(self.field, [c / lead for c in self.coeffs])

    @staticmethod
    def gcd(a, b):
        """Monic gcd via the plain Euclidean algorithm over the field.

        Inputs with fractional content are cleared first; the remainder
        sequence itself uses monic remainders.
        """
        a = _strip_content(a)
        b = _strip_content(b)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self):
        return Polynomial(self.field, [c * k for k, c in enumerate(self.coeffs)][1:])

    def radical(self):
        """Squarefree part (characteristic zero), monic."""
        if self.is_zero():
            return self
        g = Polynomial.gcd(self, self.derivative())
        if g.degree() <= 0:
            return self.monic()
        return self.exact_div(g).monic()

    def evaluate(self, x):
        """Horner evaluation; x may live in an extension that coerces the
        coefficients."""
        target = getattr(x, "field", None)
        acc = None
        for c in reversed(self.coeffs):
            cx = target(c) if target is not None and target != self.field else c
            acc = cx if acc is None else acc * x + cx
        if acc is None:
            return target(0) if target is not None else self.field.zero()
        return acc

    def compose(self, inner):
        acc = Polynomial(self.field, [])
        for c in reversed(self.coeffs):
            acc = acc * inner + Polynomial(self.field, [c])
        return acc

    def shift_up(self, k):
        if self.is_zero():
            return self
        return Polynomial(self.field, [self.field.zero()] * k + list(self.coeffs))

    def map_coefficients(self, fn, field=None):
        return Polynomial(field or self.field, [fn(c) for c in self.coeffs])

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return other.field == self.field and other.coeffs == self.coeffs
        coerced = self._coerce(other)
        if coerced is None:
            return NotImplemented
        return self.coeffs == coerced.coeffs

    def __hash__(self):
        return hash(("poly", self.coeffs))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            cs = str(c)
            if k == 0:
                parts.append(cs)
                continue
            xs = "x" if k == 1 else "x^%d" % k
            if cs == "1":
                parts.append(xs)
            elif cs == "-1":
                parts.append("-" + xs)
            else:
                if "+" in cs or ("-" in cs[1:]):
                    cs = "(" + cs + ")"
                parts.append("%s*%s" % (cs, xs))
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    __repr__ = __str__


class RationalFunction:
    """Quotient of polynomials in canonical form (coprime, monic denominator)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _canonical=False):
        if not isinstance(num, Polynomial):
            raise TypeError("numerator must be a Polynomial")
        if den is None:
            den = Polynomial(num.field, [1])
        if not isinstance(den, Polynomial):
            den = Polynomial(num.field, [den])
        if den.field != num.field:
            raise ValueError("numerator and denominator over different fields")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _canonical:
            g = Polynomial.gcd(num, den)
            if g.degree() > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            lead = den.lc()
            if not (lead == num.field(1)):
                inv = lead.inverse() if hasattr(lead, "inverse") else 1 / lead
                num = num * inv
                den = den * inv
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    @staticmethod
    def x(field):
        return RationalFunction(Polynomial.x(field))

    @staticmethod
    def constant(field, value):
        return RationalFunction(Polynomial.constant(field, value))

    def degree(self):
        """Degree as a self-map of the projective line."""
        return max(self.num.degree(), self.den.degree(), 0)

    def is_zero(self):
        return self.num.is_zero()

    def is_constant(self):
        return self.num.degree() <= 0 and self.den.degree() == 0

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.field == self.field:
                return other
            raise ValueError("rational functions over different fields")
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        try:
            return RationalFunction(Polynomial(self.field, [self.field(other)]))
        except (TypeError, ValueError):
            return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (RationalFunction(self.den, self.num)) ** (-n)
        # powers of a canonical fraction stay coprime with a monic denominator
        return RationalFunction(self.num ** n, self.den ** n, _canonical=True)

    def compose(self, inner):
        """Canonical form of self(inner(x)).

        Both inputs are canonical, and then no reduction is needed: a common
        root of the two homogenized parts of ``self`` evaluated at ``inner``
        would force a common root of self.num and self.den, or a drop of
        degree at infinity, neither of which a canonical pair allows.
        """
        inner = self._coerce(inner)
        if inner is None:
            raise TypeError("cannot compose with %r" % (inner,))
        if inner.is_constant():
            c = inner.num.coeffs[0] if inner.num.coeffs else self.field.zero()
            value = self.evaluate_projective(c)
            if value is INFINITY:
                raise ZeroDivisionError("composition with a constant that maps to infinity")
            return RationalFunction(Polynomial(self.field, [value]))
        d = max(self.num.degree(), self.den.degree())
        u_pows = [Polynomial(self.field, [1])]
        v_pows = [Polynomial(self.field, [1])]
        for _ in range(d):
            u_pows.append(u_pows[-1] * inner.num)
            v_pows.append(v_pows[-1] * inner.den)
        num = Polynomial(self.field, [])
        den = Polynomial(self.field, [])
        for k in range(d + 1):
            cross = u_pows[k] * v_pows[d - k]
            if k < len(self.num.coeffs) and not self.num.coeffs[k].is_zero():
                num = num + cross * self.num.coeffs[k]
            if k < len(self.den.coeffs) and not self.den.coeffs[k].is_zero():
                den = den + cross * self.den.coeffs[k]
        lead = den.lc()
        if not (lead == self.field(1)):
            inv = lead.inverse() if hasattr(lead, "inverse") else 1 / lead
            num = num * inv
            den = den * inv
        return RationalFunction(num, den, _canonical=True)

    def evaluate_projective(self, x):
        """Value at a point of P^1 (INFINITY allowed), as element or INFINITY."""
        if x is INFINITY:
            dn, dd = self.num.degree(), self.den.degree()
            if dn > dd:
                return INFINITY
            if dn < dd:
                return self.field.zero()
            return self.num.lc()  # denominator is monic
        d = self.den.evaluate(x)
        n = self.num.evaluate(x)
        if _is_zero(d):
            if _is_zero(n):
                raise ArithmeticError("0/0 while evaluating a canonical map")
            return INFINITY
        return n / d

    def map_coefficients(self, fn, field=None):
        return RationalFunction(self.num.map_coefficients(fn, field),
                                self.den.map_coefficients(fn, field))

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(("rfunc", self.num.coeffs, self.den.coeffs))

    def __str__(self):
        if self.den.degree() == 0 and self.den.lc() == self.field(1):
            return str(self.num)
        return "(%s)/(%s)" % (self.num, self.den)

    __repr__ = __str__


def _is_zero(x):
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


def _rational_content(poly):
    """gcd of numerators over lcm of denominators across all coefficient
    vector entries, or None when coefficients are not Fraction vectors."""
    nums = []
    dens = []
    for c in poly.coeffs:
        parts = getattr(c, "coeffs", None)
        if parts is None:
            return None
        for p in parts:
            if not isinstance(p, Fraction):
                return None
            if p:
                nums.append(p.numerator)
                dens.append(p.denominator)
    if not nums:
        return Fraction(1)
    g = 0
    for n in nums:
        g = math_gcd(g, abs(n))
    l = 1
    for d in dens:
        l = l * d // math_gcd(l, d)
    return Fraction(g, l)


def _strip_content(poly):
    if poly.is_zero():
        return poly
    content = _rational_content(poly)
    if content is None or content == 1:
        return poly
    return poly * poly.field(1 / content)


def rf_compose(f, g):
    """Composition f(g(x)) in canonical form."""
    return f.compose(g)


# ---------------------------------------------------------------------------
# root finding in a fixed field (no splitting-field machinery)
# ---------------------------------------------------------------------------

def roots_in_field(poly):
    """Roots of ``poly`` that lie in its own coefficient field.

    Returns (roots, residual) where residual is the monic cofactor left
    after dividing out the in-field linear factors (with multiplicity).
    Decidable for prime fields (scan), for Q, and for quadratic number
    fields with modulus x^2 + m (divisor candidates plus exact square
    roots); other fields raise NotImplementedError.
    """
    field = poly.field
    if poly.is_zero():
        raise ValueError("the zero polynomial has every root")
    work = poly.monic()
    roots = []
    # peel roots at zero
    while work.degree() >= 1 and work.coeffs[0].is_zero():
        roots.append(field(0))
        work = Polynomial(field, work.coeffs[1:])
    changed = True
    while changed and work.degree() >= 1:
        changed = False
        if work.degree() == 1:
            roots.append(-work.coeffs[0])
            work = Polynomial(field, [1])
            break
        if work.degree() == 2:
            b, c = work.coeffs[1], work.coeffs[0]
            disc = b * b - 4 * c
            s = field.sqrt(disc)
            if s is None:
                break
            half = field(Fraction(1, 2))
            for sign in (1, -1):
                roots.append((-b + sign * s) * half)
            work = Polynomial(field, [1])
            break
        for cand in _linear_root_candidates(work):
            if work.evaluate(cand).is_zero():
                roots.append(cand)
                work = work.exact_div(Polynomial(field, [-cand, 1]))
                changed = True
                break
    return roots, work


def _linear_root_candidates(poly):
    """Candidate in-field roots by the rational root theorem.

    Works over Q (degree-1 fields) and over quadratic fields whose ring of
    integers behaves like Z[i] for divisor enumeration (modulus x^2 + 1).
    """
    field = poly.field
    if hasattr(field, "elements"):
        yield from field.elements()
        return
    if not isinstance(field, NumberFieldSpec):
        raise NotImplementedError("root candidates only for number fields")
    if field.degree == 1:
        lcm = 1
        for c in poly.coeffs:
            lcm = lcm * c.coeffs[0].denominator // \
                math_gcd(lcm, c.coeffs[0].denominator)
        ints = [int(c.coeffs[0] * lcm) for c in poly.coeffs]
        c0, lead = ints[0], ints[-1]
        seen = set()
        for p in _int_divisors(c0):
            for q in _int_divisors(lead):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if cand not in seen:
                        seen.add(cand)
                        yield field(cand)
        return
    if field.degree == 2 and field.modulus == (Fraction(1), Fraction(0), Fraction(1)):
        lcm = 1
        for c in poly.coeffs:
            for part in c.coeffs:
                lcm = lcm * part.denominator // math_gcd(lcm, part.denominator)
        pairs = [(int(c.coeffs[0] * lcm), int(c.coeffs[1] * lcm)) for c in poly.coeffs]
        c0, lead = pairs[0], pairs[-1]
        seen = set()
        for p in gaussian_divisors(c0):
            for q in gaussian_divisors(lead):
                exact = gaussian_exact_div(p, q)
                key = exact
                if exact is None:
                    nq = q[0] * q[0] + q[1] * q[1]
                    num = (p[0] * q[0] + p[1] * q[1], p[1] * q[0] - p[0] * q[1])
                    key = (Fraction(num[0], nq), Fraction(num[1], nq))
                else:
                    key = (Fraction(exact[0]), Fraction(exact[1]))
                if key not in seen:
                    seen.add(key)
                    yield field([key[0], key[1]])
        return
    raise NotImplementedError("root candidates not implemented for %s" % field.name)


def math_gcd(a, b):
    import math
    return math.gcd(a, b)
