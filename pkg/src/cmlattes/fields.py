"""Exact arithmetic base layer.

Rationals are plain ``fractions.Fraction`` values.  Number fields are
presented as Q[x]/(f) with elements stored on the power basis of the
generator ``w``; a user-supplied involution ("conjugation") plays the role
of complex conjugation where one exists.  Quadratic extensions of any base
field are provided for lifting square roots (curve points, kernel roots).

Every value is immutable after construction and every operation is a pure
function, so all types here are safe to share between threads.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Optional, Sequence, Union

Rational = Fraction

Scalar = Union[int, Fraction]


def rational_sqrt(q) -> Optional[Fraction]:
    """Exact square root of a rational number, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi needs n >= 1")
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def root_of_unity_orders(degree: int):
    """All n whose primitive n-th roots of unity can live in a degree-g field.

    phi(n) >= sqrt(n/2), so n <= 2*g*g bounds the enumeration.
    """
    return [n for n in range(1, 2 * degree * degree + 2) if euler_phi(n) <= degree]


# ---------------------------------------------------------------------------
# helpers on plain coefficient lists (ascending powers, Fraction entries)
# ---------------------------------------------------------------------------

def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _list_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] += ca * cb
    return _trim(out)


def _list_divmod(a, b):
    a = list(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = 1 / b[-1]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(_trim(a)) >= len(b):
        a = _trim(a)
        shift = len(a) - len(b)
        factor = a[-1] * inv_lead
        q[shift] = factor
        for i, cb in enumerate(b):
            a[i + shift] -= factor * cb
    return _trim(q), _trim(a)


def _list_xgcd(a, b):
    """Extended gcd of rational coefficient lists: g, s, t with s*a + t*b = g."""
    r0, r1 = _trim(a), _trim(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _list_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _trim([x - y for x, y in _zip_pad(s0, _list_mul(q, s1))])
        t0, t1 = t1, _trim([x - y for x, y in _zip_pad(t0, _list_mul(q, t1))])
    return r0, s0, t0


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return zip(a, b)


def _has_rational_root(coeffs) -> bool:
    coeffs = _trim([Fraction(c) for c in coeffs])
    if not coeffs:
        return True
    if coeffs[0] == 0:
        return True
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    c0, lead = abs(ints[0]), abs(ints[-1])
    for p in _int_divisors(c0):
        for q in _int_divisors(lead):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if sum(c * cand ** k for k, c in enumerate(coeffs)) == 0:
                    return True
    return False


def _int_divisors(n: int):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


# ---------------------------------------------------------------------------
# Gaussian integer utilities (pairs of ints a + b*i)
# ---------------------------------------------------------------------------

def gaussian_norm(z):
    a, b = z
    return a * a + b * b


def gaussian_mul(z, w):
    a, b = z
    c, d = w
    return (a * c - b * d, a * d + b * c)


def gaussian_conj(z):
    return (z[0], -z[1])


def gaussian_divmod(z, w):
    """Nearest-rounding division in Z[i]; the remainder has smaller norm."""
    if w == (0, 0):
        raise ZeroDivisionError("gaussian division by zero")
    n = gaussian_norm(w)
    num = gaussian_mul(z, gaussian_conj(w))
    q = (_round_half(num[0], n), _round_half(num[1], n))
    r0, r1 = gaussian_mul(q, w)
    return q, (z[0] - r0, z[1] - r1)


def _round_half(a: int, n: int) -> int:
    # round(a/n) to the nearest integer, ties toward +inf; exactness only
    # needs |remainder| <= n/2
    return (2 * a + n) // (2 * n)


def gaussian_gcd(z, w):
    while w != (0, 0):
        _, r = gaussian_divmod(z, w)
        z, w = w, r
    return z


def gaussian_exact_div(z, w):
    """z / w in Z[i] when the division is exact, else None."""
    q, r = gaussian_divmod(z, w)
    return q if r == (0, 0) else None


def two_squares(n: int):
    """All (a, b) with a*a + b*b == n and a, b >= 0."""
    out = []
    a = 0
    while a * a <= n:
        b2 = n - a * a
        b = math.isqrt(b2)
        if b * b == b2:
            out.append((a, b))
        a += 1
    return out


def gaussian_divisors(z):
    """All divisors of z in Z[i] (up to nothing: units included via signs)."""
    if z == (0, 0):
        raise ValueError("zero has no divisor list")
    n = gaussian_norm(z)
    seen = set()
    for d in _int_divisors(n):
        for a, b in two_squares(d):
            for cand in {(a, b), (a, -b), (b, a), (-b, a)}:
                if cand == (0, 0):
                    continue
                if gaussian_exact_div(z, cand) is not None:
                    seen.add(cand)
                    seen.add((-cand[0], -cand[1]))
    return sorted(seen)


# ---------------------------------------------------------------------------
# Number fields
# ---------------------------------------------------------------------------

class NumberFieldSpec:
    """Number field Q[x]/(modulus), elements on the power basis of ``w``.

    modulus: ascending rational coefficients, monic, degree >= 1.  A cheap
    irreducibility screen (no rational roots) runs for degree 2..4; full
    factorization is the caller's responsibility.
    conjugation: image of the generator under the designated involution,
    given as ascending coefficients or an element literal.
    """

    characteristic = 0
    generator_symbol = "w"

    def __init__(self, modulus, conjugation=None, name=None):
        mod = _trim([Fraction(c) for c in modulus])
        if len(mod) < 2:
            raise ValueError("modulus must have degree >= 1")
        if mod[-1] != 1:
            raise ValueError("modulus must be monic")
        self.modulus = tuple(mod)
        self.degree = len(mod) - 1
        if 2 <= self.degree <= 4 and _has_rational_root(mod):
            raise ValueError("modulus has a rational root, hence is reducible")
        self.name = name or "Q[w]/(" + _format_coeff_poly(mod) + ")"
        self._key = ("nf", self.modulus)
        # powers of w reduced modulo the modulus, starting at w^degree
        base = [-c for c in mod[:-1]]
        self._wpow = [base]
        self._conj_pows = None
        if conjugation is not None:
            img = self(conjugation)
            pows = [self.one()]
            for _ in range(self.degree - 1):
                pows.append(pows[-1] * img)
            self._conj_pows = tuple(pows)
            if self.conjugate(img) != self.generator():
                raise ValueError("conjugation applied twice must fix the generator")

    @property
    def has_conjugation(self):
        return self._conj_pows is not None

    def _w_power(self, k):
        # reduced coefficients of w^k for k >= degree
        while len(self._wpow) <= k - self.degree:
            prev = self._wpow[-1]
            shifted = [Fraction(0)] + list(prev)
            top = shifted.pop()
            if top:
                shifted = [c + top * b for c, b in zip(shifted, self._wpow[0])]
            self._wpow.append(shifted)
        return self._wpow[k - self.degree]

    def _reduce(self, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        for k in range(len(coeffs) - 1, self.degree - 1, -1):
            c = coeffs[k]
            if c:
                coeffs[k] = Fraction(0)
                for j, b in enumerate(self._w_power(k)):
                    coeffs[j] += c * b
        coeffs = coeffs[:self.degree]
        coeffs += [Fraction(0)] * (self.degree - len(coeffs))
        return tuple(coeffs)

    def __call__(self, value):
        if isinstance(value, NumberFieldElement):
            if value.field == self:
                return value
            raise ValueError("mixed-field operands: %s vs %s" % (value.field.name, self.name))
        if isinstance(value, (int, Fraction)):
            return NumberFieldElement(self, self._reduce([Fraction(value)]))
        if isinstance(value, str):
            return parse_element(self, value)
        if isinstance(value, (list, tuple)):
            return NumberFieldElement(self, self._reduce(value))
        raise TypeError("cannot coerce %r into %s" % (value, self.name))

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def generator(self):
        return self([0, 1])

    def conjugate(self, element):
        if self._conj_pows is None:
            raise ValueError("field %s has no conjugation" % self.name)
        element = self(element)
        acc = self.zero()
        for c, p in zip(element.coeffs, self._conj_pows):
            if c:
                acc = acc + p * c
        return acc

    def sqrt(self, element):
        """Exact in-field square root, or None.

        Decidable for degree 1 and for degree-2 fields with a pure
        quadratic modulus x^2 + m; other shapes raise NotImplementedError
        rather than guess.
        """
        element = self(element)
        if self.degree == 1:
            r = rational_sqrt(element.coeffs[0])
            return None if r is None else self(r)
        if self.degree == 2 and self.modulus[1] == 0:
            tau = -self.modulus[0]  # w^2 = tau
            c, d = element.coeffs
            return _solve_quadratic_sqrt(self, c, d, tau, rational_sqrt,
                                         lambda u, v: self([u, v]))
        raise NotImplementedError(
            "square roots are only decided for degree <= 2 fields with modulus x^2 + m")

    def __eq__(self, other):
        return isinstance(other, NumberFieldSpec) and other.modulus == self.modulus \
            and self._conj_key() == other._conj_key()

    def _conj_key(self):
        if self._conj_pows is None:
            return None
        return self._conj_pows[1].coeffs if self.degree > 1 else self._conj_pows[0].coeffs

    def __hash__(self):
        return hash((self._key, self._conj_key()))

    def __repr__(self):
        return self.name


def _solve_quadratic_sqrt(field, c, d, tau, base_sqrt, make):
    """Square roots of c + d*t where t^2 = tau, over a base with decidable sqrt."""
    if d == 0:
        r = base_sqrt(c)
        if r is not None:
            return make(r, 0 * r)
        if tau != 0:
            r = base_sqrt(c / tau)
            if r is not None:
                return make(0 * r, r)
        return None
    disc = base_sqrt(c * c - d * d * tau)
    if disc is None:
        return None
    for sign in (1, -1):
        asq = (c + sign * disc) / 2
        a = base_sqrt(asq)
        if a is not None and a != 0:
            b = d / (2 * a)
            cand = make(a, b)
            if cand * cand == make(c, d):
                return cand
    return None


class NumberFieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs  # tuple of Fractions, already reduced

    def _coerce(self, other):
        if isinstance(other, NumberFieldElement):
            if other.field == self.field:
                return other
            raise ValueError("mixed-field operands: %s vs %s"
                             % (self.field.name, other.field.name))
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return NumberFieldElement(
            self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return NumberFieldElement(
            self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        prod = _list_mul(list(self.coeffs), list(other.coeffs))
        return NumberFieldElement(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def __neg__(self):
        return NumberFieldElement(self.field, tuple(-a for a in self.coeffs))

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero in %s" % self.field.name)
        g, s, _ = _list_xgcd(list(self.coeffs), list(self.field.modulus))
        if len(g) != 1:
            raise ArithmeticError("modulus of %s is reducible" % self.field.name)
        inv = [c / g[0] for c in s]
        return NumberFieldElement(self.field, self.field._reduce(inv))

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
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self):
        return self.field.conjugate(self)

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, NumberFieldElement):
            return other.field == self.field and other.coeffs == self.coeffs
        if isinstance(other, (int, Fraction)):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field._key, self.coeffs))

    def __str__(self):
        return format_element(self)

    __repr__ = __str__


def conjugate(element):
    return element.conjugate()


def is_rational_integer(element) -> Optional[int]:
    """The rational integer an element equals, or None."""
    if isinstance(element, int):
        return element
    if isinstance(element, Fraction):
        return int(element) if element.denominator == 1 else None
    if any(element.coeffs[1:]):
        return None
    c0 = element.coeffs[0]
    return int(c0) if c0.denominator == 1 else None


def as_rational(element) -> Optional[Fraction]:
    if isinstance(element, (int, Fraction)):
        return Fraction(element)
    if any(element.coeffs[1:]):
        return None
    return element.coeffs[0]


def is_root_of_unity(u) -> Optional[int]:
    """Least n >= 1 with u**n == 1, or None.

    Only orders n with phi(n) <= [field degree] can occur, so that finite
    candidate set is tested exactly, in increasing order.
    """
    if u.is_zero():
        raise ValueError("zero is not a root of unity candidate")
    one = u.field.one()
    for n in root_of_unity_orders(u.field.degree):
        if u ** n == one:
            return n
    return None


# ---------------------------------------------------------------------------
# Quadratic extensions K(t) with t^2 = tau, over any base field here
# ---------------------------------------------------------------------------

class QuadraticExtension:
    """Degree-2 extension of a base field by a square root of tau.

    tau must not already be a square in the base (checked when the base can
    decide square roots), else the quotient would not be a field.
    """

    generator_symbol = "t"

    def __init__(self, base, tau, name=None):
        self.base = base
        self.tau = base(tau)
        try:
            if base.sqrt(self.tau) is not None:
                raise ValueError("tau is a square in the base field; extension is not a field")
        except NotImplementedError:
            pass
        self.characteristic = base.characteristic
        self.degree = 2 * getattr(base, "degree", 1)
        self.name = name or "%s(t | t^2 = %s)" % (getattr(base, "name", base), self.tau)
        self._key = ("quadext", getattr(base, "_key", id(base)), _hash_key(self.tau))

    def __call__(self, value):
        if isinstance(value, QuadraticExtensionElement):
            if value.field == self:
                return value
            raise ValueError("mixed-field operands")
        if isinstance(value, (int, Fraction)):
            return QuadraticExtensionElement(self, self.base(value), self.base(0))
        # base-field elements embed as constants
        try:
            u = self.base(value)
        except (TypeError, ValueError):
            raise TypeError("cannot coerce %r into %s" % (value, self.name))
        return QuadraticExtensionElement(self, u, self.base(0))

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def generator(self):
        return QuadraticExtensionElement(self, self.base(0), self.base(1))

    def sqrt(self, element):
        element = self(element)
        return _solve_quadratic_sqrt(
            self, element.u, element.v, self.tau, self.base.sqrt,
            lambda u, v: QuadraticExtensionElement(self, self.base(u), self.base(v)))

    def elements(self):
        """All elements (finite base fields only)."""
        for u in self.base.elements():
            for v in self.base.elements():
                yield QuadraticExtensionElement(self, u, v)

    def __eq__(self, other):
        return isinstance(other, QuadraticExtension) and other.base == self.base \
            and other.tau == self.tau

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return self.name


def _hash_key(x):
    try:
        return hash(x)
    except TypeError:
        return id(x)


class QuadraticExtensionElement:
    __slots__ = ("field", "u", "v")

    def __init__(self, field, u, v):
        self.field = field
        self.u = u
        self.v = v

    def _coerce(self, other):
        if isinstance(other, QuadraticExtensionElement):
            if other.field == self.field:
                return other
            raise ValueError("mixed-field operands")
        try:
            return self.field(other)
        except (TypeError, ValueError):
            return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadraticExtensionElement(self.field, self.u + other.u, self.v + other.v)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadraticExtensionElement(self.field, self.u - other.u, self.v - other.v)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        tau = self.field.tau
        return QuadraticExtensionElement(
            self.field,
            self.u * other.u + self.v * other.v * tau,
            self.u * other.v + self.v * other.u)

    __rmul__ = __mul__

    def __neg__(self):
        return QuadraticExtensionElement(self.field, -self.u, -self.v)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero in %s" % self.field.name)
        d = self.u * self.u - self.v * self.v * self.field.tau
        return QuadraticExtensionElement(self.field, self.u / d, -self.v / d)

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
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self):
        return not (self.u or self.v)

    def __bool__(self):
        return bool(self.u) or bool(self.v)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.field._key, _hash_key(self.u), _hash_key(self.v)))

    def __str__(self):
        if not self.v:
            return str(self.u)
        return "(%s)+(%s)*t" % (self.u, self.v)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# element literals: "2+1*w", "4+3*w+12*w^2", "-1/2*w^3", "w", "3/2"
# ---------------------------------------------------------------------------

_TERM_SPLIT = re.compile(r"[+-][^+-]+")


def parse_element(field, text: str):
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty element literal")
    if s[0] not in "+-":
        s = "+" + s
    terms = _TERM_SPLIT.findall(s)
    if "".join(terms) != s:
        raise ValueError("malformed element literal: %r" % text)
    gen = field.generator()
    sym = field.generator_symbol
    acc = field.zero()
    for term in terms:
        sign = -1 if term[0] == "-" else 1
        body = term[1:]
        if not body:
            raise ValueError("malformed element literal: %r" % text)
        if "*" in body:
            coef_str, gen_part = body.split("*", 1)
        elif body[0].isdigit():
            coef_str, gen_part = body, None
        else:
            coef_str, gen_part = "1", body
        try:
            coef = Fraction(coef_str)
        except (ValueError, ZeroDivisionError):
            raise ValueError("bad coefficient %r in element literal %r" % (coef_str, text))
        if gen_part is None:
            power = 0
        else:
            m = re.fullmatch(r"([A-Za-z]\w*)(?:\^(\d+))?", gen_part)
            if not m or m.group(1) != sym:
                raise ValueError("bad term %r in element literal %r (generator is %r)"
                                 % (term, text, sym))
            power = int(m.group(2) or 1)
        acc = acc + (gen ** power) * (sign * coef)
    return acc


def format_element(element) -> str:
    sym = element.field.generator_symbol
    parts = []
    for k, c in enumerate(element.coeffs):
        if c == 0:
            continue
        if k == 0:
            parts.append(str(c))
        else:
            base = sym if k == 1 else "%s^%d" % (sym, k)
            parts.append("%s*%s" % (c, base))
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def _format_coeff_poly(coeffs) -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        if k == 0:
            parts.append(str(c))
        elif k == 1:
            parts.append("%s*x" % c if c != 1 else "x")
        else:
            parts.append("%s*x^%d" % (c, k) if c != 1 else "x^%d" % k)
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


# built-in fields
Q = NumberFieldSpec([0, 1], conjugation=[0], name="Q")
Q_I = NumberFieldSpec([1, 0, 1], conjugation=[0, -1], name="Qi")
Q_ZETA5 = NumberFieldSpec([1, 1, 1, 1, 1], conjugation=[0, 0, 0, 0, 1], name="Qzeta5")

FIELDS = {"Q": Q, "Qi": Q_I, "Qzeta5": Q_ZETA5}


def field_from_spec(spec):
    """Resolve a field given by name or by {"modulus": [...], "conjugation": [...]}."""
    if isinstance(spec, NumberFieldSpec):
        return spec
    if isinstance(spec, str):
        if spec in FIELDS:
            return FIELDS[spec]
        raise ValueError("unknown field %r (known: %s)" % (spec, ", ".join(sorted(FIELDS))))
    if isinstance(spec, dict):
        if "modulus" not in spec:
            raise ValueError("inline field needs a 'modulus' key (ascending coefficients)")
        return NumberFieldSpec(spec["modulus"], conjugation=spec.get("conjugation"),
                               name=spec.get("name"))
    raise TypeError("cannot interpret %r as a field" % (spec,))
