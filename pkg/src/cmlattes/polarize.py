"""Polarizability decision procedures.

Polarizations are represented purely by numeric weight certificates.  The
Rosati involution is instantiated as complex conjugation on CM multipliers
and as conjugate-transpose on matrices acting on a product polarization;
it is never computed from a line bundle.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from .fields import (
    Q_I,
    NumberFieldElement,
    is_rational_integer,
    is_root_of_unity,
)

REASON_NORM_INTEGER = "norm-is-integer"
REASON_NORM_NOT_INTEGER = "norm-not-integer"
REASON_GRAM_DIAGONAL = "matrix-gram-diagonal"
REASON_GRAM_NOT_DIAGONAL = "matrix-gram-not-diagonal"
REASON_KERNEL_TWO_TORSION = "kernel-two-torsion"
REASON_PULLBACK_DEGREES = "pullback-degrees-equal"


@dataclass
class PolarizationCertificate:
    polarized: bool
    weight: Optional[int]
    reason: str
    diagnostics: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.polarized and (self.weight is None or self.weight < 1):
            raise ValueError("a polarized certificate needs weight >= 1")

    def is_strict(self):
        """Weight > 1; weight 1 only certifies an automorphism-like map."""
        return self.polarized and self.weight > 1

    def to_jsonable(self):
        return {
            "polarized": self.polarized,
            "weight": self.weight,
            "reason": self.reason,
            "diagnostics": {k: _jsonable(v) for k, v in sorted(self.diagnostics.items())},
        }


def _jsonable(v):
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in sorted(v.items())}
    return str(v)


def cm_polarization_check(alpha: NumberFieldElement) -> PolarizationCertificate:
    """Norm criterion: alpha is polarized iff alpha * conj(alpha) is a
    rational integer d >= 1; d is then the weight."""
    if alpha.is_zero():
        raise ValueError("the zero multiplier is not an isogeny")
    norm = alpha * alpha.conjugate()
    d = is_rational_integer(norm)
    if d is None:
        return PolarizationCertificate(
            False, None, REASON_NORM_NOT_INTEGER,
            {"norm_against_conjugate": str(norm)})
    if d < 1:
        return PolarizationCertificate(
            False, None, REASON_NORM_NOT_INTEGER,
            {"norm_against_conjugate": d, "note": "norm is not positive"})
    return PolarizationCertificate(
        True, d, REASON_NORM_INTEGER, {"norm_against_conjugate": d})


@dataclass
class PairCheckReport:
    """Outcome of the three-condition test that makes (alpha, conj(alpha))
    a diagonal-escape pair: the norm is a rational integer, alpha is not a
    rational integer, and alpha/conj(alpha) is not a root of unity."""

    ok: bool
    failed_condition: Optional[str]
    norm: Optional[int]
    root_of_unity_order: Optional[int]
    alpha: str

    def to_jsonable(self):
        return {
            "ok": self.ok,
            "failed_condition": self.failed_condition,
            "norm": self.norm,
            "root_of_unity_order": self.root_of_unity_order,
            "alpha": self.alpha,
        }


def counterexample_pair_check(alpha: NumberFieldElement) -> PairCheckReport:
    if alpha.is_zero():
        raise ValueError("the zero multiplier is excluded")
    norm = is_rational_integer(alpha * alpha.conjugate())
    if norm is None:
        return PairCheckReport(False, "norm-not-a-rational-integer", None, None, str(alpha))
    if is_rational_integer(alpha) is not None:
        return PairCheckReport(False, "alpha-is-a-rational-integer", norm, None, str(alpha))
    ratio = alpha / alpha.conjugate()
    order = is_root_of_unity(ratio)
    if order is not None:
        return PairCheckReport(False, "ratio-is-a-root-of-unity", norm, order, str(alpha))
    return PairCheckReport(True, None, norm, None, str(alpha))


class IntegerMatrix:
    """Square matrix over the rational or Gaussian integers.

    Entries are stored as Gaussian-rational field elements but must be
    integral; the conjugate-transpose realizes the Rosati involution of a
    product polarization.
    """

    __slots__ = ("entries", "dim")

    def __init__(self, rows, field=Q_I):
        rows = [list(r) for r in rows]
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square with dimension >= 1")
        ent = []
        for r in rows:
            out = []
            for v in r:
                e = field(v)
                if any(c.denominator != 1 for c in e.coeffs):
                    raise ValueError("matrix entries must be integers, got %s" % e)
                out.append(e)
            ent.append(tuple(out))
        self.entries = tuple(ent)
        self.dim = n

    @property
    def field(self):
        return self.entries[0][0].field

    @staticmethod
    def identity(n, field=Q_I):
        return IntegerMatrix(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)], field)

    def conjugate_transpose(self):
        f = self.field
        if not f.has_conjugation:
            raise ValueError("matrix field has no conjugation")
        rows = [[self.entries[j][i].conjugate() for j in range(self.dim)]
                for i in range(self.dim)]
        return IntegerMatrix(rows, f)

    def __mul__(self, other):
        if not isinstance(other, IntegerMatrix) or other.dim != self.dim:
            return NotImplemented
        n = self.dim
        zero = self.field.zero()
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(row)
        return IntegerMatrix(rows, self.field)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 1:
            raise ValueError("matrix powers need n >= 1")
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.dim == other.dim and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __str__(self):
        return "[" + "; ".join(
            ", ".join(str(e) for e in row) for row in self.entries) + "]"

    __repr__ = __str__


def matrix_polarization_check(m: IntegerMatrix) -> PolarizationCertificate:
    """Gram criterion: polarized iff M† M = d * Identity with d >= 1."""
    gram = m.conjugate_transpose() * m
    diag = gram.entries[0][0]
    zero = m.field.zero()
    ok = True
    for i in range(m.dim):
        for j in range(m.dim):
            e = gram.entries[i][j]
            if i == j:
                ok = ok and e == diag
            else:
                ok = ok and e == zero
    d = is_rational_integer(diag) if ok else None
    if not ok or d is None or d < 1:
        return PolarizationCertificate(
            False, None, REASON_GRAM_NOT_DIAGONAL,
            {"gram": str(gram)})
    return PolarizationCertificate(
        True, d, REASON_GRAM_DIAGONAL, {"gram_diagonal": d, "dimension": m.dim})


def matrix_power_coincidence(ma: IntegerMatrix, mb: IntegerMatrix,
                             bound: int) -> Optional[int]:
    """Least n <= bound with ma^n == mb^n, or None."""
    if ma.dim != mb.dim:
        raise ValueError("matrices must have the same dimension")
    if bound < 1:
        raise ValueError("bound must be >= 1")
    pa, pb = ma, mb
    for n in range(1, bound + 1):
        if pa == pb:
            return n
        if n < bound:
            pa = pa * ma
            pb = pb * mb
    return None


def weight_division(d: int, n: int, g: int):
    """Divide weights through a composition.

    With f of weight d, h = f o j of weight n on a g-dimensional variety,
    the middle map j is polarized with weight m = n/d and degree m^g;
    d must divide n exactly, else no such polarized j exists.
    """
    if d < 1 or n < 1 or g < 1:
        raise ValueError("weights and dimension must be >= 1")
    if n % d != 0:
        raise ValueError("inconsistent weights: %d does not divide %d" % (d, n))
    m = n // d
    return m, m ** g
