"""Orbits, preperiodicity, heights, and the assembled diagonal-escape
verification.

Non-preperiodicity over number fields is evidenced, not decided: exact
iteration with a height-divergence witness, while the root-of-unity
certificate carries the for-all-iterates claim.  Over finite fields orbits
always close up, and minimal tail and cycle lengths are read off a
visited-set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from .curves import EllipticCurve, Endomorphism
from .fields import Q_I, gaussian_gcd, gaussian_norm
from .lattes import LattesMap, build_lattes, golden_map, product_pullback_check
from .polarize import PairCheckReport, counterexample_pair_check
from .reduction import reduce_curve, reduce_map, split_primes
from .rfunc import INFINITY, RationalFunction

DEFAULT_SEED = 1729
DEFAULT_TORSION_ORDERS = (2, 3, 4, 5)


def naive_height(x) -> float:
    """log max(Norm(p), Norm(q)) for x = p/q in lowest terms over the
    Gaussian integers; infinity has height 0."""
    if x is INFINITY:
        return 0.0
    coeffs = getattr(x, "coeffs", None)
    if coeffs is None or len(coeffs) > 2:
        raise ValueError("naive height is defined for Gaussian-rational values")
    c0 = coeffs[0]
    c1 = coeffs[1] if len(coeffs) > 1 else Fraction(0)
    lcm = c0.denominator * c1.denominator // math.gcd(c0.denominator, c1.denominator)
    num = (int(c0 * lcm), int(c1 * lcm))
    den = (lcm, 0)
    g = gaussian_gcd(num, den)
    from .fields import gaussian_exact_div
    p = gaussian_exact_div(num, g)
    q = gaussian_exact_div(den, g)
    return math.log(max(gaussian_norm(p), gaussian_norm(q), 1))


@dataclass
class OrbitRecord:
    outcome: str                      # preperiodic | height-diverging | inconclusive
    tail: Optional[int] = None        # minimal m with map^(m+s) x = map^m x
    cycle: Optional[int] = None       # minimal s >= 1
    iterations: Optional[int] = None
    final_height: Optional[float] = None
    budget: Optional[int] = None
    trace: Optional[list] = None

    def is_preperiodic(self):
        return self.outcome == "preperiodic"

    def to_jsonable(self):
        out = {"outcome": self.outcome}
        for k in ("tail", "cycle", "iterations", "budget"):
            v = getattr(self, k)
            if v is not None:
                out[k] = v
        if self.final_height is not None:
            out["final_height"] = round(self.final_height, 6)
        if self.trace is not None:
            out["trace"] = [str(t) for t in self.trace]
        return out


def orbit(x0, rf_map: RationalFunction, budget: int = 100,
          height_threshold: Optional[float] = None,
          collect_trace: bool = False) -> OrbitRecord:
    """Iterate exactly and classify the orbit.

    Finite coefficient fields always terminate in a preperiodic record if
    the budget covers the state space.  In characteristic zero an exact
    repetition gives preperiodicity, a naive height beyond the threshold
    (default 50 * initial + 50) gives divergence, and otherwise the budget
    is exhausted inconclusively.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    char_zero = rf_map.field.characteristic == 0
    if char_zero and height_threshold is None:
        height_threshold = 50.0 * naive_height(x0) + 50.0
    seen = {_orbit_key(x0): 0}
    points = [x0]
    current = x0
    for step in range(1, budget + 1):
        current = rf_map.evaluate_projective(current)
        key = _orbit_key(current)
        if key in seen:
            first = seen[key]
            return OrbitRecord("preperiodic", tail=first, cycle=step - first,
                               trace=points if collect_trace else None)
        if char_zero and current is not INFINITY:
            h = naive_height(current)
            if h > height_threshold:
                points.append(current)
                return OrbitRecord("height-diverging", iterations=step,
                                   final_height=h,
                                   trace=points if collect_trace else None)
        seen[key] = step
        points.append(current)
    return OrbitRecord("inconclusive", budget=budget,
                       trace=points if collect_trace else None)


def _orbit_key(x):
    return "inf" if x is INFINITY else x


@dataclass
class TorsionOrderReport:
    order: int
    prime: Optional[int]
    x_coordinates: list
    orbits: list                      # (x, map-a record, map-b record)
    closed_under_maps: bool
    all_preperiodic: bool

    def to_jsonable(self):
        return {
            "order": self.order,
            "prime": self.prime,
            "x_coordinates": [str(x) for x in self.x_coordinates],
            "orbits": [
                {"x": str(x), "first": ra.to_jsonable(), "second": rb.to_jsonable()}
                for x, ra, rb in self.orbits
            ],
            "closed_under_maps": self.closed_under_maps,
            "all_preperiodic": self.all_preperiodic,
        }


@dataclass
class TorsionSuiteReport:
    entries: list
    all_ok: bool
    note: str = ("preperiodicity of torsion is sampled over finite reductions "
                 "at the listed orders; density of preperiodic diagonal points "
                 "is a theorem, not a computation")

    def to_jsonable(self):
        return {"entries": [e.to_jsonable() for e in self.entries],
                "all_ok": self.all_ok, "note": self.note}


def torsion_preperiodicity_suite(curve: EllipticCurve, multiplier,
                                 orders=DEFAULT_TORSION_ORDERS,
                                 prime_bound: int = 1000) -> TorsionSuiteReport:
    """For each order n, find a split prime where the reduced curve has full
    n-torsion, and check every n-torsion x-coordinate is preperiodic under
    the reduced x-maps of the multiplier and of its conjugate (so diagonal
    points (t, t) are preperiodic under the product map), and that orbits
    stay inside the n-torsion x-coordinates."""
    endo = multiplier if isinstance(multiplier, Endomorphism) \
        else Endomorphism(curve, multiplier)
    lm = build_lattes(endo)
    lm_conj = build_lattes(endo.conjugate())
    entries = []
    for n in orders:
        if n > 8:
            raise ValueError("torsion orders above 8 are out of scope")
        prime, reduced, torsion = _find_full_torsion_prime(curve, n, prime_bound)
        pf = reduced.field
        map_a = reduce_map(lm.map, pf, reduced.cm_unit)
        map_b = reduce_map(lm_conj.map, pf, reduced.cm_unit)
        xs = [INFINITY] + sorted(
            {pt.x for pt in torsion if not pt.is_infinity()},
            key=lambda e: e.value)
        allowed = {_orbit_key(x) for x in xs}
        budget = pf.p + 2
        orbits = []
        closed = True
        all_pre = True
        for x in xs:
            ra = orbit(x, map_a, budget=budget, collect_trace=True)
            rb = orbit(x, map_b, budget=budget, collect_trace=True)
            for rec in (ra, rb):
                all_pre = all_pre and rec.is_preperiodic()
                closed = closed and all(_orbit_key(t) in allowed for t in rec.trace)
                rec.trace = None  # traces are only needed for the closure check
            orbits.append((x, ra, rb))
        entries.append(TorsionOrderReport(n, prime, xs, orbits, closed, all_pre))
    return TorsionSuiteReport(entries, all(e.all_preperiodic and e.closed_under_maps
                                           for e in entries))


def _find_full_torsion_prime(curve, n, prime_bound):
    """First split prime of good reduction where the reduced curve contains
    the full n-torsion (n * n points killed by n)."""
    for p in split_primes(prime_bound):
        try:
            reduced = reduce_curve(curve, p)
        except ValueError:
            continue
        points = reduced.points()
        torsion = [pt for pt in points if (n * pt).is_infinity()]
        if len(torsion) == n * n:
            return p, reduced, torsion
    raise ValueError("no split prime below %d has full %d-torsion" % (prime_bound, n))


@dataclass
class EscapeReport:
    n_max: int
    equal_iterates: list
    first_equal: Optional[int]
    certificate: Optional[PairCheckReport]
    distinct_for_all_checked: bool
    ok: bool

    def to_jsonable(self):
        out = {
            "n_max": self.n_max,
            "equal_iterates": self.equal_iterates,
            "first_equal": self.first_equal,
            "distinct_for_all_checked": self.distinct_for_all_checked,
            "ok": self.ok,
        }
        if self.first_equal == 1:
            out["note"] = "diagonal invariant: the two maps already agree"
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_jsonable()
        return out


def diagonal_escape_check(phi: RationalFunction, psi: RationalFunction,
                          n_max: int = 3, multiplier=None) -> EscapeReport:
    """Verify the iterates phi^n and psi^n stay distinct for n <= n_max and
    attach the algebraic certificate that carries the claim for every n
    (the multiplier-to-conjugate ratio is not a root of unity)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    equal = []
    fp, gp = phi, psi
    for n in range(1, n_max + 1):
        if fp == gp:
            equal.append(n)
        if n < n_max:
            fp = phi.compose(fp)
            gp = psi.compose(gp)
    certificate = None
    if multiplier is not None:
        alpha = multiplier if hasattr(multiplier, "conjugate") else Q_I(list(multiplier))
        certificate = counterexample_pair_check(alpha)
    distinct = not equal
    ok = distinct and (certificate.ok if certificate is not None else True)
    return EscapeReport(n_max, equal, equal[0] if equal else None,
                        certificate, distinct, ok)


@dataclass
class HeightProbeReport:
    heights: list
    ratios: list
    note: str = ""

    def to_jsonable(self):
        return {"heights": [round(h, 6) for h in self.heights],
                "ratios": [round(r, 6) for r in self.ratios],
                "note": self.note}


def height_growth_probe(rf_map: RationalFunction, x0, steps: int = 4) -> HeightProbeReport:
    """Successive naive heights under exact iteration; for a degree-d map
    the ratio tends to d.  Hitting infinity or a repeat is reported, not an
    error."""
    if steps > 6:
        raise ValueError("probe steps are capped at 6; coefficients explode")
    if rf_map.field.characteristic != 0:
        raise ValueError("the height probe needs characteristic zero")
    heights = [naive_height(x0)]
    current = x0
    seen = {_orbit_key(x0)}
    note = ""
    for _ in range(steps):
        current = rf_map.evaluate_projective(current)
        if current is INFINITY:
            note = "orbit hit infinity"
            break
        if _orbit_key(current) in seen:
            note = "orbit is preperiodic"
            break
        seen.add(_orbit_key(current))
        heights.append(naive_height(current))
    ratios = []
    for k in range(1, len(heights)):
        if heights[k - 1] > 0:
            ratios.append(heights[k] / heights[k - 1])
        else:
            ratios.append(float("nan"))
            note = note or "zero height start; ratios not applicable"
    return HeightProbeReport(heights, ratios, note)


# ---------------------------------------------------------------------------
# the assembled verification
# ---------------------------------------------------------------------------

@dataclass
class StageResult:
    name: str
    passed: bool
    details: dict = dc_field(default_factory=dict)

    def to_jsonable(self):
        return {"name": self.name, "pass": self.passed,
                "details": _details_jsonable(self.details)}


def _details_jsonable(d):
    out = {}
    for k, v in sorted(d.items()):
        if hasattr(v, "to_jsonable"):
            out[k] = v.to_jsonable()
        elif isinstance(v, (list, tuple)):
            out[k] = [x.to_jsonable() if hasattr(x, "to_jsonable") else
                      (x if isinstance(x, (bool, int, float, str)) or x is None else str(x))
                      for x in v]
        elif isinstance(v, (bool, int, float, str)) or v is None:
            out[k] = v
        else:
            out[k] = str(v)
    return out


@dataclass
class CounterexampleReport:
    stages: list
    passed: bool
    verdict: str

    def to_jsonable(self):
        return {"stages": [s.to_jsonable() for s in self.stages],
                "verdict": self.verdict}


def verify_counterexample(curve: Optional[EllipticCurve] = None,
                          multiplier=(2, 1),
                          orders=DEFAULT_TORSION_ORDERS,
                          n_max: int = 3,
                          prime_bound: int = 1000,
                          expected_maps=None) -> CounterexampleReport:
    """Run the four-stage desk-scale verification for the product system
    built from a multiplier and its conjugate.

    Stages: (1) symbolic x-maps match the golden formulas (for 2 +- i) and
    have degree equal to the norm; (2) the product map is polarized by the
    split divisor with weight > 1; (3) torsion x-coordinates are
    preperiodic under both reduced maps at the sampled orders; (4) the
    iterates stay distinct with the root-of-unity certificate attached.
    ``expected_maps`` overrides the stage-1 golden pair (negative controls).
    """
    from .lattes import default_curve
    if curve is None:
        curve = default_curve()
    endo = Endomorphism(curve, multiplier)
    conj = endo.conjugate()
    stages = []

    lm = build_lattes(endo)
    lm_conj = build_lattes(conj)
    details = {"multiplier": str(endo.multiplier_element()),
               "degree": lm.degree, "conjugate_degree": lm_conj.degree}
    ok1 = lm.degree == endo.degree() and lm_conj.degree == endo.degree()
    golden_pair = expected_maps
    if golden_pair is None and (endo.a, endo.b) in ((2, 1), (2, -1)):
        golden_pair = (golden_map(curve.field, endo.a, endo.b),
                       golden_map(curve.field, conj.a, conj.b))
    if golden_pair is not None:
        match = lm.map == golden_pair[0] and lm_conj.map == golden_pair[1]
        details["golden_formulas_match"] = match
        ok1 = ok1 and match
    stages.append(StageResult("lattes-construction", ok1, details))

    try:
        cert = product_pullback_check(lm, lm_conj)
        ok2 = cert.polarized and cert.is_strict()
        stages.append(StageResult("product-polarization", ok2,
                                  {"certificate": cert,
                                   "weight": cert.weight}))
    except ValueError as exc:
        stages.append(StageResult("product-polarization", False,
                                  {"error": str(exc)}))

    suite = torsion_preperiodicity_suite(curve, endo, orders=orders,
                                         prime_bound=prime_bound)
    stages.append(StageResult("torsion-preperiodicity", suite.all_ok,
                              {"report": suite}))

    escape = diagonal_escape_check(lm.map, lm_conj.map, n_max=n_max,
                                   multiplier=endo.multiplier_element())
    details4 = {"report": escape}
    if escape.certificate is not None and not escape.certificate.ok:
        details4["failure"] = escape.certificate.failed_condition
        if escape.certificate.root_of_unity_order is not None:
            details4["root_of_unity_order"] = escape.certificate.root_of_unity_order
    stages.append(StageResult("diagonal-escape", escape.ok, details4))

    passed = all(s.passed for s in stages)
    if passed:
        verdict = "counterexample verified at desk scale"
    else:
        failing = next(s.name for s in stages if not s.passed)
        verdict = "failed at stage %s" % failing
    return CounterexampleReport(stages, passed, verdict)
