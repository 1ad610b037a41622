"""Exact polarizability certificates and x-coordinate dynamics for CM
elliptic curves."""

__version__ = "0.1.0"

from .fields import (
    Q,
    Q_I,
    Q_ZETA5,
    NumberFieldSpec,
    QuadraticExtension,
    Rational,
    conjugate,
    field_from_spec,
    format_element,
    is_rational_integer,
    is_root_of_unity,
    parse_element,
)
from .rfunc import INFINITY, Polynomial, RationalFunction, rf_compose, roots_in_field
from .polarize import (
    IntegerMatrix,
    PairCheckReport,
    PolarizationCertificate,
    cm_polarization_check,
    counterexample_pair_check,
    matrix_polarization_check,
    matrix_power_coincidence,
    weight_division,
)
from .curves import (
    CurveFunction,
    CurvePoint,
    EllipticCurve,
    Endomorphism,
    KernelData,
    divisor_sum_oracle,
    kernel,
    kernel_x_polynomial,
    two_torsion_criterion,
)
from .lattes import (
    LattesMap,
    build_lattes,
    default_curve,
    golden_map,
    kernel_x_coordinates,
    product_pullback_check,
    pullback_degree,
    verify_semiconjugacy,
)
from .dynamics import (
    DEFAULT_SEED,
    OrbitRecord,
    diagonal_escape_check,
    height_growth_probe,
    naive_height,
    orbit,
    torsion_preperiodicity_suite,
    verify_counterexample,
)
from .reduction import (
    FrobeniusData,
    PrimeField,
    identify_frobenius,
    reduce_curve,
    reduce_map,
    s3_membership,
    verify_frobenius_verschiebung,
)
