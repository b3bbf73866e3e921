"""Exact arithmetic invariants of congruence subgroups in quaternionic
groups: indices, Euler characteristics, Lefschetz numbers of the Galois
involution, first-Betti-number lower bounds, the Bianchi analogues, and a
brute-force finite-ring oracle for the local counting lemmas."""

from .fields import (
    BaseField,
    ExtensionSpec,
    FactoredIdeal,
    PrimeOfF,
    Splitting,
    ideal_from_int,
    parse_ideal,
    primes_above,
    quadratic_extension,
    splitting_in_extension,
)
from .quatalg import (
    HyperbolicSetting,
    QuaternionSpec,
    matrix_algebra,
    quaternion_algebra,
    ramification_set,
    validate_hyperbolic,
)
from .congruence import congruence_indices, torsion_free_sufficient
from .lefschetz import betti_lower_bound, growth_table, lefschetz_number
from .bianchi import bianchi_field, cusp_number, galois_lefschetz_number

__version__ = "0.1.0"

__all__ = [
    "BaseField",
    "ExtensionSpec",
    "FactoredIdeal",
    "HyperbolicSetting",
    "PrimeOfF",
    "QuaternionSpec",
    "Splitting",
    "betti_lower_bound",
    "bianchi_field",
    "congruence_indices",
    "cusp_number",
    "galois_lefschetz_number",
    "growth_table",
    "ideal_from_int",
    "lefschetz_number",
    "matrix_algebra",
    "parse_ideal",
    "primes_above",
    "quadratic_extension",
    "quaternion_algebra",
    "ramification_set",
    "splitting_in_extension",
    "torsion_free_sufficient",
    "validate_hyperbolic",
]
