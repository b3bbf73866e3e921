"""Imaginary quadratic (Bianchi) congruence subgroups: indices, cusp counts,
the index^(2/3) Betti bound, and the Lefschetz corollary for levels given by
a rational integer.

Class numbers come from counting reduced binary quadratic forms; unit
counts are 4 and 6 for the Gaussian and Eisenstein fields and 2 otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConsistencyError, SettingError, UnsupportedFieldError
from .fields import (
    BaseField,
    Splitting,
    quadratic_extension,
    splitting_in_extension,
    primes_above,
)
from .numtheory import factor_integer, squarefree_part, zeta_two


def class_number(radicand: int) -> int:
    """Class number of the imaginary quadratic field of the given squarefree
    negative radicand, by counting reduced forms (a, b, c) of the field
    discriminant: b^2 - 4ac = D, |b| <= a <= c, and b >= 0 whenever
    |b| = a or a = c."""
    if radicand >= 0 or squarefree_part(radicand) != radicand:
        raise UnsupportedFieldError(
            f"radicand must be squarefree and negative, got {radicand}"
        )
    disc = radicand if radicand % 4 == 1 else 4 * radicand
    count = 0
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a, a + 1):
            if (b - disc) % 2:
                continue
            if (b * b - disc) % (4 * a):
                continue
            c = (b * b - disc) // (4 * a)
            if c < a:
                continue
            if b < 0 and (c == a or -b == a):
                continue
            count += 1
        a += 1
    return count


@dataclass(frozen=True)
class BianchiField:
    radicand: int
    discriminant: int
    class_number: int
    unit_order: int
    zeta_two_value: float
    zeta_tolerance: float

    def __str__(self) -> str:
        return f"Q(sqrt({self.radicand}))"


def bianchi_field(radicand: int, zeta_tol: float = 1e-10) -> BianchiField:
    if radicand >= 0 or squarefree_part(radicand) != radicand:
        raise UnsupportedFieldError(
            f"radicand must be squarefree and negative, got {radicand}"
        )
    disc = radicand if radicand % 4 == 1 else 4 * radicand
    units = 4 if radicand == -1 else 6 if radicand == -3 else 2
    return BianchiField(
        radicand,
        disc,
        class_number(radicand),
        units,
        zeta_two(disc, zeta_tol),
        zeta_tol,
    )


@dataclass(frozen=True)
class PrimeOfE:
    p: int
    splitting: Splitting
    selector: str  # "only" | "first" | "second"
    norm: int

    def __str__(self) -> str:
        suffix = {"only": "", "first": ".1", "second": ".2"}[self.selector]
        return f"{self.p}{suffix}"


@dataclass(frozen=True)
class IdealOfE:
    field: BianchiField
    entries: tuple[tuple[PrimeOfE, int], ...]

    @property
    def norm(self) -> int:
        out = 1
        for prime, exp in self.entries:
            out *= prime.norm ** exp
        return out

    def __str__(self) -> str:
        if not self.entries:
            return "1"
        return "*".join(
            str(q) if e == 1 else f"{q}^{e}" for q, e in self.entries
        )


def _splitting_of(field: BianchiField, p: int) -> Splitting:
    ext = quadratic_extension(BaseField.rationals(), field.radicand)
    return splitting_in_extension(ext, primes_above(BaseField.rationals(), p)[0])


def ideal_of_extension(field: BianchiField, m: int) -> IdealOfE:
    """The ideal m * O_E for a positive integer m, in factored form."""
    if m < 1:
        raise ValueError(f"need a positive integer, got {m}")
    entries = []
    for p, e in factor_integer(m):
        split = _splitting_of(field, p)
        if split is Splitting.SPLIT:
            entries.append((PrimeOfE(p, split, "first", p), e))
            entries.append((PrimeOfE(p, split, "second", p), e))
        elif split is Splitting.INERT:
            entries.append((PrimeOfE(p, split, "only", p * p), e))
        else:
            entries.append((PrimeOfE(p, split, "only", p), 2 * e))
    return IdealOfE(field, tuple(entries))


def prime_power_ideal(field: BianchiField, p: int, k: int) -> IdealOfE:
    """The k-th power of one fixed prime of E over p (the first one when p
    splits); k = 0 gives the unit ideal."""
    if k < 0:
        raise ValueError("exponent must be >= 0")
    if k == 0:
        return IdealOfE(field, ())
    split = _splitting_of(field, p)
    selector = "first" if split is Splitting.SPLIT else "only"
    norm = p * p if split is Splitting.INERT else p
    return IdealOfE(field, ((PrimeOfE(p, split, selector, norm), k),))


def congruence_index(field: BianchiField, ideal: IdealOfE) -> int:
    """[Gamma(1) : Gamma(a)] = N(a)^3 * prod over p | a of (1 - N(p)^-2)."""
    if not ideal.entries:
        return 1
    value = Fraction(ideal.norm) ** 3
    for prime, _ in ideal.entries:
        value *= 1 - Fraction(1, prime.norm ** 2)
    if value.denominator != 1:
        raise ConsistencyError(f"index of {ideal} is not integral: {value}")
    return value.numerator


def cusp_number(
    field: BianchiField, ideal: IdealOfE, allow_unverified: bool = False
) -> int:
    """Number of cusps of the principal congruence subgroup:
    h_E / |units| / N(a) * [Gamma(1):Gamma(a)].

    Levels of norm below 9 are rejected unless explicitly allowed (the cusp
    count presumes a torsion-free level).
    """
    if not ideal.entries:
        raise SettingError("the cusp count needs a proper level")
    if ideal.norm < 9 and not allow_unverified:
        raise SettingError(
            f"norm {ideal.norm} < 9: torsion-freeness unverified "
            "(pass allow_unverified to override)"
        )
    value = Fraction(
        field.class_number * congruence_index(field, ideal),
        field.unit_order * ideal.norm,
    )
    if value.denominator != 1:
        raise ConsistencyError(f"cusp count of {ideal} is not integral: {value}")
    return value.numerator


def cusp_betti_bound(
    field: BianchiField, ideal: IdealOfE, allow_unverified: bool = False
) -> tuple[float, int]:
    """The index^(2/3) lower bound for dim H^1 together with the cusp count
    that dominates it:
    h_E / |units| * zeta_E(2)^(-1/3) * [Gamma(1):Gamma(a)]^(2/3)."""
    cusps = cusp_number(field, ideal, allow_unverified)
    index = congruence_index(field, ideal)
    bound = (
        field.class_number
        / field.unit_order
        * field.zeta_two_value ** (-1 / 3)
        * index ** (2 / 3)
    )
    if bound > cusps + 1e-9:
        raise ConsistencyError(
            f"bound {bound} exceeds the cusp count {cusps} at {ideal}"
        )
    return bound, cusps


def galois_lefschetz_number(radicand: int, level: int) -> Fraction:
    """Lefschetz number of the Galois involution on the principal congruence
    subgroup of level m over Q(sqrt(d)), d squarefree and 1 mod 4 (so the
    extension is unramified over 2; d may be positive):

        -(2^rho * m^3 / 12) * prod over p | m of (1 - p^-2)

    with rho the number of primes dividing d but not m.  Always an even
    negative integer."""
    if radicand in (0, 1) or squarefree_part(radicand) != radicand:
        raise UnsupportedFieldError(f"radicand {radicand} is not admissible")
    if radicand % 4 != 1:
        raise UnsupportedFieldError(
            f"radicand must be 1 mod 4 (unramified over 2), got {radicand}"
        )
    if level < 3:
        raise SettingError(f"level must be >= 3, got {level}")
    rho = sum(1 for p, _ in factor_integer(abs(radicand)) if level % p)
    value = -Fraction(2 ** rho * level ** 3, 12)
    for p, _ in factor_integer(level):
        value *= 1 - Fraction(1, p * p)
    if value.denominator != 1 or value.numerator % 2 or value >= 0:
        raise ConsistencyError(f"Lefschetz value {value} is not an even negative integer")
    return value


@dataclass(frozen=True)
class AsymptoticRow:
    k: int
    index: int
    bound: float
    ratio: float  # bound / index^(2/3)


def split_prime_power_table(
    field: BianchiField, p: int, k_max: int
) -> tuple[AsymptoticRow, ...]:
    """Betti bounds along the tower of powers of one split prime.

    The index is p^(3k) (1 - p^-2) and the ratio column bound/index^(2/3)
    is the constant h_E/|units| * zeta_E(2)^(-1/3); against the bare p^(2k)
    scale the constant picks up the extra factor (1 - p^-2)^(2/3).
    """
    if k_max > 8:
        raise SettingError("k_max is capped at 8")
    if _splitting_of(field, p) is not Splitting.SPLIT:
        raise SettingError(f"{p} does not split in {field}")
    rows = []
    lead = field.class_number / field.unit_order * field.zeta_two_value ** (-1 / 3)
    for k in range(k_max + 1):
        index = congruence_index(field, prime_power_ideal(field, p, k))
        bound = lead * index ** (2 / 3)
        rows.append(AsymptoticRow(k, index, bound, bound / index ** (2 / 3)))
    return tuple(rows)


def asymptotic_csv(rows) -> str:
    lines = ["k,index,bound,ratio"]
    for row in rows:
        lines.append(f"{row.k},{row.index},{row.bound!r},{row.ratio!r}")
    return "\n".join(lines) + "\n"
