"""Fixed-point class counts, Euler characteristics, Lefschetz numbers and
first-Betti-number lower bounds for the Galois involution.

All headline values are exact rationals.  The analytic form of each formula
(the one involving pi^(-2d) * zeta_F(2) * |disc|^(3/2)) is kept purely as a
cross-check: the functional equation

    zeta_F(2) |disc_F|^(3/2) (2 pi^2)^(-d) = (-1)^d zeta_F(-1)

turns it into a rational form, and the exact computations run entirely
through zeta_F(-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .congruence import base_index, congruence_indices, torsion_free_sufficient
from .errors import (
    ConsistencyError,
    SettingError,
    StrongApproximationError,
    TwoAdicUnsupportedError,
)
from .fields import (
    ExtensionSpec,
    FactoredIdeal,
    count_surviving_ramified,
    ideal_divides,
    is_unramified_over_two,
)
from .numtheory import zeta_minus_one, zeta_two
from .quatalg import (
    HyperbolicSetting,
    QuaternionSpec,
    has_strong_approximation,
    place_counts,
    ramified_norm_product,
)


def fixed_point_class_count(
    ext: ExtensionSpec, algebra: QuaternionSpec, ideal: FactoredIdeal
) -> tuple[int, bool]:
    """Number of fixed-point classes of the involution at the given level.

    The value is 2^(c + rho); it is exact when the extension is unramified
    over 2 (the dyadic cohomology factor is then trivial) and otherwise a
    lower bound, flagged by the second component.
    """
    counts = place_counts(algebra, ext)
    rho = count_surviving_ramified(ext, ideal)
    try:
        exact = is_unramified_over_two(ext)
    except TwoAdicUnsupportedError:
        exact = False
    return 2 ** (counts.complexified + rho), exact


def component_euler_characteristic(
    algebra: QuaternionSpec,
    ideal: FactoredIdeal,
    cross_check: bool = True,
    zeta_tol: float = 1e-12,
) -> Fraction:
    """Euler characteristic of one fixed-point component:
    (-1/2)^r * zeta_F(-1) * [K0:K0(a0)] * prod (N(p) - 1)."""
    field = algebra.base
    r = algebra.ramified_real_count
    idx0 = base_index(algebra, ideal)
    delta = ramified_norm_product(algebra)
    chi = Fraction(-1, 2) ** r * zeta_minus_one(field) * idx0 * delta
    if cross_check:
        d = field.degree
        s = algebra.split_real_count
        numeric = (
            (-2.0) ** s
            * (4 * math.pi * math.pi) ** (-d)
            * zeta_two(field, zeta_tol)
            * abs(field.discriminant) ** 1.5
            * idx0
            * delta
        )
        if chi != 0 and abs(numeric / float(chi) - 1) > 1e-9:
            raise ConsistencyError(
                f"Euler characteristic forms disagree: {chi} vs {numeric}"
            )
    return chi


@dataclass(frozen=True)
class LefschetzReport:
    mode: str  # "exact" | "lower_bound"
    sign: int
    value: Fraction | None  # exact mode only; an even integer when torsion-free
    magnitude_bound: Fraction
    degree: int
    split_real: int
    ramified_real: int
    complexified: int
    surviving_ramified: int
    norm_product: int
    index_base: int
    h1_factor_known: bool
    torsion_verified: bool


def lefschetz_magnitude_numeric(
    ext: ExtensionSpec,
    algebra: QuaternionSpec,
    ideal: FactoredIdeal,
    zeta_tol: float = 1e-12,
) -> float:
    """The analytic form 2^(c+rho-r-d) pi^(-2d) zeta_F(2) |disc|^(3/2)
    * prod(N(p)-1) * [K0:K0(a0)], used only for cross-checks."""
    field = algebra.base
    counts = place_counts(algebra, ext)
    rho = count_surviving_ramified(ext, ideal)
    d = field.degree
    return (
        2.0 ** (counts.complexified + rho - counts.ramified_real - d)
        * math.pi ** (-2 * d)
        * zeta_two(field, zeta_tol)
        * abs(field.discriminant) ** 1.5
        * ramified_norm_product(algebra)
        * base_index(algebra, ideal)
    )


def lefschetz_number(
    ext: ExtensionSpec,
    algebra: QuaternionSpec,
    ideal: FactoredIdeal,
    zeta_tol: float = 1e-12,
    cross_check: bool = True,
) -> LefschetzReport:
    """Lefschetz number of the Galois involution on the congruence subgroup
    of the given level: exact when the extension is unramified over 2, and
    otherwise a sign plus a lower bound for the magnitude.

    Two independent exact routes (fixed-class count times component Euler
    characteristic, and the closed form rewritten through zeta_F(-1)) must
    agree, and the analytic form must match to 1e-6 relative.
    """
    if ideal.is_unit_ideal:
        raise SettingError("the Lefschetz number needs a proper level")
    if not has_strong_approximation(algebra, ext):
        raise StrongApproximationError(
            "no archimedean place of the extension splits the algebra"
        )
    field = algebra.base
    counts = place_counts(algebra, ext)
    s, r, c = counts.split_real, counts.ramified_real, counts.complexified
    d = field.degree
    rho = count_surviving_ramified(ext, ideal)
    delta = ramified_norm_product(algebra)
    idx0 = base_index(algebra, ideal)
    torsion = torsion_free_sufficient(ideal)
    sign = -1 if s % 2 else 1

    magnitude = (
        Fraction(2) ** (c + rho - r) * abs(zeta_minus_one(field)) * delta * idx0
    )
    if cross_check and magnitude != 0:
        numeric = lefschetz_magnitude_numeric(ext, algebra, ideal, zeta_tol)
        if abs(numeric / float(magnitude) - 1) > 1e-6:
            raise ConsistencyError(
                f"Lefschetz magnitude forms disagree: {magnitude} vs {numeric}"
            )

    classes, exact = fixed_point_class_count(ext, algebra, ideal)
    value = None
    if exact:
        chi = component_euler_characteristic(
            algebra, ideal, cross_check=cross_check, zeta_tol=zeta_tol
        )
        value = classes * chi
        closed = (
            (-1) ** (s + d)
            * Fraction(2) ** (c + rho - r)
            * zeta_minus_one(field)
            * delta
            * idx0
        )
        if value != closed:
            raise ConsistencyError(
                f"Lefschetz routes disagree: {value} (classes * chi) vs "
                f"{closed} (closed form)"
            )
        if abs(value) != magnitude:
            raise ConsistencyError("exact value does not match its own bound")
        if torsion:
            if value.denominator != 1 or value.numerator % 2:
                raise ConsistencyError(
                    f"Lefschetz number {value} of a torsion-free level "
                    "must be an even integer"
                )
            if value != 0 and (value > 0) != (sign > 0):
                raise ConsistencyError(f"sign of {value} is not (-1)^{s}")
    return LefschetzReport(
        mode="exact" if exact else "lower_bound",
        sign=sign,
        value=value,
        magnitude_bound=magnitude,
        degree=d,
        split_real=s,
        ramified_real=r,
        complexified=c,
        surviving_ramified=rho,
        norm_product=delta,
        index_base=idx0,
        h1_factor_known=exact,
        torsion_verified=torsion,
    )


def betti_lower_bound(setting: HyperbolicSetting, ideal: FactoredIdeal) -> Fraction:
    """Lower bound for dim H^1 of the congruence subgroup as an exact
    rational: 2^(rho - d) (-1)^d zeta_F(-1) prod(N(p)-1) [K0:K0(a0)]
    + (-1)^(s+1)."""
    if ideal.is_unit_ideal:
        raise SettingError("the Betti bound needs a proper level")
    field = setting.base
    d = field.degree
    rho = count_surviving_ramified(setting.extension, ideal)
    main = (
        Fraction(2) ** (rho - d)
        * (-1) ** d
        * zeta_minus_one(field)
        * ramified_norm_product(setting.algebra)
        * base_index(setting.algebra, ideal)
    )
    return main + (-1) ** (setting.split_real + 1)


@dataclass(frozen=True)
class GrowthRow:
    ideal: FactoredIdeal
    index: int  # [Gamma(1) : Gamma(a_i)]
    betti_bound: Fraction
    ratio: float  # betti_bound / index^(1/2)


@dataclass(frozen=True)
class GrowthResult:
    rows: tuple[GrowthRow, ...]
    kappa: float  # min ratio over the sequence


def growth_table(
    setting: HyperbolicSetting, ideals: list[FactoredIdeal]
) -> GrowthResult:
    """Betti bound and index^(1/2)-normalized ratio along a nested sequence
    of levels; kappa is the empirical minimum of the ratios.

    The sequence must be strictly decreasing (each ideal divides the next)
    and every level must pass the torsion-freeness condition.  Each ratio is
    checked against its certified floor
    2^rho (2 pi)^(-2d) |disc|^(3/2) prod(N(p)-1) - index^(-1/2).
    """
    if not ideals:
        raise SettingError("empty ideal sequence")
    for first, second in zip(ideals, ideals[1:]):
        if not ideal_divides(first, second) or first.norm >= second.norm:
            raise SettingError(
                f"sequence not strictly nested at {first} -> {second}"
            )
    rows = []
    field = setting.base
    delta = ramified_norm_product(setting.algebra)
    scale = (2 * math.pi) ** (-2 * field.degree) * abs(field.discriminant) ** 1.5
    for ideal in ideals:
        if not torsion_free_sufficient(ideal):
            raise SettingError(
                f"level {ideal} fails the torsion-freeness condition"
            )
        report = congruence_indices(setting.algebra, setting.extension, ideal)
        bound = betti_lower_bound(setting, ideal)
        ratio = float(bound) / math.sqrt(report.index_extended)
        rho = count_surviving_ramified(setting.extension, ideal)
        floor = 2 ** rho * scale * delta - 1.0 / math.sqrt(report.index_extended)
        if ratio < floor - 1e-12:
            raise ConsistencyError(
                f"growth ratio {ratio} at {ideal} under its certified floor {floor}"
            )
        rows.append(GrowthRow(ideal, report.index_extended, bound, ratio))
    return GrowthResult(tuple(rows), min(row.ratio for row in rows))


def growth_csv(result: GrowthResult) -> str:
    lines = ["ideal,index,betti_bound,ratio"]
    for row in result.rows:
        lines.append(f"{row.ideal},{row.index},{row.betti_bound},{row.ratio!r}")
    return "\n".join(lines) + "\n"
