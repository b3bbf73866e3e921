"""Congruence-subgroup indices from closed-form local group orders.

Reduction mod p^e of the norm-one group scheme is surjective (the scheme is
smooth), so the global index is the product over the primes dividing the
level of the order of the finite reduction.  The base-field orders are

    N^{3e} (1 - N^-2)   algebra split at the prime,
    N^{3e} (1 + N^-1)   algebra ramified,

and the extended orders follow the splitting of the prime in E: the square
of the base order at split primes, and at non-split primes the analogous
order over the extension ring.  All five outputs are integers, and the
per-prime ratio |G0|^2/|G| lands in a small table of rational numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConsistencyError
from .fields import (
    ExtensionSpec,
    FactoredIdeal,
    PrimeOfF,
    Splitting,
    integer_below,
    splitting_in_extension,
)
from .numtheory import is_prime, zeta_two
from .quatalg import QuaternionSpec


@dataclass(frozen=True)
class LocalProfile:
    prime: PrimeOfF
    exponent: int
    d0_ramified: bool
    splitting: Splitting | None = None


@dataclass(frozen=True)
class LocalIndexFactor:
    profile: LocalProfile
    order_base: int
    order_extended: int
    q_squared: Fraction


@dataclass(frozen=True)
class IndexReport:
    index_base: int  # [K0 : K0(a0)]
    index_extended: int  # [K : K(a0)], also [Gamma(1) : Gamma(a0)]
    per_prime: tuple[LocalIndexFactor, ...]
    ratio_squared: Fraction  # index_base^2 / index_extended


def base_group_order(norm: int, exponent: int, d0_ramified: bool) -> int:
    """Order of the reduced norm-one group over O_F / p^e."""
    if exponent < 1:
        raise ValueError("exponent must be >= 1")
    n = norm
    if d0_ramified:
        return n ** (3 * exponent - 1) * (n + 1)
    return n ** (3 * exponent - 2) * (n * n - 1)


def extended_group_order(
    norm: int, exponent: int, splitting: Splitting, d0_ramified: bool
) -> int:
    """Order of the extension-level norm-one group over O_F / p^e."""
    n, e = norm, exponent
    if splitting is Splitting.SPLIT:
        return base_group_order(n, e, d0_ramified) ** 2
    if splitting is Splitting.INERT:
        if d0_ramified:
            return n ** (6 * e - 2) * (n * n - 1)
        return n ** (6 * e - 4) * (n ** 4 - 1)
    if d0_ramified:
        return n ** (6 * e - 1) * (n + 1)
    return n ** (6 * e - 2) * (n * n - 1)


def index_ratio_squared(profile: LocalProfile) -> Fraction:
    """The square of |G0(O/p^e)| / sqrt(|G(O/p^e)|), independent of e."""
    if profile.splitting is None:
        raise ValueError("profile carries no splitting data")
    n = profile.prime.norm
    if profile.splitting is Splitting.SPLIT:
        return Fraction(1)
    if profile.splitting is Splitting.INERT:
        if profile.d0_ramified:
            return Fraction(n + 1, n - 1)
        return Fraction(n * n - 1, n * n + 1)
    if profile.d0_ramified:
        return Fraction(n + 1, n)
    return Fraction(n * n - 1, n * n)


def base_index(algebra: QuaternionSpec, ideal: FactoredIdeal) -> int:
    """[K0 : K0(a0)] as a product of local orders."""
    out = 1
    for prime, e in ideal.entries:
        out *= base_group_order(prime.norm, e, algebra.ramified_at(prime))
    return out


def congruence_indices(
    algebra: QuaternionSpec, ext: ExtensionSpec, ideal: FactoredIdeal
) -> IndexReport:
    """Both indices with their per-prime factors; the unit ideal gives 1."""
    factors = []
    idx0 = 1
    idx = 1
    ratio = Fraction(1)
    for prime, e in ideal.entries:
        ram = algebra.ramified_at(prime)
        split = splitting_in_extension(ext, prime)
        profile = LocalProfile(prime, e, ram, split)
        g0 = base_group_order(prime.norm, e, ram)
        g = extended_group_order(prime.norm, e, split, ram)
        q2 = index_ratio_squared(profile)
        if Fraction(g0 * g0, g) != q2:
            raise ConsistencyError(
                f"local ratio mismatch at {prime}: {Fraction(g0 * g0, g)} != {q2}"
            )
        factors.append(LocalIndexFactor(profile, g0, g, q2))
        idx0 *= g0
        idx *= g
        ratio *= q2
    if Fraction(idx0 * idx0, idx) != ratio:
        raise ConsistencyError("global index ratio disagrees with the local product")
    return IndexReport(idx0, idx, tuple(factors), ratio)


@dataclass(frozen=True)
class RatioBound:
    ratio: float
    bound: float
    holds: bool


def check_index_ratio_bound(
    algebra: QuaternionSpec,
    ext: ExtensionSpec,
    ideal: FactoredIdeal,
    zeta_tol: float = 1e-12,
) -> RatioBound:
    """[K0:K0(a0)] / sqrt([K:K(a0)]) against its lower bound.

    The generic bound is 1/zeta_F(2); it improves to 1 when every prime
    dividing the level is split in E or ramified in the algebra.
    """
    report = congruence_indices(algebra, ext, ideal)
    ratio = report.index_base / math.sqrt(report.index_extended)
    easy = all(
        f.profile.splitting is Splitting.SPLIT or f.profile.d0_ramified
        for f in report.per_prime
    )
    bound = 1.0 if easy else 1.0 / zeta_two(ext.base, zeta_tol)
    return RatioBound(ratio, bound, ratio >= bound - 1e-12)


def torsion_free_sufficient(ideal: FactoredIdeal) -> bool:
    """Sufficient condition for the congruence subgroup to be torsion-free:
    the ideal meets the rational integers in a non-prime, non-unit ideal."""
    m = integer_below(ideal)
    return m != 1 and not is_prime(m)
