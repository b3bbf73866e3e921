"""Quaternion algebra over the base field and its ramification data.

Over the rationals the algebra is given by a Hilbert pair (a, b) and the
ramified places are computed from local Hilbert symbols; over a real
quadratic base it is given directly by an explicit even-size set of places.
The derived counts feed every headline formula: s and r split the real
places, c counts ramified real places that acquire a complex place in the
extension, and the norm product multiplies N(p) - 1 over the finite
ramified primes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import (
    SettingError,
    StrongApproximationError,
    TwoAdicUnsupportedError,
    UnsupportedFieldError,
)
from .fields import (
    BaseField,
    ExtensionSpec,
    PrimeOfF,
    Splitting,
    is_unramified_over_two,
    primes_above,
    splitting_in_extension,
    theta_real_signs,
)
from .numtheory import factor_integer, kronecker_symbol


@dataclass(frozen=True)
class QuaternionSpec:
    base: BaseField
    hilbert: tuple[int, int] | None
    ram_finite: tuple[PrimeOfF, ...]
    ram_infinite: tuple[int, ...]

    @property
    def ramified_real_count(self) -> int:
        return len(self.ram_infinite)

    @property
    def split_real_count(self) -> int:
        return self.base.degree - len(self.ram_infinite)

    @property
    def is_split(self) -> bool:
        return not self.ram_finite and not self.ram_infinite

    def ramified_at(self, prime: PrimeOfF) -> bool:
        return prime in self.ram_finite

    def __str__(self) -> str:
        if self.hilbert:
            return f"({self.hilbert[0]},{self.hilbert[1]} | {self.base})"
        places = [str(q) for q in self.ram_finite]
        places += [f"inf{i + 1}" for i in self.ram_infinite]
        return f"quaternion algebra over {self.base} ramified at {{{', '.join(places)}}}"


def _split_valuation(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def hilbert_symbol(a: int, b: int, p: int) -> int:
    """Local Hilbert symbol (a, b)_p over the rationals at a finite prime."""
    if a == 0 or b == 0:
        raise ValueError("hilbert symbol needs nonzero arguments")
    alpha, u = _split_valuation(a, p)
    beta, w = _split_valuation(b, p)
    if p == 2:
        eps = ((u - 1) // 2) * ((w - 1) // 2)
        omega = alpha * ((w * w - 1) // 8) + beta * ((u * u - 1) // 8)
        return -1 if (eps + omega) % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return (
        sign
        * kronecker_symbol(u, p) ** (beta % 2)
        * kronecker_symbol(w, p) ** (alpha % 2)
    )


def hilbert_symbol_real(a: int, b: int) -> int:
    return -1 if (a < 0 and b < 0) else 1


def ramification_set(a: int, b: int) -> QuaternionSpec:
    """Ramified places of the rational quaternion algebra (a, b)."""
    if a == 0 or b == 0:
        raise ValueError("Hilbert pair entries must be nonzero")
    field = BaseField.rationals()
    candidates = {2}
    for n in (a, b):
        candidates.update(p for p, _ in factor_integer(abs(n)))
    finite = tuple(
        primes_above(field, p)[0]
        for p in sorted(candidates)
        if hilbert_symbol(a, b, p) == -1
    )
    infinite = (0,) if hilbert_symbol_real(a, b) == -1 else ()
    spec = QuaternionSpec(field, (a, b), finite, infinite)
    # the product formula forces an even number of ramified places
    assert (len(finite) + len(infinite)) % 2 == 0, (a, b, finite, infinite)
    return spec


def quaternion_algebra(
    base: BaseField,
    *,
    hilbert: tuple[int, int] | None = None,
    finite=(),
    infinite=(),
) -> QuaternionSpec:
    """Construct the algebra from a Hilbert pair (rational base only) or an
    explicit ramification set, validated for even parity."""
    if hilbert is not None:
        if not base.is_rationals:
            raise UnsupportedFieldError(
                "Hilbert pairs are supported over the rationals only; "
                "give the ramification set explicitly"
            )
        return ramification_set(*hilbert)
    finite = tuple(sorted(set(finite)))
    infinite = tuple(sorted(set(infinite)))
    for place in infinite:
        if place not in base.real_places():
            raise UnsupportedFieldError(f"no real place {place} on {base}")
    for prime in finite:
        if not isinstance(prime, PrimeOfF):
            raise UnsupportedFieldError(f"finite places must be primes, got {prime}")
    if (len(finite) + len(infinite)) % 2:
        raise UnsupportedFieldError(
            "a quaternion algebra ramifies at an even number of places"
        )
    return QuaternionSpec(base, None, finite, infinite)


def matrix_algebra(base: BaseField) -> QuaternionSpec:
    return QuaternionSpec(base, None, (), ())


def ramified_norm_product(algebra: QuaternionSpec) -> int:
    """Product of N(p) - 1 over the finite ramified primes (empty product 1)."""
    out = 1
    for prime in algebra.ram_finite:
        out *= prime.norm - 1
    return out


class PlaceCounts(NamedTuple):
    split_real: int  # real places of F splitting the algebra
    ramified_real: int  # real places of F ramified in the algebra
    complexified: int  # ramified real places under a complex place of E


def place_counts(algebra: QuaternionSpec, ext: ExtensionSpec) -> PlaceCounts:
    if algebra.base != ext.base:
        raise SettingError("algebra and extension live over different base fields")
    signs = theta_real_signs(ext)
    complexified = sum(1 for v in algebra.ram_infinite if signs[v] < 0)
    return PlaceCounts(
        algebra.split_real_count, algebra.ramified_real_count, complexified
    )


@dataclass(frozen=True)
class PlaceOfE:
    kind: str  # "finite" | "real"
    under: PrimeOfF | int
    index: int  # 1 or 2, labelling the two places over a split place


def extension_ramification(
    algebra: QuaternionSpec, ext: ExtensionSpec
) -> tuple[tuple[PlaceOfE, ...], bool]:
    """Ramified places of the base-changed algebra over E, plus whether it is
    a division algebra.  A place of E over v is ramified exactly when v is
    ramified in the base algebra and E does not extend the local field there,
    i.e. v splits (finite case) or stays real (infinite case)."""
    places: list[PlaceOfE] = []
    for prime in algebra.ram_finite:
        if splitting_in_extension(ext, prime) is Splitting.SPLIT:
            places.append(PlaceOfE("finite", prime, 1))
            places.append(PlaceOfE("finite", prime, 2))
    signs = theta_real_signs(ext)
    for v in algebra.ram_infinite:
        if signs[v] > 0:
            places.append(PlaceOfE("real", v, 1))
            places.append(PlaceOfE("real", v, 2))
    return tuple(places), bool(places)


def has_strong_approximation(algebra: QuaternionSpec, ext: ExtensionSpec) -> bool:
    """Whether some archimedean place of E splits the base-changed algebra.

    Complex places always split it; a real place over v splits it exactly
    when v is not ramified in the base algebra.
    """
    signs = theta_real_signs(ext)
    for v in algebra.base.real_places():
        if signs[v] < 0:
            return True
        if v not in algebra.ram_infinite:
            return True
    return False


@dataclass(frozen=True)
class HyperbolicSetting:
    base: BaseField
    extension: ExtensionSpec
    algebra: QuaternionSpec
    split_real: int
    ramified_real: int
    complexified: int
    division: bool
    unramified_over_two: bool | None  # None: undecidable (real quadratic base)

    @property
    def distinguished_place(self) -> int:
        signs = theta_real_signs(self.extension)
        return next(v for v in self.base.real_places() if signs[v] < 0)


def validate_hyperbolic(
    base: BaseField,
    ext: ExtensionSpec,
    algebra: QuaternionSpec,
    require_division: bool = True,
) -> HyperbolicSetting:
    """Check the hyperbolic workflow preconditions and bundle the derived
    counts.  Each failed condition is reported individually."""
    problems = []
    if ext.base != base or algebra.base != base:
        raise SettingError("extension/algebra base field mismatch")
    if ext.signature != 1:
        problems.append(
            f"extension must have exactly one complex place, has {ext.signature}"
        )
        v0 = None
    else:
        signs = theta_real_signs(ext)
        v0 = next(v for v in base.real_places() if signs[v] < 0)
        missing = [
            v for v in base.real_places() if v != v0 and v not in algebra.ram_infinite
        ]
        if missing:
            problems.append(
                "algebra must ramify at every real place except the distinguished "
                f"one; split at {missing}"
            )
    _, division = extension_ramification(algebra, ext)
    if require_division and not division:
        problems.append("the base-changed algebra is not a division algebra")
    if problems:
        raise SettingError("; ".join(problems))
    if not has_strong_approximation(algebra, ext):
        raise StrongApproximationError(
            "no archimedean place of the extension splits the algebra"
        )
    counts = place_counts(algebra, ext)
    assert counts.complexified == 1 - counts.split_real
    try:
        unram2 = is_unramified_over_two(ext)
    except TwoAdicUnsupportedError:
        unram2 = None
    return HyperbolicSetting(
        base,
        ext,
        algebra,
        counts.split_real,
        counts.ramified_real,
        counts.complexified,
        division,
        unram2,
    )
