"""Base field, relative quadratic extension, primes and factored ideals.

The base field F is the rationals or a real quadratic field; the extension
E = F(sqrt(theta)) is described by theta together with derived data: the
number of complex places, the odd primes of F that ramify in E, and the
splitting type of any prime of F in E.  Ideals of F are kept in fully
factored form throughout, which is all the downstream Euler products need.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import TwoAdicUnsupportedError, UnsupportedFieldError
from .numtheory import (
    factor_integer,
    is_prime,
    kronecker_symbol,
    sqrt_mod,
    squarefree_part,
)


class Splitting(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@dataclass(frozen=True)
class BaseField:
    kind: str  # "rationals" | "real_quadratic"
    radicand: int | None
    degree: int
    discriminant: int

    @classmethod
    def rationals(cls) -> "BaseField":
        return cls("rationals", None, 1, 1)

    @classmethod
    def real_quadratic(cls, radicand: int) -> "BaseField":
        if radicand <= 1 or squarefree_part(radicand) != radicand:
            raise UnsupportedFieldError(
                f"real quadratic radicand must be squarefree and > 1, got {radicand}"
            )
        disc = radicand if radicand % 4 == 1 else 4 * radicand
        return cls("real_quadratic", radicand, 2, disc)

    @property
    def is_rationals(self) -> bool:
        return self.kind == "rationals"

    def real_places(self) -> tuple[int, ...]:
        """Indices of the real embeddings; for a quadratic field the place i
        sends sqrt(radicand) to (-1)^i times the positive root."""
        return tuple(range(self.degree))

    def __str__(self) -> str:
        return "Q" if self.is_rationals else f"Q(sqrt({self.radicand}))"


_SELECTOR_ORDER = {"only": 0, "first_root": 1, "second_root": 2}


@dataclass(frozen=True, order=True)
class PrimeOfF:
    p: int
    residue_degree: int
    ramification: int
    selector: str  # "only" | "first_root" | "second_root"
    norm: int

    def __str__(self) -> str:
        if self.selector == "first_root":
            return f"{self.p}.1"
        if self.selector == "second_root":
            return f"{self.p}.2"
        return str(self.p)


def primes_above(field: BaseField, p: int) -> list[PrimeOfF]:
    """The primes of F over the rational prime p, canonically ordered.

    For a split prime, first_root is the prime containing
    (p, sqrt(radicand) - t) with t the least non-negative root of
    x^2 = radicand mod p.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if field.is_rationals:
        return [PrimeOfF(p, 1, 1, "only", p)]
    symbol = kronecker_symbol(field.discriminant, p)
    if symbol == 1:
        return [
            PrimeOfF(p, 1, 1, "first_root", p),
            PrimeOfF(p, 1, 1, "second_root", p),
        ]
    if symbol == -1:
        return [PrimeOfF(p, 2, 1, "only", p * p)]
    return [PrimeOfF(p, 1, 2, "only", p)]


def _canonical_root(field: BaseField, p: int) -> int:
    """Least non-negative root of x^2 = radicand mod p (split p only)."""
    t = sqrt_mod(field.radicand, p)
    assert t is not None
    return min(t, (p - t) % p)


# ---------------------------------------------------------------------------
# Factored ideals of O_F


@dataclass(frozen=True)
class FactoredIdeal:
    field: BaseField
    entries: tuple[tuple[PrimeOfF, int], ...]

    def __post_init__(self):
        seen = set()
        for prime, exp in self.entries:
            if exp < 1:
                raise ValueError("ideal exponents must be >= 1")
            key = (prime.p, prime.selector)
            if key in seen:
                raise ValueError(f"repeated prime {prime} in ideal")
            seen.add(key)

    @property
    def norm(self) -> int:
        out = 1
        for prime, exp in self.entries:
            out *= prime.norm ** exp
        return out

    @property
    def is_unit_ideal(self) -> bool:
        return not self.entries

    def exponent_of(self, prime: PrimeOfF) -> int:
        for q, exp in self.entries:
            if q == prime:
                return exp
        return 0

    def __str__(self) -> str:
        return format_ideal(self)


def _sorted_entries(entries) -> tuple[tuple[PrimeOfF, int], ...]:
    return tuple(
        sorted(entries, key=lambda pe: (pe[0].p, _SELECTOR_ORDER[pe[0].selector]))
    )


def ideal_from_entries(field: BaseField, entries) -> FactoredIdeal:
    return FactoredIdeal(field, _sorted_entries(entries))


def ideal_one(field: BaseField) -> FactoredIdeal:
    return FactoredIdeal(field, ())


def ideal_from_int(field: BaseField, m: int) -> FactoredIdeal:
    """The ideal m * O_F in factored form, m a positive integer."""
    if m < 1:
        raise ValueError(f"need a positive integer, got {m}")
    entries = []
    for p, e in factor_integer(m):
        for prime in primes_above(field, p):
            entries.append((prime, e * prime.ramification))
    return ideal_from_entries(field, entries)


def ideal_mul(a: FactoredIdeal, b: FactoredIdeal) -> FactoredIdeal:
    if a.field != b.field:
        raise ValueError("ideals over different fields")
    exps: dict[PrimeOfF, int] = {}
    for prime, e in a.entries + b.entries:
        exps[prime] = exps.get(prime, 0) + e
    return ideal_from_entries(a.field, exps.items())


def ideal_divides(a: FactoredIdeal, b: FactoredIdeal) -> bool:
    """Whether a divides b, i.e. b is contained in a."""
    return all(b.exponent_of(prime) >= e for prime, e in a.entries)


def integer_below(ideal: FactoredIdeal) -> int:
    """Positive generator of (the ideal) intersected with the integers.

    Per rational prime this is p to the max over the primes above of
    ceil(exponent / ramification index).
    """
    by_p: dict[int, int] = {}
    for prime, e in ideal.entries:
        need = -(-e // prime.ramification)
        by_p[prime.p] = max(by_p.get(prime.p, 0), need)
    out = 1
    for p, e in by_p.items():
        out *= p ** e
    return out


_IDEAL_TOKEN = re.compile(r"^(\d+)(?:\.([12]))?(?:\^(\d+))?$")


def format_ideal(ideal: FactoredIdeal) -> str:
    if ideal.is_unit_ideal:
        return "1"
    parts = []
    for prime, exp in ideal.entries:
        parts.append(str(prime) if exp == 1 else f"{prime}^{exp}")
    return "*".join(parts)


def parse_ideal(field: BaseField, text: str) -> FactoredIdeal:
    """Parse the textual form, e.g. "11.1^2*3" (split primes carry .1/.2)."""
    text = text.strip()
    if text == "1":
        return ideal_one(field)
    entries = []
    for token in text.split("*"):
        m = _IDEAL_TOKEN.match(token.strip())
        if not m:
            raise ValueError(f"bad ideal token {token!r}")
        p = int(m.group(1))
        exp = int(m.group(3)) if m.group(3) else 1
        above = primes_above(field, p)
        if m.group(2):
            wanted = "first_root" if m.group(2) == "1" else "second_root"
            match = [q for q in above if q.selector == wanted]
            if not match:
                raise ValueError(f"{p} does not split in {field}; {token!r} invalid")
            entries.append((match[0], exp))
        else:
            if len(above) > 1:
                raise ValueError(
                    f"{p} splits in {field}; use {p}.1 or {p}.2 in {token!r}"
                )
            entries.append((above[0], exp))
    return ideal_from_entries(field, entries)


# ---------------------------------------------------------------------------
# The relative quadratic extension E = F(sqrt(theta))


@dataclass(frozen=True)
class ExtensionSpec:
    base: BaseField
    theta: int | tuple[int, int]
    signature: int  # number of complex places of E
    ramified_primes: tuple[PrimeOfF, ...]

    @property
    def theta_pair(self) -> tuple[int, int]:
        if isinstance(self.theta, tuple):
            return self.theta
        return (self.theta, 0)

    @property
    def reduced_theta(self) -> int:
        """Squarefree part of theta (rational base only)."""
        if not self.base.is_rationals:
            raise UnsupportedFieldError("reduced_theta only applies over Q")
        return squarefree_part(self.theta_pair[0])

    def __str__(self) -> str:
        a, b = self.theta_pair
        inner = str(a) if b == 0 else f"{a}+{b}*sqrt({self.base.radicand})"
        return f"{self.base}(sqrt({inner}))"


def _sign(n: int) -> int:
    return (n > 0) - (n < 0)


def _embedding_sign(a: int, b: int, radicand: int, place: int) -> int:
    """Exact sign of a + (-1)^place * b * sqrt(radicand)."""
    if place == 1:
        b = -b
    if b == 0:
        return _sign(a)
    if a == 0:
        return _sign(b)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    return _sign(a) if a * a > b * b * radicand else _sign(b)


def _is_rational_square(x: Fraction) -> bool:
    if x < 0:
        return False
    num, den = x.numerator, x.denominator
    rn = math.isqrt(num)
    rd = math.isqrt(den)
    return rn * rn == num and rd * rd == den


def _is_square_in_field(base: BaseField, a: int, b: int) -> bool:
    if base.is_rationals:
        return b == 0 and _is_rational_square(Fraction(a))
    d = base.radicand
    norm = a * a - d * b * b
    if not _is_rational_square(Fraction(norm)):
        return False
    w = math.isqrt(norm)
    # (x + y sqrt(d))^2 = theta forces {x^2, d y^2} = {(a + w)/2, (a - w)/2}.
    for x2 in (Fraction(a + w, 2), Fraction(a - w, 2)):
        y2 = (Fraction(a) - x2) / d
        if (
            _is_rational_square(x2)
            and _is_rational_square(y2)
            and 4 * x2 * y2 * d == Fraction(b * b)
        ):
            return True
    return False


def theta_real_signs(ext: "ExtensionSpec") -> tuple[int, ...]:
    """The exact sign of theta at each real place of the base field."""
    a, b = ext.theta_pair
    if ext.base.is_rationals:
        return (_sign(a),)
    return tuple(
        _embedding_sign(a, b, ext.base.radicand, i) for i in ext.base.real_places()
    )


def _theta_valuation_and_unit(
    ext: ExtensionSpec, prime: PrimeOfF
) -> tuple[int, int]:
    """Valuation of theta at an odd prime of a real quadratic base field,
    together with the residue of the unit part (mod p) when the valuation is
    even.  The unit residue is reported as a norm residue in the inert case,
    which has the same quadratic class."""
    a, b = ext.theta_pair
    d = ext.base.radicand
    p = prime.p
    norm = a * a - d * b * b
    if prime.residue_degree == 2:  # inert in F
        vn = 0
        n = abs(norm)
        while n % p == 0:
            n //= p
            vn += 1
        assert vn % 2 == 0
        val = vn // 2
        unit = (norm // p ** vn) % p if val * 2 == vn else 0
        return val, unit
    if prime.ramification == 2:  # ramified in F
        va = 0
        aa = a
        while aa and aa % p == 0:
            aa //= p
            va += 1
        vb = 0
        bb = b
        while bb and bb % p == 0:
            bb //= p
            vb += 1
        val_a = 2 * va if a else None
        val_b = 2 * vb + 1 if b else None
        candidates = [v for v in (val_a, val_b) if v is not None]
        val = min(candidates)
        if val % 2:
            return val, 0
        return val, (a // p ** (val // 2)) % p
    # split in F: reduce modulo the chosen root, lifted far enough
    vn = 0
    n = abs(norm)
    while n % p == 0:
        n //= p
        vn += 1
    k = vn + 1
    mod = p ** k
    t = _canonical_root(ext.base, p)
    # Hensel-lift t so that t^2 = radicand mod p^k
    lift_mod = p
    while lift_mod < mod:
        lift_mod *= p
        inv = pow(2 * t, -1, lift_mod)
        t = (t - (t * t - d) * inv) % lift_mod
    if prime.selector == "second_root":
        t = (-t) % mod
    x = (a + b * t) % mod
    val = 0
    while x % p == 0 and val < k:
        x //= p
        val += 1
    assert val <= vn
    return val, x % p


def quadratic_extension(base: BaseField, theta) -> ExtensionSpec:
    """Build E = F(sqrt(theta)); theta is an integer, or a pair (a, b)
    standing for a + b*sqrt(radicand) over a real quadratic base."""
    if isinstance(theta, (tuple, list)):
        if base.is_rationals:
            if len(theta) != 2 or theta[1] != 0:
                raise UnsupportedFieldError("theta over Q must be an integer")
            theta = int(theta[0])
        else:
            theta = (int(theta[0]), int(theta[1]))
    else:
        theta = int(theta)
    a, b = (theta, 0) if isinstance(theta, int) else theta
    if a == 0 and b == 0:
        raise UnsupportedFieldError("theta must be nonzero")
    if _is_square_in_field(base, a, b):
        raise UnsupportedFieldError(f"theta = {theta} is a square in {base}")

    if base.is_rationals:
        reduced = squarefree_part(a)
        ramified = [
            primes_above(base, p)[0] for p, _ in factor_integer(abs(reduced)) if p != 2
        ]
        if reduced % 4 != 1:
            ramified.append(primes_above(base, 2)[0])
        signature = 1 if reduced < 0 else 0
        ext = ExtensionSpec(base, a, signature, _sorted_entries_primes(ramified))
        return ext

    signs = [
        _embedding_sign(a, b, base.radicand, place) for place in base.real_places()
    ]
    signature = sum(1 for s in signs if s < 0)
    ext = ExtensionSpec(base, (a, b), signature, ())
    norm = abs(a * a - base.radicand * b * b)
    ramified = []
    for p, _ in factor_integer(norm):
        if p == 2:
            continue
        for prime in primes_above(base, p):
            val, _unit = _theta_valuation_and_unit(ext, prime)
            if val % 2:
                ramified.append(prime)
    return ExtensionSpec(base, (a, b), signature, _sorted_entries_primes(ramified))


def _sorted_entries_primes(primes) -> tuple[PrimeOfF, ...]:
    return tuple(sorted(primes, key=lambda q: (q.p, _SELECTOR_ORDER[q.selector])))


def splitting_in_extension(ext: ExtensionSpec, prime: PrimeOfF) -> Splitting:
    """Splitting type of a prime of F in E.

    Over 2 with a real quadratic base this raises: the dyadic classification
    there is deliberately left undecided rather than approximated.
    """
    if ext.base.is_rationals:
        reduced = ext.reduced_theta
        p = prime.p
        if p == 2:
            if reduced % 8 == 1:
                return Splitting.SPLIT
            if reduced % 8 == 5:
                return Splitting.INERT
            return Splitting.RAMIFIED
        if reduced % p == 0:
            return Splitting.RAMIFIED
        return (
            Splitting.SPLIT
            if kronecker_symbol(reduced, p) == 1
            else Splitting.INERT
        )
    if prime.p == 2:
        raise TwoAdicUnsupportedError(
            "splitting over 2 is not classified for a real quadratic base field"
        )
    val, unit = _theta_valuation_and_unit(ext, prime)
    if val % 2:
        return Splitting.RAMIFIED
    return (
        Splitting.SPLIT if kronecker_symbol(unit, prime.p) == 1 else Splitting.INERT
    )


def ramified_odd_primes(ext: ExtensionSpec) -> tuple[PrimeOfF, ...]:
    """Primes of F ramified in E and not lying over 2."""
    return tuple(q for q in ext.ramified_primes if q.p != 2)


def count_surviving_ramified(ext: ExtensionSpec, ideal: FactoredIdeal) -> int:
    """Number of primes of F ramified in E, odd, and not dividing the ideal."""
    divisors = {prime for prime, _ in ideal.entries}
    return sum(1 for q in ramified_odd_primes(ext) if q not in divisors)


def is_unramified_over_two(ext: ExtensionSpec) -> bool:
    """Whether no prime of F over 2 ramifies in E.

    Decidable over the rationals (squarefree theta = 1 mod 4); raises for a
    real quadratic base, where the dyadic behaviour is not classified here.
    """
    if ext.base.is_rationals:
        return ext.reduced_theta % 4 == 1
    raise TwoAdicUnsupportedError(
        "ramification over 2 is not classified for a real quadratic base field"
    )
