"""Integer and rational primitives plus the two zeta special values.

Everything downstream is exact rational arithmetic; the only analytic
quantities in the package are the values zeta(2) of the rationals and of
quadratic fields, which are computed here as truncated character series with
a proven tail bound.  Exact rationals are stdlib fractions, which already
guarantee lowest terms and a positive denominator.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import UnsupportedFieldError

Rational = Fraction

# Deterministic Miller-Rabin witnesses for every n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factor_integer(n: int) -> list[tuple[int, int]]:
    """Factor n >= 1 by trial division into (prime, exponent) pairs.

    Primes come out strictly increasing; n = 1 gives the empty list.
    """
    if n < 1:
        raise ValueError(f"factor_integer needs n >= 1, got {n}")
    factors = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
    q = 5
    while q * q <= n:
        for p in (q, q + 2):
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                factors.append((p, e))
        q += 6
    if n > 1:
        factors.append((n, 1))
    return factors


def divisor_sum(n: int) -> int:
    """Sum of the positive divisors of n."""
    total = 1
    for p, e in factor_integer(n):
        total *= (p ** (e + 1) - 1) // (p - 1)
    return total


def squarefree_part(n: int) -> int:
    """The squarefree integer with the same square class as n (sign kept)."""
    if n == 0:
        raise ValueError("0 has no squarefree part")
    sign = -1 if n < 0 else 1
    out = sign
    for p, e in factor_integer(abs(n)):
        if e % 2:
            out *= p
    return out


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n) with the classical 2-adic and sign conventions."""
    if n == 0:
        if a in (1, -1):
            return 1
        if a == 0:
            raise ValueError("kronecker_symbol(0, 0) is undefined")
        return 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd positive n via quadratic reciprocity.
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo the prime p, or None if a is a non-residue."""
    a %= p
    if p == 2 or a == 0:
        return a
    if kronecker_symbol(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker_symbol(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def is_fundamental_discriminant(d: int) -> bool:
    if d == 1:
        return True
    if d % 4 == 1:
        return abs(d) > 1 and squarefree_part(d) == d
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree_part(m) == m
    return False


def _discriminant_of(field) -> int:
    return getattr(field, "discriminant", field)


def zeta_minus_one(field) -> Fraction:
    """zeta_F(-1), exactly, for F the rationals or a real quadratic field.

    The rational case is -1/12.  For a real quadratic field of discriminant D
    the value is the divisor sum (1/60) * sum sigma_1((D - b^2)/4) over the
    integers b with b^2 < D and b of the same parity as D.
    """
    disc = _discriminant_of(field)
    if disc == 1:
        return Fraction(-1, 12)
    if disc <= 1 or not is_fundamental_discriminant(disc):
        raise UnsupportedFieldError(
            f"zeta_minus_one supports the rationals and real quadratic fields, "
            f"got discriminant {disc}"
        )
    total = 0
    b = disc % 2
    while b * b < disc:
        term = divisor_sum((disc - b * b) // 4)
        total += term if b == 0 else 2 * term
        b += 2
    return Fraction(total, 60)


@lru_cache(maxsize=None)
def _character_data(disc: int) -> tuple[tuple[int, ...], int]:
    """One period of the quadratic character mod |disc| and its max partial sum."""
    period = abs(disc)
    chi = tuple(kronecker_symbol(disc, n) for n in range(period))
    partial = 0
    bound = 0
    for value in chi[1:] + (chi[0],):
        partial += value
        bound = max(bound, abs(partial))
    if partial != 0:
        raise UnsupportedFieldError(
            f"{disc} is not a fundamental discriminant (character not balanced)"
        )
    return chi, bound


@lru_cache(maxsize=None)
def zeta_two(field=1, tol: float = 1e-10) -> float:
    """zeta(2)-value of the field, within tol of the truth.

    For the rationals this is pi^2/6.  For a quadratic field of fundamental
    discriminant D it is zeta(2) * L(2, chi_D) with the L-series truncated at
    N terms; by partial summation the discarded tail is at most
    2*B/(N+1)^2 where B bounds the partial sums of the periodic character,
    so N is chosen to push the truncation error below tol/2, leaving ample
    room for float rounding.
    """
    if tol < 1e-12:
        raise ValueError("tolerance below 1e-12 is not supported")
    disc = _discriminant_of(field)
    zeta_q = math.pi * math.pi / 6
    if disc == 1:
        return zeta_q
    if not is_fundamental_discriminant(disc):
        raise UnsupportedFieldError(
            f"zeta_two needs a fundamental discriminant, got {disc}"
        )
    chi, bound = _character_data(disc)
    period = abs(disc)
    n_terms = max(period, math.isqrt(int(4 * bound * zeta_q / tol)) + 2)
    chi_arr = np.array(chi, dtype=np.float64)
    chunk = 1 << 20
    pieces = []
    for start in range(1, n_terms + 1, chunk):
        stop = min(start + chunk, n_terms + 1)
        n = np.arange(start, stop, dtype=np.float64)
        c = chi_arr[np.arange(start, stop) % period]
        pieces.append(float(np.sum(c / (n * n))))
    return zeta_q * math.fsum(pieces)
