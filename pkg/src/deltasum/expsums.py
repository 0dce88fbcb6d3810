"""Kloosterman and Ramanujan sums with Weil-bound metadata.

The standard sum S(a, b; c) = sum over x mod c, gcd(x, c) = 1, of
e((a x + b x^-1)/c) is evaluated by the pinned brute-force kernel (see
deltasum._backend). Built on top of it are the two concrete Kloosterman
families produced by the plain and conductor-lowered delta decompositions:
one carries the level inverted into the argument (the cusp-pair structure),
the other absorbs the level into the modulus (the sum at the cusp at
infinity). residue_recombination realizes the a + b*q recombination of
residues mod q*P.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd

from ._backend import kloosterman_raw
from .arith import divisors, factorize, gcd3, inverse_mod, mobius, tau

__all__ = [
    "KloostermanValue",
    "cusp_pair_sum",
    "kloosterman",
    "principal_cusp_sum",
    "ramanujan_sum",
    "recombine_residues",
    "twisted_multiplicativity",
]

_MAX_MODULUS = 1 << 31  # keeps a*x + b*xinv inside 63 bits in the kernel

# Near-integrality of the float value is only a meaningful smoke test for
# small prime moduli (algebraic-integer values); the annotation is attached
# whenever the value is within this distance of an integer.
_NEAR_INT_TOL = 1e-6


@dataclass(frozen=True)
class KloostermanValue:
    """One evaluated Kloosterman sum and its Weil bound."""

    a: int
    b: int
    c: int
    value: float
    weil_bound: float
    imag_residual: float
    nearest_int: int | None


def weil_bound(a: int, b: int, c: int) -> float:
    """tau(c) * sqrt(gcd(a, b, c)) * sqrt(c)."""
    return tau(c) * math.sqrt(gcd3(a, b, c)) * math.sqrt(c)


def _brute_value(a: int, b: int, c: int) -> tuple[float, float]:
    return kloosterman_raw(a % c, b % c, c)


def _crt_value(a: int, b: int, c: int) -> tuple[float, float]:
    """Prime-power split via twisted multiplicativity; flag-gated fast path."""
    re = 1.0
    im_max = 0.0
    for p, e in factorize(c).factors:
        q = p**e
        inv = inverse_mod(c // q, q)
        fre, fim = _brute_value(a * inv, b * inv, q)
        re *= fre
        im_max = max(im_max, abs(fim))
    return re, im_max


def kloosterman(a: int, b: int, c: int, use_crt: bool = False) -> KloostermanValue:
    """S(a, b; c) with its Weil bound.

    use_crt enables the prime-power factorization fast path; the default is
    the direct brute-force evaluation it is verified against.
    """
    if c < 1:
        raise ValueError("modulus must be positive")
    if c > _MAX_MODULUS:
        raise ValueError(f"modulus {c} exceeds supported range {_MAX_MODULUS}")
    if use_crt and len(factorize(c).factors) > 1:
        re, im = _crt_value(a, b, c)
    else:
        re, im = _brute_value(a, b, c)
    nearest = round(re)
    annotation = nearest if abs(re - nearest) <= _NEAR_INT_TOL else None
    return KloostermanValue(
        a=a,
        b=b,
        c=c,
        value=re,
        weil_bound=weil_bound(a, b, c),
        imag_residual=abs(im),
        nearest_int=annotation,
    )


def ramanujan_sum(q: int, n: int) -> int:
    """c_q(n) = S(n, 0; q), exactly: sum_{d | gcd(q, n)} d mu(q/d)."""
    if q < 1:
        raise ValueError("modulus must be positive")
    g = math.gcd(q, abs(n)) if n != 0 else q
    return sum(d * mobius(q // d) for d in divisors(g))


def twisted_multiplicativity(
    m: int, n: int, c1: int, c2: int
) -> tuple[float, float]:
    """(left, right) with left = S(m, n; c1 c2) and right the product
    S(m c2~, n c2~; c1) * S(m c1~, n c1~; c2), inverses taken mod the other
    factor. Equality is the caller's assertion."""
    if gcd(c1, c2) != 1:
        raise ValueError("moduli must be coprime")
    left = kloosterman(m, n, c1 * c2).value
    inv2 = inverse_mod(c2 % c1 if c1 > 1 else 0, c1) if c1 > 1 else 0
    inv1 = inverse_mod(c1 % c2 if c2 > 1 else 0, c2) if c2 > 1 else 0
    right = (
        kloosterman(m * inv2, n * inv2, c1).value
        * kloosterman(m * inv1, n * inv1, c2).value
    )
    return left, right


def cusp_pair_sum(r: int, m_shift: int, n: int, m: int, level: int, q: int) -> float:
    """S(r*M, (n - m) * level^-1 mod q; q).

    The family where the level stays attached to the argument, the structure
    tied to the 0-infinity cusp pair. Requires gcd(level, q) = 1.
    """
    inv = inverse_mod(level, q)
    return kloosterman(r * m_shift, (n - m) * inv, q).value


def principal_cusp_sum(
    r: int, m_shift: int, n: int, m: int, level: int, q: int
) -> float:
    """S(r*M, n - m; q*level), the standard sum at the cusp at infinity."""
    if level < 1 or q < 1:
        raise ValueError("level and q must be positive")
    return kloosterman(r * m_shift, n - m, q * level).value


def recombine_residues(q: int, p: int) -> list[int]:
    """Residues gamma mod q*p with gcd(gamma, q) = 1, realized as a + b*q.

    The construction {a + b q : a mod q coprime, b mod p} is checked against
    the direct coprimality filter; the two sets agree exactly when
    gcd(q, p) = 1.
    """
    if q < 1 or p < 1:
        raise ValueError("q and p must be positive")
    if gcd(q, p) != 1:
        raise ValueError("q and p must be coprime")
    qp = q * p
    built = sorted(
        (a + b * q) % qp for a in range(q) if gcd(a, q) == 1 for b in range(p)
    )
    direct = [g for g in range(qp) if gcd(g, q) == 1]
    if built != direct:
        raise ArithmeticError("residue recombination failed internal check")
    return direct
