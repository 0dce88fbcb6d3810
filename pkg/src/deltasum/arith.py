"""Exact integer arithmetic underlying the character and exponential sums.

Factorization, modular inverses, CRT-free divisor machinery, and the
multiplicative functions mu, phi, tau and phi* (the count of primitive
characters). Everything here is a pure function of its inputs;
MultiplicativeTable is immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

__all__ = [
    "Factorization",
    "MultiplicativeTable",
    "NonInvertible",
    "divisors",
    "factorize",
    "gcd3",
    "inverse_mod",
    "is_prime",
    "is_squarefree",
    "mobius",
    "phi",
    "phi_star",
    "tau",
]


class NonInvertible(ValueError):
    """Raised when a residue has no multiplicative inverse."""


# Deterministic Miller-Rabin witnesses, valid for every n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
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


@dataclass(frozen=True)
class Factorization:
    """n = prod p^e with primes strictly increasing."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def validate(self) -> None:
        prod = 1
        prev = 1
        for p, e in self.factors:
            if e < 1 or p <= prev or not is_prime(p):
                raise ValueError(f"invalid factorization of {self.n}")
            prev = p
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factor product {prod} != {self.n}")


def _pollard_brent(n: int) -> int:
    """Brent-cycle Pollard rho; deterministic parameter schedule."""
    if n % 2 == 0:
        return 2
    for seed in range(1, 64):
        y, c, m = seed, seed, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")


def factorize(n: int) -> Factorization:
    """Factor 1 <= n < 2^63 by trial division plus a rho fallback."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    if n >= 1 << 63:
        raise ValueError("factorize limited to n < 2^63")
    target = n
    counts: dict[int, int] = {}

    def strip(m: int, p: int) -> int:
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
        return m

    m = strip(n, 2)
    m = strip(m, 3)
    d = 5
    while d * d <= m and d < 1_000_000:
        m = strip(m, d)
        m = strip(m, d + 2)
        d += 6
    stack = [m] if m > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        g = _pollard_brent(m)
        stack.append(g)
        stack.append(m // g)
    return Factorization(target, tuple(sorted(counts.items())))


def divisors(n: int | Factorization) -> list[int]:
    """All positive divisors of n, sorted increasing."""
    fac = n if isinstance(n, Factorization) else factorize(n)
    divs = [1]
    for p, e in fac.factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac.factors):
        return 0
    return -1 if len(fac.factors) % 2 else 1


def phi(n: int) -> int:
    fac = factorize(n)
    return reduce(lambda acc, pe: acc // pe[0] * (pe[0] - 1), fac.factors, n)


def tau(n: int) -> int:
    return math.prod(e + 1 for _, e in factorize(n).factors)


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n).factors)


def phi_star(m: int) -> int:
    """Number of primitive Dirichlet characters mod m.

    Evaluated through the divisor sum sum_{d|m} mu(d) phi(m/d); the
    character module's enumeration doubles as an independent oracle.
    """
    if m < 1:
        raise ValueError("phi_star requires m >= 1")
    return sum(mobius(d) * phi(m // d) for d in divisors(m))


def inverse_mod(a: int, m: int) -> int:
    """Inverse of a mod m, in [1, m-1] for m >= 2; by convention 0 for m = 1."""
    if m < 1:
        raise ValueError("modulus must be positive")
    if m == 1:
        return 0
    if math.gcd(a, m) != 1:
        raise NonInvertible(f"{a} is not invertible mod {m}")
    return pow(a, -1, m)


def gcd3(a: int, b: int, c: int) -> int:
    """gcd(|a|, |b|, c) with gcd(0, 0, c) = c."""
    if c < 1:
        raise ValueError("third argument must be positive")
    return math.gcd(math.gcd(abs(a), abs(b)), c)


class MultiplicativeTable:
    """Sieved values of mu, phi, tau and phi* for 1 <= n <= bound."""

    def __init__(self, bound: int):
        if bound < 1:
            raise ValueError("bound must be >= 1")
        self.bound = bound
        spf = list(range(bound + 1))  # smallest prime factor
        for p in range(2, int(math.isqrt(bound)) + 1):
            if spf[p] == p:
                for q in range(p * p, bound + 1, p):
                    if spf[q] == q:
                        spf[q] = p
        mu = [0] * (bound + 1)
        ph = [0] * (bound + 1)
        mu[1] = ph[1] = 1
        for n in range(2, bound + 1):
            p = spf[n]
            m = n // p
            if m % p == 0:
                mu[n] = 0
                ph[n] = ph[m] * p
            else:
                mu[n] = -mu[m]
                ph[n] = ph[m] * (p - 1)
        ta = [0] * (bound + 1)
        ps = [0] * (bound + 1)
        for d in range(1, bound + 1):
            md = mu[d]
            for n in range(d, bound + 1, d):
                ta[n] += 1
                if md:
                    ps[n] += md * ph[n // d]
        self.mu = tuple(mu)
        self.phi = tuple(ph)
        self.tau = tuple(ta)
        self.phi_star = tuple(ps)
