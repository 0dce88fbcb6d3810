"""Fourier coefficients of the built-in eta-product newforms.

Five holomorphic newforms of prime (or trivial) level and trivial
nebentypus, each realized as an eta product with integer q-expansion:

    Delta_1_12   level 1,  weight 12   eta(z)^24
    E8_2_8       level 2,  weight 8    eta(z)^8  eta(2z)^8
    E6_3_6       level 3,  weight 6    eta(z)^6  eta(3z)^6
    E4_5_4       level 5,  weight 4    eta(z)^4  eta(5z)^4
    E2_11_2      level 11, weight 2    eta(z)^2  eta(11z)^2

Coefficients are generated on demand from the pentagonal-number expansion
of prod (1 - q^n), with exact integer arithmetic throughout (Python ints,
so intermediate growth can never overflow). Normalized eigenvalues
lambda(n) = a(n) / n^((k-1)/2) leave the integers only at that final step.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .arith import divisors, is_prime, tau

__all__ = [
    "FormValidationError",
    "InsufficientCoefficients",
    "Newform",
    "TwistedCoefficients",
    "builtin_form",
    "BUILTIN_FORM_IDS",
    "deligne_ok",
    "eta_product_series",
    "hecke_residual",
    "hecke_residual_exact",
    "load_form_csv",
    "twist",
]


class FormValidationError(ValueError):
    """External coefficient data failed the Deligne/Hecke validation gate."""


class InsufficientCoefficients(ValueError):
    """A computation needs coefficients beyond the stored bound."""


def _poly_mul_trunc(a: list[int], b: list[int], n_max: int) -> list[int]:
    """Exact truncated product of integer coefficient lists.

    Kronecker substitution: pack each polynomial into one big integer with
    digits wide enough that product coefficients never interfere, multiply,
    and unpack signed digits. Exact for arbitrary integer coefficients.
    """
    la = min(len(a), n_max + 1)
    lb = min(len(b), n_max + 1)
    ma = max((abs(x) for x in a[:la]), default=0)
    mb = max((abs(x) for x in b[:lb]), default=0)
    if ma == 0 or mb == 0:
        return [0] * (n_max + 1)
    bound = ma * mb * min(la, lb)
    bits = bound.bit_length() + 2
    pa = sum(x << (bits * i) for i, x in enumerate(a[:la]))
    pb = sum(x << (bits * i) for i, x in enumerate(b[:lb]))
    prod = pa * pb
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    out = []
    for _ in range(n_max + 1):
        d = prod & mask
        if d >= half:
            d -= mask + 1
        out.append(d)
        prod = (prod - d) >> bits
    return out


def _poly_pow_trunc(a: list[int], k: int, n_max: int) -> list[int]:
    result = [1]
    base = a
    while k:
        if k & 1:
            result = _poly_mul_trunc(result, base, n_max)
        k >>= 1
        if k:
            base = _poly_mul_trunc(base, base, n_max)
    return result


def _poly_inv_trunc(a: list[int], n_max: int) -> list[int]:
    """Inverse of a unit power series with a[0] = +-1, exact integers."""
    lead = a[0]
    if lead not in (1, -1):
        raise ValueError("series inversion requires leading coefficient +-1")
    out = [lead]
    for n in range(1, n_max + 1):
        acc = 0
        for j in range(1, min(n, len(a) - 1) + 1):
            acc += a[j] * out[n - j]
        out.append(-lead * acc)
    return out


def _euler_series(scale: int, n_max: int) -> list[int]:
    """prod_{n >= 1} (1 - q^(scale*n)) via generalized pentagonal numbers."""
    out = [0] * (n_max + 1)
    out[0] = 1
    k = 1
    while True:
        g1 = scale * k * (3 * k - 1) // 2
        g2 = scale * k * (3 * k + 1) // 2
        if g1 > n_max and g2 > n_max:
            break
        sign = -1 if k % 2 else 1
        if g1 <= n_max:
            out[g1] += sign
        if g2 <= n_max:
            out[g2] += sign
        k += 1
    return out


def eta_product_series(
    exponent_pairs: tuple[tuple[int, int], ...], bound: int
) -> list[int]:
    """Coefficients a(n) of prod eta(t z)^e / q^lead, indexed so a(1) = 1.

    lead = sum(e*t)/24 must be a positive integer (rejected otherwise);
    a(n) is the coefficient of q^(n-1) in the product of the Euler factors.
    """
    if bound < 1 or bound > 100_000:
        raise ValueError("bound must be in [1, 100000]")
    lead = Fraction(sum(e * t for t, e in exponent_pairs), 24)
    if lead.denominator != 1 or lead <= 0:
        raise ValueError(f"leading q-power {lead} is not a positive integer")
    n_max = bound - 1
    series = [1]
    for t, e in exponent_pairs:
        if e == 0:
            continue
        factor = _euler_series(t, n_max)
        if e < 0:
            factor = _poly_inv_trunc(factor, n_max)
        series = _poly_mul_trunc(series, _poly_pow_trunc(factor, abs(e), n_max), n_max)
    coeffs = [0] * (bound + 1)
    for n in range(1, bound + 1):
        coeffs[n] = series[n - 1]
    return coeffs


@dataclass(frozen=True)
class Newform:
    """Integer Fourier coefficients a(n) of one form, a(1) = 1."""

    form_id: str
    level: int
    weight: int
    coefficients: tuple[int, ...]  # index n; entry 0 unused

    @property
    def bound(self) -> int:
        return len(self.coefficients) - 1

    def a(self, n: int) -> int:
        if not 1 <= n <= self.bound:
            raise InsufficientCoefficients(
                f"{self.form_id}: a({n}) beyond stored bound {self.bound}"
            )
        return self.coefficients[n]

    def lam(self, n: int) -> float:
        """Normalized eigenvalue lambda(n) = a(n) / n^((k-1)/2)."""
        return self.a(n) / float(n) ** ((self.weight - 1) / 2)


_FORM_RECIPES: dict[str, tuple[int, int, tuple[tuple[int, int], ...]]] = {
    "Delta_1_12": (1, 12, ((1, 24),)),
    "E8_2_8": (2, 8, ((1, 8), (2, 8))),
    "E6_3_6": (3, 6, ((1, 6), (3, 6))),
    "E4_5_4": (5, 4, ((1, 4), (5, 4))),
    "E2_11_2": (11, 2, ((1, 2), (11, 2))),
}

BUILTIN_FORM_IDS = tuple(_FORM_RECIPES)


@lru_cache(maxsize=32)
def builtin_form(form_id: str, bound: int = 3000) -> Newform:
    """One of the five built-in forms, with coefficients up to bound."""
    if form_id not in _FORM_RECIPES:
        raise KeyError(f"unknown form id {form_id!r}; choose from {BUILTIN_FORM_IDS}")
    level, weight, recipe = _FORM_RECIPES[form_id]
    coeffs = eta_product_series(recipe, bound)
    return Newform(form_id, level, weight, tuple(coeffs))


def hecke_residual(f: Newform, m: int, n: int) -> float:
    """|lam(m) lam(n) - sum_{d | (m,n), gcd(d,P)=1} lam(m n / d^2)|."""
    if gcd(n, f.level) != 1:
        raise ValueError("n must be coprime to the level")
    lhs = f.lam(m) * f.lam(n)
    rhs = 0.0
    for d in divisors(gcd(m, n)):
        if gcd(d, f.level) == 1:
            rhs += f.lam(m * n // (d * d))
    return abs(lhs - rhs)


def hecke_residual_exact(f: Newform, m: int, n: int) -> int:
    """Integer form: |a(m) a(n) - sum_d d^(k-1) a(m n / d^2)|, zero for a
    genuine eigenform."""
    if gcd(n, f.level) != 1:
        raise ValueError("n must be coprime to the level")
    lhs = f.a(m) * f.a(n)
    rhs = 0
    for d in divisors(gcd(m, n)):
        if gcd(d, f.level) == 1:
            rhs += d ** (f.weight - 1) * f.a(m * n // (d * d))
    return abs(lhs - rhs)


def deligne_ok(f: Newform, n: int) -> bool:
    """Exact check of |a(n)| <= tau(n) n^((k-1)/2), squared to stay integral."""
    return f.a(n) ** 2 <= tau(n) ** 2 * n ** (f.weight - 1)


@dataclass(frozen=True)
class TwistedCoefficients:
    """chi(n) lambda(n) for n up to the requested bound."""

    form: Newform
    character: object
    values: tuple[complex, ...]  # index n; entry 0 unused


def twist(f: Newform, chi, bound: int) -> TwistedCoefficients:
    """Componentwise twist; requires gcd(level, modulus) = 1."""
    if gcd(f.level, chi.modulus) != 1:
        raise ValueError("level and character modulus must be coprime")
    if bound > f.bound:
        raise InsufficientCoefficients(
            f"twist bound {bound} beyond stored coefficients {f.bound}"
        )
    vals = [0j] * (bound + 1)
    for n in range(1, bound + 1):
        vals[n] = chi(n) * f.lam(n)
    return TwistedCoefficients(f, chi, tuple(vals))


def _validate(form: Newform, check_bound: int = 2000) -> None:
    top = min(form.bound, check_bound)
    if form.level != 1 and not is_prime(form.level):
        raise FormValidationError(f"level {form.level} is neither 1 nor prime")
    if form.weight < 2 or form.weight % 2:
        raise FormValidationError(f"weight {form.weight} is not a positive even integer")
    if form.a(1) != 1:
        raise FormValidationError("a(1) != 1")
    for n in range(1, top + 1):
        if not deligne_ok(form, n):
            raise FormValidationError(f"coefficient bound fails at n = {n}")
    for m in range(2, top + 1):
        for n in range(2, top // m + 1):
            if gcd(n, form.level) != 1:
                continue
            if hecke_residual_exact(form, m, n) != 0:
                raise FormValidationError(f"Hecke relation fails at (m, n) = ({m}, {n})")


def load_form_csv(path) -> Newform:
    """Ingest external coefficients: header `level,weight`, rows `n,a_n`.

    The data must cover n = 1..N contiguously and pass the same Deligne and
    Hecke checks applied to the built-in forms before it is accepted.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormValidationError("empty file") from None
        if [h.strip() for h in header] != ["level", "weight"]:
            raise FormValidationError("first line must be the header 'level,weight'")
        try:
            level_s, weight_s = next(reader)
            level, weight = int(level_s), int(weight_s)
        except (StopIteration, ValueError):
            raise FormValidationError("second line must hold integer level,weight") from None
        entries: dict[int, int] = {}
        for row in reader:
            if not row:
                continue
            try:
                n, a_n = int(row[0]), int(row[1])
            except (ValueError, IndexError):
                raise FormValidationError(f"bad coefficient row {row!r}") from None
            if n < 1 or n in entries:
                raise FormValidationError(f"bad or duplicate index {n}")
            entries[n] = a_n
    if not entries:
        raise FormValidationError("no coefficient rows")
    top = max(entries)
    if sorted(entries) != list(range(1, top + 1)):
        raise FormValidationError("coefficients must cover n = 1..N contiguously")
    coeffs = [0] * (top + 1)
    for n, a_n in entries.items():
        coeffs[n] = a_n
    form = Newform(f"external_{level}_{weight}", level, weight, tuple(coeffs))
    _validate(form)
    return form
