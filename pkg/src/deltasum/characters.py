"""Dirichlet characters mod M with exact root-of-unity value storage.

A CharacterGroup fixes the generator convention once and for all (least
primitive root for odd prime powers, the pair -1 and 5 for 2^k with k >= 3),
so enumeration order and value tables are identical across runs. Character
values are stored as exact exponents k with chi(n) = e(k/ord); complex
numbers are materialized only at evaluation, which keeps multiplicativity
checks exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd

from .arith import divisors, factorize, phi

__all__ = [
    "CharacterGroup",
    "DirichletCharacter",
    "NotCoprime",
    "additive_orthogonality_sum",
    "enumerate_characters",
    "gauss_sum",
    "orthogonality_sum",
]


class NotCoprime(ValueError):
    """Raised when an argument shares a factor with the modulus."""


def _root_table(order: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * cmath.pi * k / order) for k in range(order))


def _least_primitive_root(q: int, p: int) -> int:
    """Least primitive root mod q = p^e for odd prime p."""
    order = phi(q)
    prime_divs = [r for r, _ in factorize(order).factors]
    g = 2
    while True:
        if gcd(g, q) == 1 and all(pow(g, order // r, q) != 1 for r in prime_divs):
            return g
        g += 1


class CharacterGroup:
    """Unit group structure mod M: cyclic factors, generators, log tables."""

    def __init__(self, modulus: int):
        if modulus < 1:
            raise ValueError("modulus must be positive")
        self.modulus = modulus
        self.factorization = factorize(modulus)
        # Each entry: (prime power q, list of (generator, cyclic order)).
        self._components: list[tuple[int, list[tuple[int, int]]]] = []
        for p, e in self.factorization.factors:
            q = p**e
            if p == 2:
                if e == 1:
                    gens: list[tuple[int, int]] = []
                elif e == 2:
                    gens = [(3, 2)]
                else:
                    gens = [(q - 1, 2), (5, q // 4)]
            else:
                gens = [(_least_primitive_root(q, p), phi(q))]
            self._components.append((q, gens))
        self.orders = tuple(s for _, gens in self._components for _, s in gens)
        self.order = math.lcm(*self.orders) if self.orders else 1
        # Discrete-log table per prime power: residue -> exponent tuple.
        self._logs: list[dict[int, tuple[int, ...]]] = []
        for q, gens in self._components:
            table: dict[int, tuple[int, ...]] = {}
            ranges = [range(s) for _, s in gens]
            for exps in product(*ranges):
                v = 1
                for (g, _), t in zip(gens, exps):
                    v = v * pow(g, t, q) % q
                table[v] = exps
            self._logs.append(table)
        self._roots = _root_table(self.order)

    def component_logs(self, n: int) -> tuple[int, ...] | None:
        """Flattened discrete logs of n across all cyclic factors."""
        if gcd(n, self.modulus) != 1:
            return None
        out: list[int] = []
        for (q, _), table in zip(self._components, self._logs):
            out.extend(table[n % q])
        return tuple(out)

    def characters(self) -> list[DirichletCharacter]:
        """All phi(M) characters, in the fixed lexicographic index order."""
        chars = []
        for index in product(*(range(s) for s in self.orders)):
            chars.append(DirichletCharacter(group=self, index=index))
        return chars


@dataclass(frozen=True)
class DirichletCharacter:
    """A character mod M, indexed by its exponents on the fixed generators.

    chi(g_i) = e(index_i / order_i); values on arbitrary residues follow by
    complete multiplicativity through the discrete-log tables.
    """

    group: CharacterGroup
    index: tuple[int, ...]
    conductor: int = field(init=False)
    is_primitive: bool = field(init=False)
    is_principal: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "is_principal", not any(self.index))
        object.__setattr__(self, "conductor", self._conductor())
        object.__setattr__(
            self, "is_primitive", self.conductor == self.group.modulus
        )

    @property
    def modulus(self) -> int:
        return self.group.modulus

    @property
    def order_denominator(self) -> int:
        """Common root-of-unity order: chi(n) = e(exponent(n) / this)."""
        return self.group.order

    def exponent(self, n: int) -> int | None:
        """k with chi(n) = e(k/order), or None when gcd(n, M) > 1."""
        logs = self.group.component_logs(n)
        if logs is None:
            return None
        e = self.group.order
        acc = 0
        for j, t, s in zip(self.index, logs, self.group.orders):
            acc = (acc + j * t * (e // s)) % e
        return acc

    def __call__(self, n: int) -> complex:
        k = self.exponent(n)
        if k is None:
            return 0j
        return self.group._roots[k]

    def conjugate(self) -> DirichletCharacter:
        """The complex-conjugate character (indices negated)."""
        index = tuple(
            (-j) % s for j, s in zip(self.index, self.group.orders)
        )
        return DirichletCharacter(group=self.group, index=index)

    def _conductor(self) -> int:
        """Least d | M through which the character factors.

        Direct test: chi is trivial on every n = 1 (mod d) coprime to M.
        Deliberately formula-free so it can serve as the phi* oracle.
        """
        m = self.group.modulus
        for d in divisors(self.group.factorization):
            if d == m:
                return m
            ok = True
            for n in range(1 + d, m, d):
                if gcd(n, m) == 1 and self.exponent(n) != 0:
                    ok = False
                    break
            if ok:
                return d
        return m

    def value_rows(self) -> list[tuple[int, int, int]]:
        """(residue, exponent numerator, exponent denominator) rows, coprime
        residues only, for the CSV dump."""
        e = self.group.order
        rows = []
        for n in range(self.modulus):
            k = self.exponent(n)
            if k is not None:
                rows.append((n, k, e))
        if self.modulus == 1:
            rows = [(0, 0, 1)]
        return rows


@lru_cache(maxsize=64)
def _group(modulus: int) -> CharacterGroup:
    return CharacterGroup(modulus)


def enumerate_characters(modulus: int) -> list[DirichletCharacter]:
    """All Dirichlet characters mod M in a fixed, reproducible order."""
    return _group(modulus).characters()


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_b chi(b) e(b/M), via exactly rounded summation."""
    m = chi.modulus
    if m == 1:
        return 1 + 0j
    roots_m = _root_table(m)
    re_terms: list[float] = []
    im_terms: list[float] = []
    for b in range(1, m):
        k = chi.exponent(b)
        if k is None:
            continue
        z = chi.group._roots[k] * roots_m[b]
        re_terms.append(z.real)
        im_terms.append(z.imag)
    return complex(math.fsum(re_terms), math.fsum(im_terms))


def orthogonality_sum(modulus: int, n: int, m: int) -> int:
    """sum over all chi mod M of chi(n) conj(chi(m)).

    Equals phi(M) when n = m (mod M) and 0 otherwise; returned exactly,
    rounded from a near-integer compensated sum.
    """
    if gcd(n, modulus) != 1 or gcd(m, modulus) != 1:
        raise NotCoprime(f"{n}*{m} shares a factor with {modulus}")
    group = _group(modulus)
    e = group.order
    re_terms = []
    for chi in group.characters():
        k = (chi.exponent(n) - chi.exponent(m)) % e
        re_terms.append(group._roots[k].real)
    total = math.fsum(re_terms)
    nearest = round(total)
    if abs(total - nearest) > 1e-6:
        raise ArithmeticError(f"character sum not near-integer: {total}")
    return nearest


def additive_orthogonality_sum(modulus: int, n: int, m: int) -> complex:
    """sum_b e(b(n-m)/M), compensated; equals M exactly when M | n - m."""
    roots = _root_table(modulus)
    re_terms = []
    im_terms = []
    for b in range(modulus):
        z = roots[b * (n - m) % modulus]
        re_terms.append(z.real)
        im_terms.append(z.imag)
    return complex(math.fsum(re_terms), math.fsum(im_terms))
