"""The verify-all suite: every module's invariant checks as named,
deterministic rows.

Each check returns a CheckResult with status PASS, FAIL, or MONITOR
(informational, never gating). Checks are pure and independent, so the
suite may fan out across worker threads; results are reported in
registration order regardless of scheduling, and all reported numbers are
deterministic, which makes repeated runs byte-identical.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from math import gcd
from typing import Callable

import numpy as np

from . import arith, characters, expsums, kernels, modforms, pipeline

__all__ = ["CheckResult", "REGISTRY", "run_all", "SUITE_VERSION"]

SUITE_VERSION = 1

PASS = "PASS"
FAIL = "FAIL"
MONITOR = "MONITOR"


@dataclass(frozen=True)
class CheckResult:
    check: str
    label: str
    status: str
    detail: str


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# shared fixtures
# ---------------------------------------------------------------------------

_BUMP_SHARPNESS = (0.25, 0.5, 1.0)

_VORONOI_BOUNDS = {
    "Delta_1_12": 4000,
    "E8_2_8": 4000,
    "E6_3_6": 6000,
    "E4_5_4": 9000,
    "E2_11_2": 20000,
}


def _moment_window() -> kernels.SmoothBump:
    return kernels.SmoothBump(0.5, 2.5, sharpness=1.0, normalization="peak")


def _voronoi_window() -> kernels.SmoothBump:
    return kernels.SmoothBump(40.0, 200.0, sharpness=1.0, normalization="peak")


def acceptance_specs() -> list[pipeline.ShiftedSumSpec]:
    """Eight shifted-sum specs spanning the five forms, X = Y in {20, 40},
    shift moduli in {2, 3, 5} coprime to the level, r in {+-1, +-2}."""
    window = pipeline.default_window()
    rows = [
        ("Delta_1_12", 3, 1, 20.0),
        ("Delta_1_12", 5, -2, 40.0),
        ("E8_2_8", 5, -1, 20.0),
        ("E8_2_8", 3, 1, 40.0),
        ("E6_3_6", 2, -1, 40.0),
        ("E4_5_4", 2, 2, 20.0),
        ("E4_5_4", 3, -1, 40.0),
        ("E2_11_2", 2, 1, 40.0),
        ("E2_11_2", 3, 2, 20.0),
    ]
    specs = []
    for fid, m, r, x in rows:
        f = modforms.builtin_form(fid)
        specs.append(
            pipeline.ShiftedSumSpec(
                f1=f, f2=f, r=r, shift_modulus=m, x_scale=x, y_scale=x, window=window
            )
        )
    return specs


# ---------------------------------------------------------------------------
# arith
# ---------------------------------------------------------------------------


def check_divisor_identities() -> CheckResult:
    table = arith.MultiplicativeTable(10_000)
    for n in range(1, 10_001):
        mu_sum = 0
        phi_sum = 0
        for d in arith.divisors(n):
            mu_sum += table.mu[d]
            phi_sum += table.phi[d]
        if mu_sum != (1 if n == 1 else 0) or phi_sum != n:
            return CheckResult(
                "arith.divisor-identities",
                "Moebius and totient divisor sums",
                FAIL,
                f"failure at n={n}",
            )
    return CheckResult(
        "arith.divisor-identities",
        "Moebius and totient divisor sums",
        PASS,
        "n <= 10000",
    )


def check_phi_star_oracle() -> CheckResult:
    for m in range(1, 201):
        brute = sum(1 for c in characters.enumerate_characters(m) if c.is_primitive)
        if brute != arith.phi_star(m):
            return CheckResult(
                "arith.phi-star",
                "primitive character count vs divisor formula",
                FAIL,
                f"mismatch at M={m}: {brute} vs {arith.phi_star(m)}",
            )
    return CheckResult(
        "arith.phi-star",
        "primitive character count vs divisor formula",
        PASS,
        "M <= 200",
    )


def check_factorize_roundtrip() -> CheckResult:
    rng = random.Random(20240801)
    primes = []
    while len(primes) < 2000:
        cand = rng.randrange(3, 1_000_000)
        if arith.is_prime(cand):
            primes.append(cand)
    for i in range(1000):
        p, q = primes[2 * i], primes[2 * i + 1]
        fac = arith.factorize(p * q)
        fac.validate()
        expected = sorted([p, q])
        got = sorted(pr for pr, e in fac.factors for _ in range(e))
        if got != expected:
            return CheckResult(
                "arith.factorize-roundtrip",
                "factorization of random prime products",
                FAIL,
                f"{p}*{q} -> {fac.factors}",
            )
    return CheckResult(
        "arith.factorize-roundtrip",
        "factorization of random prime products",
        PASS,
        "1000 random pairs below 1e6",
    )


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------


def check_character_enumeration() -> CheckResult:
    for m in (1, 2, 5, 12, 16, 24, 45, 56, 100):
        chars = characters.enumerate_characters(m)
        again = characters.CharacterGroup(m).characters()
        if len(chars) != arith.phi(m):
            return CheckResult(
                "characters.enumeration", "character counts and stability", FAIL,
                f"count mismatch at M={m}",
            )
        if sum(c.is_principal for c in chars) != 1:
            return CheckResult(
                "characters.enumeration", "character counts and stability", FAIL,
                f"principal count at M={m}",
            )
        for c1, c2 in zip(chars, again):
            if c1.index != c2.index or [c1.exponent(n) for n in range(m)] != [
                c2.exponent(n) for n in range(m)
            ]:
                return CheckResult(
                    "characters.enumeration", "character counts and stability", FAIL,
                    f"unstable tables at M={m}",
                )
    return CheckResult(
        "characters.enumeration",
        "character counts and stability",
        PASS,
        "sampled moduli to 100",
    )


def check_gauss_modulus() -> CheckResult:
    worst = 0.0
    for m in range(2, 51):
        for chi in characters.enumerate_characters(m):
            if not chi.is_primitive:
                continue
            g = characters.gauss_sum(chi)
            worst = max(worst, abs(abs(g) - math.sqrt(m)) / math.sqrt(m))
    ok = worst <= 1e-10
    return CheckResult(
        "characters.gauss-modulus",
        "Gauss sums of primitive characters have modulus sqrt(M)",
        PASS if ok else FAIL,
        f"worst relative deviation {_fmt(worst)} (tolerance 1e-10)",
    )


def check_gauss_twist_identity() -> CheckResult:
    rng = random.Random(7)
    worst = 0.0
    for m in (5, 8, 12, 13, 21, 36, 40):
        roots_m = [
            complex(math.cos(2 * math.pi * b / m), math.sin(2 * math.pi * b / m))
            for b in range(m)
        ]
        for chi in characters.enumerate_characters(m):
            if not chi.is_primitive:
                continue
            bar = characters.gauss_sum(chi.conjugate())
            for _ in range(4):
                n = rng.randrange(0, 3 * m)
                direct = sum(
                    chi(b).conjugate() * roots_m[n * b % m] for b in range(m)
                )
                lhs = chi(n) * bar
                worst = max(worst, abs(lhs - direct))
    ok = worst <= 1e-9
    return CheckResult(
        "characters.gauss-twist",
        "chi(n) tau(conj chi) equals the twisted additive sum",
        PASS if ok else FAIL,
        f"worst deviation {_fmt(worst)} (tolerance 1e-9)",
    )


def check_orthogonality() -> CheckResult:
    rng = random.Random(99)
    for m in range(1, 101):
        n = rng.randrange(1, 1000)
        k = rng.randrange(1, 1000)
        add = characters.additive_orthogonality_sum(m, n, k)
        expect = m if (n - k) % m == 0 else 0
        if abs(add - expect) > 1e-9 * m:
            return CheckResult(
                "characters.orthogonality", "additive and multiplicative orthogonality",
                FAIL, f"additive failure at M={m}",
            )
    for m in (7, 15, 16, 21):
        for _ in range(10):
            n = rng.randrange(1, 500)
            k = rng.randrange(1, 500)
            if gcd(n, m) != 1 or gcd(k, m) != 1:
                continue
            got = characters.orthogonality_sum(m, n, k)
            expect = arith.phi(m) if (n - k) % m == 0 else 0
            if got != expect:
                return CheckResult(
                    "characters.orthogonality",
                    "additive and multiplicative orthogonality",
                    FAIL,
                    f"multiplicative failure at M={m}, n={n}, m={k}",
                )
    return CheckResult(
        "characters.orthogonality",
        "additive and multiplicative orthogonality",
        PASS,
        "random arguments, exact integer results",
    )


# ---------------------------------------------------------------------------
# expsums
# ---------------------------------------------------------------------------


def check_weil_sweep() -> CheckResult:
    rng = random.Random(31337)
    worst_ratio = 0.0
    worst_imag = 0.0
    for c in range(1, 2001):
        for _ in range(20):
            a = rng.randrange(-(10**6), 10**6)
            b = rng.randrange(-(10**6), 10**6)
            v = expsums.kloosterman(a, b, c)
            if abs(v.value) > v.weil_bound + 1e-9:
                return CheckResult(
                    "expsums.weil-sweep", "Weil bound on c <= 2000 sweep", FAIL,
                    f"violation at (a,b,c)=({a},{b},{c})",
                )
            worst_ratio = max(worst_ratio, abs(v.value) / v.weil_bound)
            worst_imag = max(worst_imag, v.imag_residual / max(c, 1))
    return CheckResult(
        "expsums.weil-sweep",
        "Weil bound on c <= 2000 sweep",
        PASS,
        f"worst |S|/bound {_fmt(worst_ratio)}, worst imag/c {_fmt(worst_imag)}",
    )


def check_kloosterman_symmetry() -> CheckResult:
    rng = random.Random(5)
    worst = 0.0
    for _ in range(300):
        c = rng.randrange(1, 1500)
        a = rng.randrange(-500, 500)
        b = rng.randrange(-500, 500)
        worst = max(
            worst,
            abs(expsums.kloosterman(a, b, c).value - expsums.kloosterman(b, a, c).value),
        )
    ok = worst <= 1e-9
    return CheckResult(
        "expsums.symmetry",
        "argument symmetry S(a,b;c) = S(b,a;c)",
        PASS if ok else FAIL,
        f"worst deviation {_fmt(worst)} (tolerance 1e-9)",
    )


def check_collapse_bitwise() -> CheckResult:
    from math import cos, sin, pi

    rng = random.Random(17)
    for _ in range(60):
        c = rng.randrange(1, 600)
        a = rng.randrange(0, c) if c > 1 else 0
        b = rng.randrange(0, c) if c > 1 else 0
        # independent direct loop, same pinned algorithm rewritten in place
        if c == 1:
            direct = 1.0
        else:
            s = 0.0
            comp = 0.0
            for x in range(1, c):
                if gcd(x, c) != 1:
                    continue
                t = (a * x + b * pow(x, -1, c)) % c
                term = cos(2.0 * pi * t / c)
                y = term - comp
                tot = s + y
                comp = (tot - s) - y
                s = tot
            direct = s
        if direct != expsums.kloosterman(a, b, c).value:
            return CheckResult(
                "expsums.collapse-bitwise",
                "direct character-sum loop matches kloosterman() bit for bit",
                FAIL,
                f"mismatch at (a,b,c)=({a},{b},{c})",
            )
    return CheckResult(
        "expsums.collapse-bitwise",
        "direct character-sum loop matches kloosterman() bit for bit",
        PASS,
        "60 random triples",
    )


def check_twisted_multiplicativity() -> CheckResult:
    rng = random.Random(23)
    worst = 0.0
    tried = 0
    while tried < 200:
        c1 = rng.randrange(1, 120)
        c2 = rng.randrange(1, 120)
        if gcd(c1, c2) != 1 or c1 * c2 > 10_000:
            continue
        tried += 1
        m = rng.randrange(-100, 100)
        n = rng.randrange(-100, 100)
        left, right = expsums.twisted_multiplicativity(m, n, c1, c2)
        worst = max(worst, abs(left - right))
    ok = worst <= 1e-8
    return CheckResult(
        "expsums.twisted-multiplicativity",
        "modulus factorization of Kloosterman sums",
        PASS if ok else FAIL,
        f"worst |left-right| {_fmt(worst)} over 200 tuples (tolerance 1e-8)",
    )


def check_crt_flag() -> CheckResult:
    rng = random.Random(71)
    worst = 0.0
    for _ in range(1000):
        c = rng.randrange(2, 3000)
        a = rng.randrange(-2000, 2000)
        b = rng.randrange(-2000, 2000)
        v1 = expsums.kloosterman(a, b, c).value
        v2 = expsums.kloosterman(a, b, c, use_crt=True).value
        worst = max(worst, abs(v1 - v2))
    ok = worst <= 1e-8
    return CheckResult(
        "expsums.crt-flag",
        "CRT fast path agrees with brute force",
        PASS if ok else FAIL,
        f"worst deviation {_fmt(worst)} over 1000 cases (tolerance 1e-8)",
    )


def check_ramanujan_degeneration() -> CheckResult:
    for c in range(1, 501):
        v = expsums.kloosterman(1, 0, c)
        if abs(v.value - arith.mobius(c)) > 1e-9:
            return CheckResult(
                "expsums.ramanujan", "S(1,0;c) degenerates to the Moebius value",
                FAIL, f"failure at c={c}",
            )
        if expsums.ramanujan_sum(c, 0) != arith.phi(c):
            return CheckResult(
                "expsums.ramanujan", "S(1,0;c) degenerates to the Moebius value",
                FAIL, f"c_q(0) != phi at c={c}",
            )
    return CheckResult(
        "expsums.ramanujan",
        "S(1,0;c) degenerates to the Moebius value",
        PASS,
        "c <= 500",
    )


def check_residue_recombination() -> CheckResult:
    for q, p in ((1, 3), (2, 3), (4, 5), (9, 11), (12, 7), (25, 4)):
        got = expsums.recombine_residues(q, p)
        if len(got) != arith.phi(q) * p:
            return CheckResult(
                "expsums.recombination",
                "a + b q recombination covers the residues mod q p",
                FAIL,
                f"cardinality at (q,p)=({q},{p})",
            )
    return CheckResult(
        "expsums.recombination",
        "a + b q recombination covers the residues mod q p",
        PASS,
        "set equality verified inside the constructor",
    )


# ---------------------------------------------------------------------------
# modforms
# ---------------------------------------------------------------------------


def check_deligne_bound() -> CheckResult:
    for fid in modforms.BUILTIN_FORM_IDS:
        f = modforms.builtin_form(fid)
        for n in range(1, 2001):
            if not modforms.deligne_ok(f, n):
                return CheckResult(
                    "modforms.deligne", "coefficient bound |a(n)| <= tau(n) n^((k-1)/2)",
                    FAIL, f"{fid} at n={n}",
                )
    return CheckResult(
        "modforms.deligne",
        "coefficient bound |a(n)| <= tau(n) n^((k-1)/2)",
        PASS,
        "all five forms, n <= 2000, exact integers",
    )


def check_hecke_exact() -> CheckResult:
    for fid in modforms.BUILTIN_FORM_IDS:
        f = modforms.builtin_form(fid)
        for m in range(2, 2001):
            for n in range(2, 2000 // m + 1):
                if gcd(n, f.level) != 1:
                    continue
                if modforms.hecke_residual_exact(f, m, n) != 0:
                    return CheckResult(
                        "modforms.hecke", "multiplicative relations on a(n)", FAIL,
                        f"{fid} at (m,n)=({m},{n})",
                    )
    return CheckResult(
        "modforms.hecke",
        "multiplicative relations on a(n)",
        PASS,
        "all five forms, m n <= 2000, exact integers",
    )


def check_eta_determinism() -> CheckResult:
    a = modforms.eta_product_series(((1, 2), (11, 2)), 600)
    b = modforms.eta_product_series(((11, 2), (1, 2)), 600)
    ok = a == b
    return CheckResult(
        "modforms.eta-determinism",
        "eta expansion independent of multiplication order",
        PASS if ok else FAIL,
        "level-11 recipe, two orders, 600 coefficients",
    )


def check_level_coefficient() -> CheckResult:
    rows = []
    ok = True
    for fid in modforms.BUILTIN_FORM_IDS:
        f = modforms.builtin_form(fid)
        if f.level == 1:
            continue
        lhs = f.a(f.level) ** 2
        rhs = f.level ** (f.weight - 2)
        ok = ok and lhs == rhs
        rows.append(f"{fid}: a(P)^2={lhs} P^(k-2)={rhs}")
    return CheckResult(
        "modforms.level-coefficient",
        "a(P)^2 = P^(k-2) at the level prime (monitored)",
        MONITOR if ok else FAIL,
        "; ".join(rows),
    )


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


def check_delta_plain() -> CheckResult:
    worst = 0.0
    cqs = []
    for q_scale in (6.0, 10.0, 25.0):
        for s in _BUMP_SHARPNESS:
            scheme = kernels.calibrate(
                kernels.DeltaScheme(q_scale, 1, pipeline.default_delta_bump(s))
            )
            cqs.append(scheme.c_q)
            if not 0.9 <= scheme.c_q <= 1.1:
                return CheckResult(
                    "kernels.delta-plain", "plain decomposition detects [n = 0]",
                    FAIL, f"c_Q={scheme.c_q} outside [0.9,1.1] at Q={q_scale}",
                )
            if kernels.delta_decompose(0, scheme) != 1.0:
                return CheckResult(
                    "kernels.delta-plain", "plain decomposition detects [n = 0]",
                    FAIL, f"anchor not exact at Q={q_scale}, s={s}",
                )
            for n in range(1, 101):
                v = kernels.delta_decompose(n, scheme)
                if v != kernels.delta_decompose(-n, scheme):
                    return CheckResult(
                        "kernels.delta-plain", "plain decomposition detects [n = 0]",
                        FAIL, f"evenness broken at n={n}",
                    )
                worst = max(worst, abs(v))
    ok = worst <= 1e-8
    return CheckResult(
        "kernels.delta-plain",
        "plain decomposition detects [n = 0]",
        PASS if ok else FAIL,
        f"worst |value| at n != 0: {_fmt(worst)}; c_Q range "
        f"[{_fmt(min(cqs))}, {_fmt(max(cqs))}]",
    )


def check_delta_lowered() -> CheckResult:
    worst_nonmult = 0.0
    worst_mult = 0.0
    worst_b = 0.0
    worst_zero = 0.0
    for level in (2, 3, 5, 11):
        scheme = kernels.calibrate(
            kernels.DeltaScheme(10.0, level, pipeline.default_delta_bump())
        )
        worst_zero = max(worst_zero, abs(kernels.delta_decompose_lowered(0, scheme) - 1.0))
        for n in range(1, 101):
            v = kernels.delta_decompose_lowered(n, scheme)
            if v != kernels.delta_decompose_lowered(-n, scheme):
                return CheckResult(
                    "kernels.delta-lowered",
                    "conductor-lowered decomposition and congruence average",
                    FAIL,
                    f"evenness broken at n={n}, P={level}",
                )
            if n % level:
                worst_nonmult = max(worst_nonmult, abs(v))
                worst_b = max(worst_b, abs(kernels.congruence_average(n, level)))
            else:
                worst_mult = max(worst_mult, abs(v))
    ok = worst_nonmult <= 1e-8 and worst_mult <= 1e-8 and worst_b <= 1e-12 and worst_zero <= 1e-8
    return CheckResult(
        "kernels.delta-lowered",
        "conductor-lowered decomposition and congruence average",
        PASS if ok else FAIL,
        f"worst off-multiple {_fmt(worst_nonmult)}, worst multiple {_fmt(worst_mult)}, "
        f"worst congruence average {_fmt(worst_b)}, anchor error {_fmt(worst_zero)}",
    )


def check_bessel() -> CheckResult:
    def oracle(k, x, nodes=8192):
        ts = np.linspace(0.0, math.pi, nodes + 1)
        vals = np.cos(k * ts - x * np.sin(ts))
        return float(np.trapezoid(vals, ts) / math.pi)

    worst_oracle = 0.0
    for k in (0, 1, 2, 5, 11):
        for x in (1.0, 5.0, 20.0):
            worst_oracle = max(worst_oracle, abs(kernels.bessel_j(k, x) - oracle(k, x)))
    worst_branch = 0.0
    for k in (0, 1, 5, 11, 20):
        ev = kernels.BesselEvaluator(k)
        for x in np.linspace(11.0, 13.0, 9):
            worst_branch = max(
                worst_branch, abs(ev.series_branch(float(x)) - ev.asymptotic_branch(float(x)))
            )
    worst_rec = 0.0
    for k in (1, 2, 5, 11, 19):
        for x in np.linspace(0.5, 30.0, 30):
            lhs = kernels.bessel_j(k - 1, float(x)) + kernels.bessel_j(k + 1, float(x))
            rhs = 2.0 * k / float(x) * kernels.bessel_j(k, float(x))
            worst_rec = max(worst_rec, abs(lhs - rhs))
    ok = worst_oracle <= 1e-8 and worst_branch <= 1e-8 and worst_rec <= 1e-7
    return CheckResult(
        "kernels.bessel",
        "J-Bessel vs integral oracle, branch agreement, recurrence",
        PASS if ok else FAIL,
        f"oracle {_fmt(worst_oracle)}, branches {_fmt(worst_branch)}, "
        f"recurrence {_fmt(worst_rec)}",
    )


def check_delta_weight_envelope() -> CheckResult:
    bump = pipeline.default_delta_bump()
    fitted = 0.0
    for x in np.linspace(0.02, 3.0, 50):
        for y in np.linspace(-2.0, 2.0, 50):
            g = kernels.delta_weight(float(x), float(y), bump)
            if float(x) > max(1.0, 2.0 * abs(float(y))) and g != 0.0:
                return CheckResult(
                    "kernels.weight-support", "delta weight support and x^-1 envelope",
                    FAIL, f"support violated at x={x}, y={y}",
                )
            fitted = max(fitted, abs(g) * float(x))
    return CheckResult(
        "kernels.weight-support",
        "delta weight support and x^-1 envelope",
        MONITOR,
        f"fitted envelope constant sup x|g| = {_fmt(fitted)} on a 50x50 grid",
    )


_J_CASES = (
    (0.25, 0.3, 1, 1, 8.0, 1, 2.0, 4.0, 4.0, 11),
    (0.5, 0.5, 1, 2, 10.0, 2, 3.0, 6.0, 5.0, 1),
    (0.8, 0.4, 1, 1, 6.0, 3, 1.0, 3.0, 3.0, 3),
    (1.5, 1.0, 2, 1, 12.0, 2, -2.0, 5.0, 4.0, 5),
    (2.5, 2.0, 1, 1, 9.0, 5, 0.5, 4.0, 6.0, 7),
)


def _riemann_reference(a, b, c, q, q_cap_v, level, r_shift, xs_, ys_, window, order, bump, n=1000):
    xs = np.linspace(xs_ / 2, 5 * xs_ / 2, n, endpoint=False) + (2 * xs_) / n / 2
    ys = np.linspace(ys_ / 2, 5 * ys_ / 2, n, endpoint=False) + (2 * ys_) / n / 2
    fx = window.fx.value_array(xs / xs_)
    fy = window.fy.value_array(ys / ys_)
    jx = kernels.bessel_j_array(order, 4 * math.pi * a * np.sqrt(xs))
    jy = kernels.bessel_j_array(order, 4 * math.pi * b * np.sqrt(ys))
    col = fx * jx / np.sqrt(xs)
    row = fy * jy / np.sqrt(ys)
    tot = 0.0
    for i, x in enumerate(xs):
        g = kernels.delta_weight_array(
            q * c / q_cap_v, (x - ys + r_shift) / (level * q_cap_v**2), bump
        )
        tot += col[i] * float(np.dot(g, row))
    return tot * (2 * xs_ / n) * (2 * ys_ / n)


def check_double_integral() -> CheckResult:
    bump = pipeline.default_delta_bump()
    window = pipeline.default_window()
    worst_ratio = 0.0
    for case in _J_CASES:
        a, b, c, q, q_cap_v, level, r_shift, xs_, ys_, order = case
        res = kernels.double_bessel_integral(
            a, b, c, q, q_cap_v, level, r_shift, xs_, ys_, window, order, bump
        )
        ref = _riemann_reference(
            a, b, c, q, q_cap_v, level, r_shift, xs_, ys_, window, order, bump
        )
        diff = abs(res.value - ref)
        if diff > 3.0 * max(res.error_estimate, 1e-14):
            return CheckResult(
                "kernels.double-integral",
                "adaptive double integral vs 1e6-cell midpoint grid",
                FAIL,
                f"case {case}: diff {diff} vs estimate {res.error_estimate}",
            )
        worst_ratio = max(worst_ratio, diff / max(res.error_estimate, 1e-14))
    # trivial zero: support of the weight violated everywhere on the box
    res0 = kernels.double_bessel_integral(
        0.5, 0.5, 4, 9, 6.0, 1, 0.0, 3.0, 3.0, window, 3, bump
    )
    if res0.value != 0.0:
        return CheckResult(
            "kernels.double-integral",
            "adaptive double integral vs 1e6-cell midpoint grid",
            FAIL,
            f"support-violating parameters gave {res0.value}",
        )
    return CheckResult(
        "kernels.double-integral",
        "adaptive double integral vs 1e6-cell midpoint grid",
        PASS,
        f"5 parameter sets, worst diff/estimate {_fmt(worst_ratio)}; "
        "zero outside the weight support",
    )


def check_double_integral_envelope() -> CheckResult:
    bump = pipeline.default_delta_bump()
    window = pipeline.default_window()
    fitted = 0.0
    for a in (0.3, 0.8, 1.6):
        for b in (0.4, 1.0, 2.1):
            for q in (1, 2, 3):
                res = kernels.double_bessel_integral(
                    a, b, 1, q, 9.0, 2, 1.5, 4.0, 4.0, window, 3, bump
                )
                xs_, ys_ = 4.0, 4.0
                envelope = (
                    window.z_bound
                    * math.sqrt(xs_ * ys_)
                    * 9.0
                    / q
                    / math.sqrt((1 + a * math.sqrt(xs_)) * (1 + b * math.sqrt(ys_)))
                )
                fitted = max(fitted, abs(res.value) / envelope)
    return CheckResult(
        "kernels.double-integral-envelope",
        "double integral against its decay envelope (fitted constant)",
        MONITOR,
        f"fitted constant {_fmt(fitted)} on the 3x3x3 grid",
    )


def check_truncation_ranges() -> CheckResult:
    t1, t2 = kernels.truncation_ranges(1, 4.0, 4.0, 1.0, 1.0, 2.0, 2, kernels.Stratum.COPRIME)
    e1 = 2**2 / 4.0 * (1.0 + 4.0 / (1 * 2.0 * 2)) ** 2
    s1, _ = kernels.truncation_ranges(1, 4.0, 4.0, 1.0, 1.0, 2.0, 2, kernels.Stratum.GAMMA)
    m1, _ = kernels.truncation_ranges(3, 5.0, 7.0, 1.5, 2.0, 4.0, 1, kernels.Stratum.MODULUS)
    c1, _ = kernels.truncation_ranges(3, 5.0, 7.0, 1.5, 2.0, 4.0, 1, kernels.Stratum.COPRIME)
    ok = (
        math.isclose(t1, e1)
        and math.isclose(t1 / s1, 2.0)
        and math.isclose(m1, c1)  # level 1 collapses the strata
        and math.isclose(t2, e1)
    )
    return CheckResult(
        "kernels.truncation-ranges",
        "dual-sum truncation formulas per stratum",
        PASS if ok else FAIL,
        "substitution values and stratum ratios",
    )


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------


def check_shifted_pipeline() -> CheckResult:
    worst_id = 0.0  # identity residual / its tolerance; pass while <= 1
    worst_part = 0.0
    for spec in acceptance_specs():
        rep = pipeline.shifted_sum_delta(spec)
        id_tol = max(1e-6 * abs(rep.direct_value), 1e-10)
        worst_id = max(worst_id, rep.identity_residual / id_tol)
        part_tol = 1e-8 * max(abs(rep.delta_value), 1e-300)
        worst_part = max(worst_part, rep.partition_residual / part_tol)
    ok = worst_id <= 1.0 and worst_part <= 1.0
    return CheckResult(
        "pipeline.shifted-identity",
        "shifted sums: direct vs decomposition, stratum partition",
        PASS if ok else FAIL,
        f"worst identity residual at {_fmt(worst_id)} of tolerance, worst "
        f"partition residual at {_fmt(worst_part)} of tolerance",
    )


def check_kloosterman_collapse() -> CheckResult:
    rng = random.Random(4242)
    worst = 0.0
    for stratum in (kernels.Stratum.COPRIME, kernels.Stratum.GAMMA, kernels.Stratum.MODULUS):
        done = 0
        while done < 100:
            level = rng.choice((2, 3, 5, 11))
            q = rng.randrange(1, 13)
            if stratum != kernels.Stratum.MODULUS and gcd(q, level) != 1:
                continue
            r = rng.choice((1, -1, 2, -2))
            if gcd(r, level) != 1:
                continue
            m_shift = rng.choice((1, 2, 3, 5, 6))
            n = rng.randrange(1, 60)
            m = rng.randrange(1, 60)
            direct, closed = pipeline.kloosterman_collapse(
                stratum, r, m_shift, n, m, level, q
            )
            worst = max(worst, abs(direct - closed))
            done += 1
    ok = worst <= 1e-8
    return CheckResult(
        "pipeline.kloosterman-collapse",
        "stratum character sums equal their closed Kloosterman forms",
        PASS if ok else FAIL,
        f"worst |direct - closed| {_fmt(worst)} over 100 tuples per stratum",
    )


def check_voronoi() -> CheckResult:
    h = _voronoi_window()
    worst_eta = 0.0
    worst_res = 0.0
    for fid in modforms.BUILTIN_FORM_IDS:
        f = modforms.builtin_form(fid, bound=_VORONOI_BOUNDS[fid])
        for q in (1, 2, 3, 4):
            if gcd(q, f.level) != 1:
                continue
            rep = pipeline.verify_voronoi(f, 1, q, h)
            worst_eta = max(worst_eta, rep.eta_abs_error)
            worst_res = max(worst_res, rep.residual)
    ok = worst_eta <= 1e-6 and worst_res <= 1e-5
    return CheckResult(
        "pipeline.voronoi",
        "dual-summation phase has unit modulus, cross-validated",
        PASS if ok else FAIL,
        f"worst ||eta|-1| {_fmt(worst_eta)}, worst residual {_fmt(worst_res)}",
    )


def check_voronoi_ramified() -> CheckResult:
    h = _voronoi_window()
    rows = []
    for fid, q in (("E8_2_8", 2), ("E2_11_2", 11)):
        f = modforms.builtin_form(fid, bound=_VORONOI_BOUNDS[fid])
        rep = pipeline.verify_voronoi(f, 1, q, h)
        rows.append(
            f"{fid} q={q}: eta=({_fmt(rep.eta.real)}, {_fmt(rep.eta.imag)}), "
            f"|eta|-1={_fmt(rep.eta_abs_error)}, residual={_fmt(rep.residual)}"
        )
    return CheckResult(
        "pipeline.voronoi-ramified",
        "ramified dual-summation cases (reported, not asserted)",
        MONITOR,
        "; ".join(rows),
    )


def check_moment_identities() -> CheckResult:
    h = _moment_window()
    f = modforms.builtin_form("Delta_1_12")
    worst_open = 0.0
    for modulus in (3, 5, 15, 21):
        lhs, rhs = pipeline.gauss_square_opening(f, modulus, 30.0, h)
        worst_open = max(worst_open, abs(lhs - rhs) / max(abs(lhs), 1e-12))
    split = pipeline.diagonal_split(f, 3, 30.0, h)
    _, aggregate = pipeline.residue_class_average(f, 3, 30.0, h)
    recon = 3 * (split.diagonal + split.off_diagonal)
    worst_recon = abs(aggregate - recon) / max(abs(aggregate), 1e-10)
    empty = pipeline.diagonal_split(f, 31, 9.0, h)
    diag_ok = split.diagonal >= 0.0 and empty.off_diagonal == 0.0
    ok = worst_open <= 1e-8 and worst_recon <= 1e-8 and diag_ok
    return CheckResult(
        "pipeline.moment-identities",
        "Gauss-sum opening and diagonal split reconstruction",
        PASS if ok else FAIL,
        f"worst opening residual {_fmt(worst_open)}, reconstruction residual "
        f"{_fmt(worst_recon)}",
    )


def check_exponents() -> CheckResult:
    from fractions import Fraction

    b1 = pipeline.exponent_budget(Fraction(2, 5))
    b2 = pipeline.exponent_budget(0)
    b3 = pipeline.exponent_budget(Fraction(2, 7))
    ok = (
        b1.delta == 0
        and not b1.subconvex
        and b2.delta == Fraction(1, 10)
        and b2.final_exponent == Fraction(1, 5)
        and not b2.subconvex
        and b3.delta == Fraction(1, 40)
        and b3.subconvex
        and b3.classical_threshold == Fraction(2, 7)
    )
    # boundary scan of the subconvex flag
    for num in range(0, 50):
        eta = Fraction(num, 100)
        flag = pipeline.exponent_budget(eta).subconvex
        if flag != (0 < eta < Fraction(2, 5)):
            ok = False
    return CheckResult(
        "pipeline.exponents",
        "exact exponent arithmetic and the subconvex range",
        PASS if ok else FAIL,
        "delta(2/5)=0, delta(0)=1/10, delta(2/7)=1/40, flag on 0 < eta < 2/5",
    )


def check_bound_monotonicity() -> CheckResult:
    base = dict(level=3, modulus=20, x_scale=0.0, delta=0.05, epsilon=0.05)
    conductor = base["level"] * base["modulus"] ** 2
    base["x_scale"] = conductor**0.5
    v0 = pipeline.second_moment_bound(**base)
    up_p = pipeline.second_moment_bound(5, 20, (5 * 400) ** 0.5, 0.05, 0.05)
    up_m = pipeline.second_moment_bound(3, 40, (3 * 1600) ** 0.5, 0.05, 0.05)
    ok = up_p > v0 and up_m < v0
    window = pipeline.default_window()
    f = modforms.builtin_form("E6_3_6")
    s0 = pipeline.ShiftedSumSpec(f, f, 1, 2, 20.0, 20.0, window)
    s_x = pipeline.ShiftedSumSpec(f, f, 1, 2, 40.0, 20.0, window)
    s_y = pipeline.ShiftedSumSpec(f, f, 1, 2, 20.0, 40.0, window)
    s_xy = pipeline.ShiftedSumSpec(f, f, 1, 2, 40.0, 40.0, window)
    b0, bx, by, bxy = map(pipeline.shifted_sum_bound, (s0, s_x, s_y, s_xy))
    # doubling one scale: exponent 3/4 - 1/2 = +1/4; doubling both: -1/4
    ok = ok and bx == by and bx > b0
    ok = ok and math.isclose(bx / b0, 2.0**0.25, rel_tol=1e-12)
    ok = ok and math.isclose(bxy / b0, 2.0**-0.25, rel_tol=1e-12)
    return CheckResult(
        "pipeline.bound-monotonicity",
        "bound shapes move with their stated exponents",
        PASS if ok else FAIL,
        "second-moment bound in P and M; shifted-sum bound in X and Y",
    )


def check_moment_slope() -> CheckResult:
    h = _moment_window()
    slopes = []
    for fid in modforms.BUILTIN_FORM_IDS:
        f = modforms.builtin_form(fid)
        xs = []
        ys = []
        for modulus in range(11, 42, 2):
            if not arith.is_squarefree(modulus) or gcd(modulus, f.level) != 1:
                continue
            conductor = f.level * modulus * modulus
            grid = np.exp(
                np.linspace(math.log(conductor**0.45), math.log(conductor**0.55), 9)
            )
            proxy = float(
                np.mean([_per_shift_strength(f, modulus, float(x), h) for x in grid])
            )
            if proxy > 0:
                xs.append(math.log(modulus))
                ys.append(math.log(proxy))
        slope = float(np.polyfit(xs, ys, 1)[0])
        slopes.append((fid, slope))
    prediction = -0.25
    rows = [
        f"{fid}: slope={_fmt(s)} ({'inside' if abs(s - prediction) <= 0.2 else 'outside'})"
        for fid, s in slopes
    ]
    return CheckResult(
        "pipeline.moment-slope",
        "off-diagonal size vs shift modulus, envelope prediction -1/4 (monitored)",
        MONITOR,
        "; ".join(rows),
    )


def _per_shift_strength(f, modulus, x_scale, h) -> float:
    lo = int(math.floor(h.lo * x_scale)) + 1
    hi = int(math.ceil(h.hi * x_scale)) - 1
    vals = {
        n: f.lam(n) / math.sqrt(n) * h(n / x_scale) for n in range(max(1, lo), hi + 1)
    }
    r_bound = int(math.ceil(5.0 * x_scale / (2.0 * modulus)))
    total = 0.0
    for r in range(1, r_bound + 1):
        for sgn in (1, -1):
            s = math.fsum(
                v * vals.get(n + sgn * r * modulus, 0.0) for n, v in vals.items()
            )
            total += abs(s)
    return total


def check_shifted_ratio() -> CheckResult:
    ratios = []
    for spec in acceptance_specs():
        rep = pipeline.shifted_sum_delta(spec)
        ratios.append(abs(rep.direct_value) / rep.bound_value)
    return CheckResult(
        "pipeline.shifted-ratio",
        "fitted constant |S| / bound across the acceptance grid (monitored)",
        MONITOR,
        f"fitted constant {_fmt(max(ratios))} over {len(ratios)} specs",
    )


# ---------------------------------------------------------------------------
# registry and runner
# ---------------------------------------------------------------------------

REGISTRY: tuple[tuple[str, Callable[[], CheckResult]], ...] = (
    ("arith.divisor-identities", check_divisor_identities),
    ("arith.phi-star", check_phi_star_oracle),
    ("arith.factorize-roundtrip", check_factorize_roundtrip),
    ("characters.enumeration", check_character_enumeration),
    ("characters.gauss-modulus", check_gauss_modulus),
    ("characters.gauss-twist", check_gauss_twist_identity),
    ("characters.orthogonality", check_orthogonality),
    ("expsums.weil-sweep", check_weil_sweep),
    ("expsums.symmetry", check_kloosterman_symmetry),
    ("expsums.collapse-bitwise", check_collapse_bitwise),
    ("expsums.twisted-multiplicativity", check_twisted_multiplicativity),
    ("expsums.crt-flag", check_crt_flag),
    ("expsums.ramanujan", check_ramanujan_degeneration),
    ("expsums.recombination", check_residue_recombination),
    ("modforms.deligne", check_deligne_bound),
    ("modforms.hecke", check_hecke_exact),
    ("modforms.eta-determinism", check_eta_determinism),
    ("modforms.level-coefficient", check_level_coefficient),
    ("kernels.delta-plain", check_delta_plain),
    ("kernels.delta-lowered", check_delta_lowered),
    ("kernels.bessel", check_bessel),
    ("kernels.weight-support", check_delta_weight_envelope),
    ("kernels.double-integral", check_double_integral),
    ("kernels.double-integral-envelope", check_double_integral_envelope),
    ("kernels.truncation-ranges", check_truncation_ranges),
    ("pipeline.shifted-identity", check_shifted_pipeline),
    ("pipeline.kloosterman-collapse", check_kloosterman_collapse),
    ("pipeline.voronoi", check_voronoi),
    ("pipeline.voronoi-ramified", check_voronoi_ramified),
    ("pipeline.moment-identities", check_moment_identities),
    ("pipeline.exponents", check_exponents),
    ("pipeline.bound-monotonicity", check_bound_monotonicity),
    ("pipeline.moment-slope", check_moment_slope),
    ("pipeline.shifted-ratio", check_shifted_ratio),
)


def run_all(threads: int = 1) -> list[CheckResult]:
    """Run every check; rows come back in registration order."""
    if threads <= 1:
        return [fn() for _, fn in REGISTRY]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn) for _, fn in REGISTRY]
        return [f.result() for f in futures]
