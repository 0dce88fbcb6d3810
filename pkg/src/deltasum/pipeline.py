"""The end-to-end computations: shifted convolution sums evaluated two ways
(direct and through the conductor-lowered delta decomposition with its
coprime/gamma/modulus strata), dual-summation identity checks, the second
moment of twisted partial sums with its Gauss-sum opening and diagonal
split, the closed-form Kloosterman collapses, and the exact exponent
arithmetic for the hybrid subconvexity range.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .arith import inverse_mod, is_squarefree
from .characters import enumerate_characters
from .expsums import kloosterman
from .kernels import (
    DeltaScheme,
    ProductBump,
    SmoothBump,
    Stratum,
    bessel_j_array,
    calibrate,
    delta_weight_array,
)
from .modforms import InsufficientCoefficients, Newform

__all__ = [
    "DiagonalSplit",
    "ExponentBudget",
    "Inconclusive",
    "PipelineMismatch",
    "ShiftedSumSpec",
    "SumReport",
    "VoronoiReport",
    "default_delta_bump",
    "diagonal_split",
    "exponent_budget",
    "gauss_square_opening",
    "kloosterman_collapse",
    "q_cap",
    "residue_class_average",
    "second_moment",
    "second_moment_bound",
    "shifted_sum_bound",
    "shifted_sum_delta",
    "shifted_sum_direct",
    "verify_voronoi",
]


class PipelineMismatch(ArithmeticError):
    """Direct and decomposition values disagree beyond tolerance."""

    def __init__(self, direct_value: float, delta_value: float):
        super().__init__(
            f"direct {direct_value} vs decomposition {delta_value}: "
            f"difference {abs(direct_value - delta_value)}"
        )
        self.direct_value = direct_value
        self.delta_value = delta_value


class Inconclusive(ArithmeticError):
    """Both sides of an identity are too small to solve for the phase."""


IDENTITY_REL_TOL = 1e-6
IDENTITY_ABS_TOL = 1e-10
PARTITION_REL_TOL = 1e-8


def q_cap(x_scale: float, y_scale: float, level: int) -> float:
    """Q with Q^2 = 8 max(X, Y) / P, the smallest cap for which the outer
    modulus sum never leaves the weight's support."""
    if x_scale < 1 or y_scale < 1 or level < 1:
        raise ValueError("scales must be >= 1 and level >= 1")
    return math.sqrt(8.0 * max(x_scale, y_scale) / level)


def default_delta_bump(sharpness: float = 0.5) -> SmoothBump:
    """The scheme bump: supported in [1/2, 1], unit integral."""
    return SmoothBump(0.5, 1.0, sharpness=sharpness, normalization="integral")


def default_window() -> ProductBump:
    """Product test function supported on [1/2, 5/2]^2, peak 1 per factor."""
    return ProductBump(
        SmoothBump(0.5, 2.5, sharpness=1.0, normalization="peak"),
        SmoothBump(0.5, 2.5, sharpness=1.0, normalization="peak"),
    )


@dataclass(frozen=True)
class ShiftedSumSpec:
    """Parameters of one shifted convolution sum
    sum_{m = n + r M} lam1(n) lam2(m) / sqrt(n m) F(n/X, m/Y)."""

    f1: Newform
    f2: Newform
    r: int
    shift_modulus: int
    x_scale: float
    y_scale: float
    window: ProductBump

    def __post_init__(self):
        if self.f1.level != self.f2.level:
            raise ValueError("forms must share a level")
        if self.r == 0:
            raise ValueError("r must be nonzero")
        if gcd(self.r, self.level) != 1:
            raise ValueError("r must be coprime to the level")
        if self.shift_modulus < 1 or not is_squarefree(self.shift_modulus):
            raise ValueError("shift modulus must be positive and squarefree")
        if gcd(self.shift_modulus, self.level) != 1:
            raise ValueError("shift modulus must be coprime to the level")
        if self.x_scale < 1 or self.y_scale < 1:
            raise ValueError("scales must be >= 1")

    @property
    def level(self) -> int:
        return self.f1.level

    @property
    def q_scale(self) -> float:
        return q_cap(self.x_scale, self.y_scale, self.level)

    def supports(self) -> tuple[range, range]:
        """Integer n- and m-ranges on which the window can be nonzero."""
        nx = range(
            int(math.floor(self.window.fx.lo * self.x_scale)) + 1,
            int(math.ceil(self.window.fx.hi * self.x_scale)),
        )
        ny = range(
            int(math.floor(self.window.fy.lo * self.y_scale)) + 1,
            int(math.ceil(self.window.fy.hi * self.y_scale)),
        )
        return nx, ny

    def is_empty(self) -> bool:
        nx, ny = self.supports()
        shift = self.r * self.shift_modulus
        return not nx or not ny or nx.start + shift >= ny.stop or nx.stop + shift <= ny.start


@dataclass(frozen=True)
class SumReport:
    """A shifted sum evaluated directly and through the decomposition."""

    direct_value: float
    delta_value: float
    stratum_coprime: float
    stratum_gamma: float
    stratum_modulus: float
    bound_value: float
    identity_residual: float
    partition_residual: float


def shifted_sum_direct(spec: ShiftedSumSpec) -> float:
    """Reference evaluation: one constrained loop over n with m = n + rM."""
    nx, ny = spec.supports()
    shift = spec.r * spec.shift_modulus
    if nx and (nx.stop - 1 > spec.f1.bound):
        raise InsufficientCoefficients(
            f"need a({nx.stop - 1}) of {spec.f1.form_id}"
        )
    terms = []
    for n in nx:
        m = n + shift
        if m not in ny:
            continue
        if m > spec.f2.bound:
            raise InsufficientCoefficients(f"need a({m}) of {spec.f2.form_id}")
        terms.append(
            spec.f1.lam(n)
            * spec.f2.lam(m)
            / math.sqrt(n * m)
            * spec.window.fx(n / spec.x_scale)
            * spec.window.fy(m / spec.y_scale)
        )
    return math.fsum(terms)


def _pair_amplitudes(spec: ShiftedSumSpec) -> tuple[np.ndarray, np.ndarray]:
    """A(t) = sum over pairs with n - m + rM = t of the windowed product.

    Grouping by t is an exact reordering: the weight and character sums in
    the decomposition depend on (n, m) only through t.
    """
    nx, ny = spec.supports()
    ns = np.arange(nx.start, nx.stop)
    ms = np.arange(ny.start, ny.stop)
    if ns.size == 0 or ms.size == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    w1 = np.array(
        [spec.f1.lam(int(n)) / math.sqrt(n) * spec.window.fx(n / spec.x_scale) for n in ns]
    )
    w2 = np.array(
        [spec.f2.lam(int(m)) / math.sqrt(m) * spec.window.fy(m / spec.y_scale) for m in ms]
    )
    mat = np.outer(w1, w2)
    base = int(ns[0]) - int(ms[0]) + spec.r * spec.shift_modulus
    offsets = np.arange(-(len(ns) - 1), len(ms))
    ts = base - offsets
    amps = np.array([float(np.diagonal(mat, offset=int(o)).sum()) for o in offsets])
    keep = amps != 0.0
    return ts[keep], amps[keep]


def _gamma_cos_sums(ts: np.ndarray, q: int, level: int, gammas: np.ndarray) -> np.ndarray:
    """sum over gamma of cos(2 pi t gamma / (q P)) for each t (the sums are
    real by the gamma -> -gamma symmetry)."""
    qp = q * level
    if gammas.size == 0:
        return np.zeros(len(ts))
    phases = np.mod(np.outer(ts, gammas), qp)
    return np.cos((2.0 * math.pi / qp) * phases).sum(axis=1)


def _decomposition_pass(
    spec: ShiftedSumSpec,
    scheme: DeltaScheme,
    ts: np.ndarray,
    amps: np.ndarray,
    split: bool,
) -> tuple[float, float, float]:
    level = spec.level
    q_scale = scheme.q_scale
    p_q2 = level * q_scale * q_scale
    t_abs_max = float(np.abs(ts).max()) if ts.size else 0.0
    q_top = int(math.ceil(q_scale * max(1.0, 2.0 * t_abs_max / p_q2)))
    pieces = {Stratum.COPRIME: [], Stratum.GAMMA: [], Stratum.MODULUS: []}
    for q in range(1, q_top + 1):
        gvals = delta_weight_array(q / q_scale, ts / p_q2, scheme.bump)
        mask = gvals != 0.0
        if not mask.any():
            continue
        tsq = ts[mask]
        weight = amps[mask] * gvals[mask]
        qp = q * level
        all_gammas = np.array([g for g in range(qp) if gcd(g, q) == 1], dtype=np.int64)
        if not split:
            k = _gamma_cos_sums(tsq, q, level, all_gammas)
            pieces[Stratum.COPRIME].append(float(weight @ k))
            continue
        if level > 1 and q % level == 0:
            k = _gamma_cos_sums(tsq, q, level, all_gammas)
            pieces[Stratum.MODULUS].append(float(weight @ k))
        elif level > 1:
            cop = all_gammas[all_gammas % level != 0]
            div = all_gammas[all_gammas % level == 0]
            pieces[Stratum.COPRIME].append(
                float(weight @ _gamma_cos_sums(tsq, q, level, cop))
            )
            pieces[Stratum.GAMMA].append(
                float(weight @ _gamma_cos_sums(tsq, q, level, div))
            )
        else:
            k = _gamma_cos_sums(tsq, q, level, all_gammas)
            pieces[Stratum.COPRIME].append(float(weight @ k))
    norm = scheme.raw_zero * p_q2
    return (
        math.fsum(pieces[Stratum.COPRIME]) / norm,
        math.fsum(pieces[Stratum.GAMMA]) / norm,
        math.fsum(pieces[Stratum.MODULUS]) / norm,
    )


def shifted_sum_bound(spec: ShiftedSumSpec) -> float:
    """Z (Zx Zy)^(1/2) max(Zx, Zy)^2 P^(3/4) max(X, Y)^(3/4) / (X Y)^(1/2),
    the shifted-sum bound shape with unit implied constant."""
    w = spec.window
    zmax = max(w.zx_bound, w.zy_bound)
    return (
        w.z_bound
        * math.sqrt(w.zx_bound * w.zy_bound)
        * zmax**2
        * spec.level**0.75
        * max(spec.x_scale, spec.y_scale) ** 0.75
        / math.sqrt(spec.x_scale * spec.y_scale)
    )


def shifted_sum_delta(
    spec: ShiftedSumSpec, scheme: DeltaScheme | None = None
) -> SumReport:
    """Evaluate the shifted sum through the conductor-lowered decomposition
    and stratify it; the direct value and partition identity are checked
    against the SumReport tolerances."""
    if scheme is None:
        scheme = calibrate(DeltaScheme(spec.q_scale, spec.level, default_delta_bump()))
    if scheme.level != spec.level:
        raise ValueError("scheme level does not match the sum parameters")
    if not scheme.is_calibrated:
        raise ValueError("scheme must be calibrated")
    direct = shifted_sum_direct(spec)
    bound = shifted_sum_bound(spec)
    ts, amps = _pair_amplitudes(spec)
    if ts.size == 0:
        return SumReport(direct, 0.0, 0.0, 0.0, 0.0, bound, abs(direct), 0.0)
    total, _, _ = _decomposition_pass(spec, scheme, ts, amps, split=False)
    s1, s2, s3 = _decomposition_pass(spec, scheme, ts, amps, split=True)
    identity_residual = abs(direct - total)
    partition_residual = abs((s1 + s2 + s3) - total)
    if identity_residual > max(IDENTITY_REL_TOL * abs(direct), IDENTITY_ABS_TOL):
        raise PipelineMismatch(direct, total)
    if partition_residual > max(PARTITION_REL_TOL * abs(total), 1e-12):
        raise ArithmeticError(
            f"stratum partition {s1 + s2 + s3} does not reconstruct {total}"
        )
    return SumReport(
        direct_value=direct,
        delta_value=total,
        stratum_coprime=s1,
        stratum_gamma=s2,
        stratum_modulus=s3,
        bound_value=bound,
        identity_residual=identity_residual,
        partition_residual=partition_residual,
    )


# ---------------------------------------------------------------------------
# Closed-form Kloosterman collapses of the stratum character sums
# ---------------------------------------------------------------------------


def kloosterman_collapse(
    stratum: Stratum, r: int, m_shift: int, n: int, m: int, level: int, q: int
) -> tuple[complex, float]:
    """(direct, closed): the stratum character sum with its dual-side phases
    enumerated directly, and the closed Kloosterman form it collapses to.

    coprime stratum:          S(r M, m - n; P q)
    gamma-multiple stratum:   S(r M, (m - n) P^-1; q)
    modulus-multiple stratum: S(r M, m - n; P^2 q)
    """
    rm = r * m_shift
    if stratum in (Stratum.COPRIME, Stratum.GAMMA) and gcd(q, level) != 1:
        raise ValueError("this stratum requires gcd(q, level) = 1")
    if stratum == Stratum.COPRIME:
        modulus = q * level
        pairs = [(g, inverse_mod(g, modulus)) for g in range(modulus) if gcd(g, modulus) == 1]
        direct = _phase_sum(pairs, rm, m - n, modulus)
        closed = kloosterman(rm, m - n, modulus).value
    elif stratum == Stratum.GAMMA:
        modulus = q
        p_inv = inverse_mod(level, q)
        pairs = [(g, inverse_mod(g, q) * p_inv) for g in range(q) if gcd(g, q) == 1]
        direct = _phase_sum(pairs, rm, m - n, modulus)
        closed = kloosterman(rm, (m - n) * p_inv, q).value
    elif stratum == Stratum.MODULUS:
        modulus = q * level * level
        pairs = [
            (g, inverse_mod(g, modulus)) for g in range(modulus) if gcd(g, modulus) == 1
        ]
        direct = _phase_sum(pairs, rm, m - n, modulus)
        closed = kloosterman(rm, m - n, modulus).value
    else:
        raise ValueError(f"unknown stratum {stratum}")
    return direct, closed


def _phase_sum(pairs, front: int, back: int, modulus: int) -> complex:
    re = []
    im = []
    for g, gbar in pairs:
        z = cmath.exp(2j * cmath.pi * ((front * g + back * gbar) % modulus) / modulus)
        re.append(z.real)
        im.append(z.imag)
    return complex(math.fsum(re), math.fsum(im))


# ---------------------------------------------------------------------------
# Dual-summation identity (solve for the unit phase, cross-validate)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VoronoiReport:
    eta: complex
    eta_abs_error: float
    residual: float
    lhs: complex
    dual_side_unit: complex
    dual_terms: int


@lru_cache(maxsize=4)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _dual_side(
    f: Newform, a: int, q: int, h: SmoothBump, truncation_tol: float
) -> tuple[complex, int]:
    """(2 pi / (q sqrt(P2))) sum_n lam(n) e(-n (a P2)^-1 / q) I_h(n) with
    I_h(n) the Bessel-kernel integral of h; truncated once |I_h| stays below
    truncation_tol."""
    p2 = f.level // gcd(f.level, q)
    root_scale = q * math.sqrt(p2)
    inv = inverse_mod(a * p2, q) if q > 1 else 0
    order = f.weight - 1
    lo, hi = h.lo, h.hi
    span = math.sqrt(hi) - math.sqrt(lo)
    block = 256
    re_terms: list[float] = []
    im_terms: list[float] = []
    n_used = 0
    quiet_blocks = 0
    start = 1
    while True:
        if start > f.bound:
            raise InsufficientCoefficients(
                f"dual sum for {f.form_id} needs coefficients beyond {f.bound}"
            )
        stop = min(start + block - 1, f.bound)
        ns = np.arange(start, stop + 1)
        # 16-point Gauss per <= 3 oscillations keeps the panel error near
        # machine level while the residual tolerance is only 1e-5
        cycles = 2.0 * math.sqrt(float(ns[-1])) * span / root_scale
        panels = max(4, int(math.ceil(cycles / 3.0)))
        nodes, weights = _leggauss(16)
        edges = np.linspace(lo, hi, panels + 1)
        mids = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1] - edges[0])
        ys = (mids[:, None] + half * nodes[None, :]).ravel()
        wts = (half * weights)[None, :].repeat(panels, axis=0).ravel()
        hy = h.value_array(ys)
        args = (4.0 * math.pi / root_scale) * np.sqrt(np.outer(ns, ys))
        jvals = bessel_j_array(order, args.ravel()).reshape(args.shape)
        integrals = jvals @ (wts * hy)
        lam = np.array([f.lam(int(n)) for n in ns])
        phases = np.exp(-2j * math.pi * ((inv * ns) % q) / q) if q > 1 else np.ones(len(ns))
        terms = lam * integrals * phases
        re_terms.extend(terms.real.tolist())
        im_terms.extend(terms.imag.tolist())
        n_used = stop
        if float(np.abs(integrals).max()) < truncation_tol:
            quiet_blocks += 1
            if quiet_blocks >= 2:
                break
        else:
            quiet_blocks = 0
        start = stop + 1
    total = complex(math.fsum(re_terms), math.fsum(im_terms))
    return total * (2.0 * math.pi / root_scale), n_used


def _twisted_partial_sum(f: Newform, a: int, q: int, h: SmoothBump) -> complex:
    lo = int(math.floor(h.lo)) + 1
    hi = int(math.ceil(h.hi)) - 1
    if hi > f.bound:
        raise InsufficientCoefficients(f"need a({hi}) of {f.form_id}")
    re = []
    im = []
    for n in range(max(1, lo), hi + 1):
        z = f.lam(n) * h(n) * cmath.exp(2j * cmath.pi * ((a * n) % q) / q)
        re.append(z.real)
        im.append(z.imag)
    return complex(math.fsum(re), math.fsum(im))


def verify_voronoi(
    f: Newform,
    a: int,
    q: int,
    h: SmoothBump,
    h2: SmoothBump | None = None,
    truncation_tol: float = 1e-12,
) -> VoronoiReport:
    """Solve for the unit phase in the dual-summation identity and
    cross-validate it on an independent test function.

    lhs = sum lam(n) e(n a / q) h(n) is matched against the dual side with
    the hypothesis that the dual form equals f; eta = lhs / dual. The
    residual is |lhs2 - eta * dual2| / |lhs2| for the second test function.
    """
    if gcd(a, q) != 1:
        raise ValueError("a and q must be coprime")
    if h2 is None:
        h2 = SmoothBump(h.lo, h.hi, sharpness=h.sharpness * 1.7, normalization="peak")
    lhs = _twisted_partial_sum(f, a, q, h)
    dual, used = _dual_side(f, a, q, h, truncation_tol)
    if abs(dual) <= 1e-8 and abs(lhs) <= 1e-8:
        raise Inconclusive(
            f"both sides below 1e-8 (|lhs|={abs(lhs)}, |dual|={abs(dual)}); "
            "choose a different test function"
        )
    eta = lhs / dual
    lhs2 = _twisted_partial_sum(f, a, q, h2)
    dual2, used2 = _dual_side(f, a, q, h2, truncation_tol)
    residual = abs(lhs2 - eta * dual2) / max(abs(lhs2), 1e-12)
    return VoronoiReport(
        eta=eta,
        eta_abs_error=abs(abs(eta) - 1.0),
        residual=residual,
        lhs=lhs,
        dual_side_unit=dual,
        dual_terms=max(used, used2),
    )


# ---------------------------------------------------------------------------
# Second moment of twisted partial sums
# ---------------------------------------------------------------------------


def _lam_window(f: Newform, x_scale: float, h: SmoothBump) -> tuple[np.ndarray, np.ndarray]:
    lo = int(math.floor(h.lo * x_scale)) + 1
    hi = int(math.ceil(h.hi * x_scale)) - 1
    if hi > f.bound:
        raise InsufficientCoefficients(f"need a({hi}) of {f.form_id}")
    ns = np.arange(max(1, lo), hi + 1)
    vals = np.array([f.lam(int(n)) / math.sqrt(n) * h(n / x_scale) for n in ns])
    return ns, vals


def _check_moment_args(f: Newform, modulus: int) -> None:
    if gcd(modulus, f.level) != 1:
        raise ValueError("modulus must be coprime to the level")
    if not is_squarefree(modulus):
        raise ValueError("modulus must be squarefree")


def second_moment(f: Newform, modulus: int, x_scale: float, h: SmoothBump) -> float:
    """(1 / phi*(M)) sum over primitive chi of |sum lam(n) chi(n) n^-1/2
    h(n/X)|^2, by direct enumeration."""
    _check_moment_args(f, modulus)
    ns, vals = _lam_window(f, x_scale, h)
    chars = [c for c in enumerate_characters(modulus) if c.is_primitive]
    if not chars:
        raise ValueError(f"no primitive characters mod {modulus}")
    moments = []
    for chi in chars:
        re = []
        im = []
        for n, v in zip(ns, vals):
            z = chi(int(n))
            if z:
                re.append(v * z.real)
                im.append(v * z.imag)
        moments.append(math.fsum(re) ** 2 + math.fsum(im) ** 2)
    return math.fsum(moments) / len(chars)


def residue_class_average(
    f: Newform, modulus: int, x_scale: float, h: SmoothBump
) -> tuple[np.ndarray, complex]:
    """T_b = sum_n lam(n) n^-1/2 e(n b / M) h(n/X) for all residues b, and
    the additive-orthogonality aggregate sum_b |T_b|^2."""
    ns, vals = _lam_window(f, x_scale, h)
    t_b = np.zeros(modulus, dtype=complex)
    for b in range(modulus):
        re = []
        im = []
        for n, v in zip(ns, vals):
            z = cmath.exp(2j * cmath.pi * ((int(n) * b) % modulus) / modulus)
            re.append(v * z.real)
            im.append(v * z.imag)
        t_b[b] = complex(math.fsum(re), math.fsum(im))
    aggregate = math.fsum(abs(t) ** 2 for t in t_b)
    return t_b, aggregate


def gauss_square_opening(
    f: Newform, modulus: int, x_scale: float, h: SmoothBump
) -> tuple[float, float]:
    """(lhs, rhs) of the Gauss-sum opening of the second moment:
    rhs = (1/(M phi*(M))) sum over primitive chi of
    |sum_b conj(chi(b)) T_b|^2. An exact identity, so lhs = rhs up to
    roundoff."""
    _check_moment_args(f, modulus)
    lhs = second_moment(f, modulus, x_scale, h)
    t_b, _ = residue_class_average(f, modulus, x_scale, h)
    chars = [c for c in enumerate_characters(modulus) if c.is_primitive]
    pieces = []
    for chi in chars:
        acc = 0j
        for b in range(modulus):
            z = chi(b)
            if z:
                acc += z.conjugate() * t_b[b]
        pieces.append(abs(acc) ** 2)
    rhs = math.fsum(pieces) / (modulus * len(chars))
    return lhs, rhs


@dataclass(frozen=True)
class DiagonalSplit:
    diagonal: float
    off_diagonal: float
    r_bound: int


def diagonal_split(
    f: Newform, modulus: int, x_scale: float, h: SmoothBump
) -> DiagonalSplit:
    """Split the congruence sum sum_{m = n mod M} into the diagonal m = n
    and the off-diagonal shifts m = n + r M, 0 < |r| <= ceil(5X/(2M))."""
    _check_moment_args(f, modulus)
    ns, vals = _lam_window(f, x_scale, h)
    diagonal = math.fsum(v * v for v in vals)
    r_bound = int(math.ceil(5.0 * x_scale / (2.0 * modulus)))
    index = {int(n): v for n, v in zip(ns, vals)}
    off_terms = []
    for r in range(-r_bound, r_bound + 1):
        if r == 0:
            continue
        shift = r * modulus
        for n, v in zip(ns, vals):
            w = index.get(int(n) + shift)
            if w is not None:
                off_terms.append(v * w)
    return DiagonalSplit(diagonal, math.fsum(off_terms), r_bound)


# ---------------------------------------------------------------------------
# Bound shapes and exact exponent arithmetic
# ---------------------------------------------------------------------------


def second_moment_bound(
    level: int, modulus: int, x_scale: float, delta: float, epsilon: float
) -> float:
    """conductor^eps (1 + conductor^(1/2)/M * P^(5/8 + d/4) / M^(1/4 - d/2))
    with conductor = P M^2; X must lie in the admissible window."""
    conductor = level * modulus * modulus
    lo = conductor ** (0.5 - delta)
    hi = conductor ** (0.5 + epsilon)
    if not lo <= x_scale <= hi:
        raise ValueError(f"X = {x_scale} outside the window [{lo}, {hi}]")
    return conductor**epsilon * (
        1.0
        + math.sqrt(conductor)
        / modulus
        * level ** (0.625 + delta / 4.0)
        / modulus ** (0.25 - delta / 2.0)
    )


@dataclass(frozen=True)
class ExponentBudget:
    """Exact rational exponent bookkeeping for the hybrid range.

    All exponents are relative to the conductor P M^2 with P = M^eta. The
    saving delta = (2 - 5 eta) / (10 (2 + eta)) is positive exactly on
    eta < 2/5; the final exponent is 1/4 - delta/2. The classical threshold
    2/7 (no conductor lowering) and the Blomer-Harcos hybrid exponent are
    carried for comparison.
    """

    eta: Fraction
    delta: Fraction
    final_exponent: Fraction
    subconvex: bool
    classical_threshold: Fraction
    blomer_harcos_exponent: Fraction


def exponent_budget(eta: Fraction | int | str) -> ExponentBudget:
    """Exact exponent arithmetic at hybrid ratio eta = log P / log M."""
    eta = Fraction(eta)
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    delta = (2 - 5 * eta) / (10 * (2 + eta))
    final_exponent = Fraction(1, 4) - delta / 2
    blomer_harcos = (
        Fraction(1, 4) - Fraction(1, 8) / (2 + eta) - (1 - eta) / (4 * (2 + eta))
    )
    return ExponentBudget(
        eta=eta,
        delta=delta,
        final_exponent=final_exponent,
        subconvex=eta > 0 and delta > 0,
        classical_threshold=Fraction(2, 7),
        blomer_harcos_exponent=blomer_harcos,
    )
