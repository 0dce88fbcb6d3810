"""Analytic kernels: smooth bumps, J-Bessel evaluation, the delta-symbol
decomposition with and without conductor lowering, and the oscillatory
double integral that appears after dual summation.

Numerical conventions, fixed for reproducibility:

- sums with many terms go through math.fsum (exactly rounded);
- the decomposition value is the raw sum divided by the raw sum at n = 0,
  so the n = 0 anchor is exact by construction;
- adaptive quadrature subdivides depth first, left first, so results do not
  depend on scheduling.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache

import numpy as np

from .arith import is_prime
from .expsums import ramanujan_sum

__all__ = [
    "BesselEvaluator",
    "CalibrationError",
    "DeltaScheme",
    "NumericalFailure",
    "ProductBump",
    "QuadratureResult",
    "SmoothBump",
    "Stratum",
    "UncalibratedScheme",
    "bessel_j",
    "bessel_j_array",
    "calibrate",
    "congruence_average",
    "delta_decompose",
    "delta_decompose_lowered",
    "delta_weight",
    "delta_weight_array",
    "double_bessel_integral",
    "truncation_ranges",
]


class CalibrationError(ArithmeticError):
    """The raw decomposition at n = 0 is unusable (broken bump)."""


class UncalibratedScheme(RuntimeError):
    """A decomposition was requested before calibrate()."""


class NumericalFailure(ArithmeticError):
    """Quadrature failed to reach the requested tolerance."""

    def __init__(self, message: str, value: float, error_estimate: float):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


# ---------------------------------------------------------------------------
# Smooth bumps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothBump:
    """C-infinity bump on (lo, hi): scale * exp(-s / (u (1 - u))) in the
    normalized coordinate u = (x - lo)/(hi - lo).

    normalization "integral" rescales so the integral over the line equals
    target; "peak" rescales the maximum to target. The sharpness s controls
    how concentrated the bump is; distinct sharpness values give genuinely
    distinct test functions.
    """

    lo: float
    hi: float
    sharpness: float = 1.0
    normalization: str = "integral"
    target: float = 1.0

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("need lo < hi")
        if self.sharpness <= 0:
            raise ValueError("sharpness must be positive")
        if self.normalization not in ("integral", "peak"):
            raise ValueError("normalization must be 'integral' or 'peak'")
        object.__setattr__(self, "_scale", self._compute_scale())

    def _template(self, x: float) -> float:
        u = (x - self.lo) / (self.hi - self.lo)
        if u <= 0.0 or u >= 1.0:
            return 0.0
        return math.exp(-self.sharpness / (u * (1.0 - u)))

    def _compute_scale(self) -> float:
        if self.normalization == "peak":
            return self.target / math.exp(-4.0 * self.sharpness)
        integral, _ = _adaptive_gk_1d(self._template, self.lo, self.hi, 1e-13)
        if integral <= 0:
            raise ValueError("degenerate bump")
        return self.target / integral

    def __call__(self, x: float) -> float:
        return self._scale * self._template(x)

    def value_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        u = (xs - self.lo) / (self.hi - self.lo)
        inside = (u > 0.0) & (u < 1.0)
        out = np.zeros_like(u)
        uu = u[inside]
        out[inside] = self._scale * np.exp(-self.sharpness / (uu * (1.0 - uu)))
        return out

    def derivative(self, x: float) -> float:
        u = (x - self.lo) / (self.hi - self.lo)
        if u <= 0.0 or u >= 1.0:
            return 0.0
        v = u * (1.0 - u)
        return self(x) * self.sharpness * (1.0 - 2.0 * u) / (v * v) / (self.hi - self.lo)

    def integral(self) -> float:
        value, _ = _adaptive_gk_1d(self.__call__, self.lo, self.hi, 1e-13)
        return value


@dataclass(frozen=True)
class ProductBump:
    """F(u, v) = fx(u) fy(v), with the derivative bounds (Z, Z_u, Z_v) that
    enter the truncation ranges and the shifted-sum bound, fitted on a grid."""

    fx: SmoothBump
    fy: SmoothBump

    def __post_init__(self):
        grid_x = np.linspace(self.fx.lo, self.fx.hi, 801)
        grid_y = np.linspace(self.fy.lo, self.fy.hi, 801)
        vx = self.fx.value_array(grid_x)
        vy = self.fy.value_array(grid_y)
        dx = np.array([self.fx.derivative(x) for x in grid_x])
        dy = np.array([self.fy.derivative(y) for y in grid_y])
        peak_x = float(vx.max())
        peak_y = float(vy.max())
        object.__setattr__(self, "z_bound", peak_x * peak_y)
        # degenerate zero factors keep the default derivative bounds
        zx = max(1.0, float(np.abs(grid_x * dx).max()) / peak_x) if peak_x else 1.0
        zy = max(1.0, float(np.abs(grid_y * dy).max()) / peak_y) if peak_y else 1.0
        object.__setattr__(self, "zx_bound", zx)
        object.__setattr__(self, "zy_bound", zy)

    def __call__(self, u: float, v: float) -> float:
        return self.fx(u) * self.fy(v)


# ---------------------------------------------------------------------------
# 1D adaptive Gauss-Kronrod (normalization integrals, Bessel oracle helpers)
# ---------------------------------------------------------------------------

_XGK = (
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993944,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
    0.0,
)
_WGK = (
    0.0229353220105292,
    0.0630920926299786,
    0.1047900103222502,
    0.1406532597155259,
    0.1690047266392679,
    0.1903505780647854,
    0.2044329400752989,
    0.2094821410847278,
)
_WG = (
    0.1294849661688697,
    0.2797053914892767,
    0.3818300505051189,
    0.4179591836734694,
)

# Full 15-point Kronrod rule on [-1, 1]; Gauss-7 lives on the odd indices.
_K_NODES = np.array([-x for x in _XGK[:7]] + [0.0] + list(reversed(_XGK[:7])))
_K_WEIGHTS = np.array(list(_WGK[:7]) + [_WGK[7]] + list(reversed(_WGK[:7])))
_G_INDEX = np.arange(1, 15, 2)
_G_WEIGHTS = np.array(list(_WG[:3]) + [_WG[3]] + list(reversed(_WG[:3])))


def _gk_panel_1d(f, lo: float, hi: float) -> tuple[float, float]:
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    vals = np.array([f(mid + half * t) for t in _K_NODES])
    k = half * float(_K_WEIGHTS @ vals)
    g = half * float(_G_WEIGHTS @ vals[_G_INDEX])
    return k, abs(k - g)


def _adaptive_gk_1d(f, lo, hi, tol, max_depth=50):
    total_len = hi - lo
    stack = [(lo, hi, 0)]
    pieces: list[float] = []
    errs: list[float] = []
    while stack:
        a, b, depth = stack.pop()
        val, err = _gk_panel_1d(f, a, b)
        if err <= tol * max((b - a) / total_len, 1e-16) or depth >= max_depth:
            pieces.append(val)
            errs.append(err)
        else:
            m = 0.5 * (a + b)
            stack.append((m, b, depth + 1))
            stack.append((a, m, depth + 1))
    return math.fsum(pieces), math.fsum(errs)


# ---------------------------------------------------------------------------
# J-Bessel evaluation: power series below the crossover, Hankel asymptotics
# (plus stable upward recurrence for higher orders) above it
# ---------------------------------------------------------------------------

BESSEL_CROSSOVER = 12.0
_MAX_ORDER = 20


def _bessel_series(order: int, x: float) -> float:
    half = 0.5 * x
    term = half**order / math.factorial(order)
    acc = term
    m = 1
    while m < 120:
        term *= -(half * half) / (m * (m + order))
        acc += term
        if abs(term) < 1e-19 * (abs(acc) + 1e-300):
            break
        m += 1
    return acc


def _hankel_pq(order: int, x: float) -> tuple[float, float]:
    mu = 4.0 * order * order
    p_acc = 1.0
    q_acc = 0.0
    term = 1.0
    prev = math.inf
    for m in range(1, 40):
        term *= (mu - (2.0 * m - 1.0) ** 2) / (m * 8.0 * x)
        if abs(term) >= prev or abs(term) < 1e-19:
            break
        prev = abs(term)
        r = m % 4
        if r == 0:
            p_acc += term
        elif r == 1:
            q_acc += term
        elif r == 2:
            p_acc -= term
        else:
            q_acc -= term
    return p_acc, q_acc


def _bessel_asymptotic(order: int, x: float) -> float:
    """Hankel expansion for orders 0 and 1, then upward recurrence."""
    vals = []
    for k in (0, 1):
        p, q = _hankel_pq(k, x)
        omega = x - 0.5 * k * math.pi - 0.25 * math.pi
        vals.append(
            math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(omega) - q * math.sin(omega))
        )
    j_prev, j_cur = vals
    if order == 0:
        return j_prev
    for k in range(1, order):
        j_prev, j_cur = j_cur, (2.0 * k / x) * j_cur - j_prev
    return j_cur


def bessel_j(order: int, x: float) -> float:
    """J_order(x) for 0 <= order <= 20, x >= 0."""
    if not 0 <= order <= _MAX_ORDER:
        raise ValueError(f"order must be in [0, {_MAX_ORDER}]")
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x <= BESSEL_CROSSOVER:
        return _bessel_series(order, x)
    return _bessel_asymptotic(order, x)


@dataclass(frozen=True)
class BesselEvaluator:
    """J_order with the series/asymptotic branch structure made explicit."""

    order: int
    crossover: float = BESSEL_CROSSOVER

    def __call__(self, x: float) -> float:
        if x <= self.crossover:
            return self.series_branch(x)
        return self.asymptotic_branch(x)

    def series_branch(self, x: float) -> float:
        return _bessel_series(self.order, x)

    def asymptotic_branch(self, x: float) -> float:
        return _bessel_asymptotic(self.order, x)


def _bessel_series_array(order: int, xs: np.ndarray) -> np.ndarray:
    half = 0.5 * xs
    with np.errstate(divide="ignore"):
        term = half**order / math.factorial(order)
    acc = term.copy()
    hh = half * half
    for m in range(1, 120):
        term = term * (-hh) / (m * (m + order))
        acc += term
        if np.max(np.abs(term)) < 1e-19 * (np.max(np.abs(acc)) + 1e-300):
            break
    return acc


def _bessel_asymptotic_array(order: int, xs: np.ndarray) -> np.ndarray:
    out = []
    for k in (0, 1):
        mu = 4.0 * k * k
        p_acc = np.ones_like(xs)
        q_acc = np.zeros_like(xs)
        term = np.ones_like(xs)
        prev = np.full_like(xs, np.inf)
        active = np.ones_like(xs, dtype=bool)
        for m in range(1, 40):
            term = term * ((mu - (2.0 * m - 1.0) ** 2) / (m * 8.0)) / xs
            active &= np.abs(term) < prev
            if not active.any():
                break
            prev = np.abs(term)
            r = m % 4
            contrib = np.where(active, term, 0.0)
            if r == 0:
                p_acc += contrib
            elif r == 1:
                q_acc += contrib
            elif r == 2:
                p_acc -= contrib
            else:
                q_acc -= contrib
        omega = xs - 0.5 * k * math.pi - 0.25 * math.pi
        out.append(
            np.sqrt(2.0 / (math.pi * xs)) * (p_acc * np.cos(omega) - q_acc * np.sin(omega))
        )
    j_prev, j_cur = out
    if order == 0:
        return j_prev
    for k in range(1, order):
        j_prev, j_cur = j_cur, (2.0 * k) * j_cur / xs - j_prev
    return j_cur


def bessel_j_array(order: int, xs: np.ndarray) -> np.ndarray:
    """Vectorized J_order, same branch structure as bessel_j."""
    xs = np.asarray(xs, dtype=float)
    if not 0 <= order <= _MAX_ORDER:
        raise ValueError(f"order must be in [0, {_MAX_ORDER}]")
    if np.any(xs < 0):
        raise ValueError("x must be nonnegative")
    out = np.empty_like(xs)
    low = xs <= BESSEL_CROSSOVER
    if low.any():
        out[low] = _bessel_series_array(order, xs[low])
    if (~low).any():
        out[~low] = _bessel_asymptotic_array(order, xs[~low])
    return out


# ---------------------------------------------------------------------------
# The delta-symbol weight and decomposition
# ---------------------------------------------------------------------------


def delta_weight(x: float, y: float, bump: SmoothBump) -> float:
    """g(x, y) = sum_{j >= 1} (x j)^-1 (w(x j) - w(|y| / (x j))).

    w is the scheme bump supported in [1/2, 1]; the sum is finite because
    both arguments leave the support once j > max(1, 2|y|)/x. Returns 0
    whenever x > max(1, 2|y|).
    """
    if x <= 0:
        raise ValueError("x must be positive")
    y_abs = abs(y)
    if x > max(1.0, 2.0 * y_abs):
        return 0.0
    j_max = int(math.ceil(max(1.0, 2.0 * y_abs) / x))
    terms = []
    for j in range(1, j_max + 1):
        xj = x * j
        terms.append((bump(xj) - bump(y_abs / xj)) / xj)
    return math.fsum(terms)


def delta_weight_array(x: float, ys: np.ndarray, bump: SmoothBump) -> np.ndarray:
    """Vectorized delta_weight over y at fixed x."""
    if x <= 0:
        raise ValueError("x must be positive")
    ys_abs = np.abs(np.asarray(ys, dtype=float))
    y_top = float(ys_abs.max()) if ys_abs.size else 0.0
    if x > max(1.0, 2.0 * y_top):
        return np.zeros_like(ys_abs)
    j_max = int(math.ceil(max(1.0, 2.0 * y_top) / x))
    acc = np.zeros_like(ys_abs)
    for j in range(1, j_max + 1):
        xj = x * j
        acc += (bump(xj) - bump.value_array(ys_abs / xj)) / xj
    acc[x > np.maximum(1.0, 2.0 * ys_abs)] = 0.0
    return acc


@dataclass(frozen=True)
class DeltaScheme:
    """Delta-symbol decomposition data.

    q_scale is the Q of the decomposition; level P = 1 selects the plain
    scheme and a prime P the conductor-lowered scheme, which detects
    (n/P = 0) together with the congruence n = 0 mod P. raw_zero is the
    uncalibrated value at n = 0; the calibration constant is its inverse,
    and every decomposition divides by raw_zero so the anchor is exact.
    """

    q_scale: float
    level: int
    bump: SmoothBump
    c_q: float | None = None
    raw_zero: float | None = None

    def __post_init__(self):
        if self.q_scale <= 1:
            raise ValueError("Q must exceed 1")
        if self.level != 1 and not is_prime(self.level):
            raise ValueError("level must be 1 or a prime")

    @property
    def is_calibrated(self) -> bool:
        return self.raw_zero is not None

    def q_max(self, n: int) -> int:
        """Largest modulus with a nonzero weight for this n."""
        q2 = self.q_scale * self.q_scale
        return int(
            math.ceil(self.q_scale * max(1.0, 2.0 * abs(n) / (self.level * q2)))
        )


def _raw_plain_zero(scheme: DeltaScheme) -> float:
    """(1/Q^2) sum_q phi(q) g(q/Q, 0); identical code path for calibration
    and for the n = 0 evaluation, making the anchor exact."""
    q_scale = scheme.q_scale
    phi_acc = _phi_cache(int(math.ceil(q_scale)) + 1)
    terms = []
    for q in range(1, int(math.ceil(q_scale)) + 1):
        g = delta_weight(q / q_scale, 0.0, scheme.bump)
        if g:
            terms.append(phi_acc[q] * g)
    return math.fsum(terms) / (q_scale * q_scale)


@lru_cache(maxsize=16)
def _phi_cache(bound: int) -> tuple[int, ...]:
    from .arith import MultiplicativeTable

    return MultiplicativeTable(max(bound, 2)).phi


def calibrate(scheme: DeltaScheme) -> DeltaScheme:
    """Fix the calibration constant from the raw value at n = 0."""
    raw = _raw_plain_zero(scheme)
    if raw < 1e-3:
        raise CalibrationError(f"raw decomposition at n = 0 is {raw}; bump unusable")
    c_q = 1.0 / raw
    window = 1.0 / scheme.q_scale
    if not (1.0 - window <= c_q <= 1.0 + window):
        raise CalibrationError(
            f"calibration constant {c_q} outside sanity window for Q = {scheme.q_scale}"
        )
    return replace(scheme, c_q=c_q, raw_zero=raw)


def delta_decompose(n: int, scheme: DeltaScheme) -> float:
    """Plain decomposition of the indicator [n = 0].

    (c_Q / Q^2) sum_q c_q(n) g(q/Q, n/Q^2), the a-sum collapsed to the
    Ramanujan sum. Exactly 1 at n = 0 after calibration; O(1e-12) roundoff
    otherwise.
    """
    if scheme.level != 1:
        raise ValueError("plain decomposition requires a level-1 scheme")
    if not scheme.is_calibrated:
        raise UncalibratedScheme("call calibrate() first")
    if n == 0:
        return _raw_plain_zero(scheme) / scheme.raw_zero
    q_scale = scheme.q_scale
    n_abs = abs(n)
    y = n_abs / (q_scale * q_scale)
    terms = []
    for q in range(1, scheme.q_max(n) + 1):
        g = delta_weight(q / q_scale, y, scheme.bump)
        if g:
            terms.append(ramanujan_sum(q, n_abs) * g)
    return math.fsum(terms) / (q_scale * q_scale) / scheme.raw_zero


@lru_cache(maxsize=512)
def _unit_roots(modulus: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * cmath.pi * k / modulus) for k in range(modulus))


@lru_cache(maxsize=512)
def _coprime_residues(q: int) -> tuple[int, ...]:
    return tuple(a for a in range(q) if math.gcd(a, q) == 1)


def congruence_average(n: int, level: int) -> complex:
    """(1/P) sum_{b mod P} e(n b / P): exactly 1 when P | n, 0 otherwise
    up to roundoff. This is the b-average that enforces the congruence in
    the conductor-lowered scheme."""
    roots = _unit_roots(level)
    re = []
    im = []
    for b in range(level):
        z = roots[n * b % level]
        re.append(z.real)
        im.append(z.imag)
    return complex(math.fsum(re), math.fsum(im)) / level


def delta_decompose_lowered(n: int, scheme: DeltaScheme) -> float:
    """Conductor-lowered decomposition of [n = 0].

    (c_Q / (P Q^2)) sum_q sum*_a sum_b e(n (a + b q)/(q P)) g(q/Q, n/(P Q^2)),
    evaluated from the displayed triple sum (a-sum and b-sum taken literally,
    phases reduced exactly in integer arithmetic).
    """
    if scheme.level < 2:
        raise ValueError("conductor-lowered decomposition requires a prime level")
    if not scheme.is_calibrated:
        raise UncalibratedScheme("call calibrate() first")
    level = scheme.level
    q_scale = scheme.q_scale
    n_abs = abs(n)  # the displayed sum is even in n (a -> -a bijection)
    y = n_abs / (level * q_scale * q_scale)
    re_terms = []
    im_terms = []
    roots_p = _unit_roots(level)
    b_re = math.fsum(roots_p[n_abs * b % level].real for b in range(level))
    b_im = math.fsum(roots_p[n_abs * b % level].imag for b in range(level))
    b_sum = complex(b_re, b_im)
    for q in range(1, scheme.q_max(n) + 1):
        g = delta_weight(q / q_scale, y, scheme.bump)
        if not g:
            continue
        qp = q * level
        roots = _unit_roots(qp)
        a_re = math.fsum(roots[n_abs * a % qp].real for a in _coprime_residues(q))
        a_im = math.fsum(roots[n_abs * a % qp].imag for a in _coprime_residues(q))
        z = complex(a_re, a_im) * b_sum
        re_terms.append(g * z.real)
        im_terms.append(g * z.imag)
    total = complex(math.fsum(re_terms), math.fsum(im_terms))
    scale = level * q_scale * q_scale
    return total.real / scale / scheme.raw_zero


# ---------------------------------------------------------------------------
# Oscillatory double integral with two Bessel kernels and the delta weight
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    panels: int
    tolerance: float


class Stratum(str, Enum):
    """Partition of the (q, gamma) lattice by divisibility by the level."""

    COPRIME = "coprime"  # gcd(q, P) = 1 and gcd(gamma, P) = 1
    GAMMA = "gamma-multiple"  # gcd(q, P) = 1 and P | gamma
    MODULUS = "modulus-multiple"  # P | q


def truncation_ranges(
    q: int,
    x_scale: float,
    y_scale: float,
    zx: float,
    zy: float,
    q_cap: float,
    level: int,
    stratum: Stratum,
) -> tuple[float, float]:
    """Dual-sum truncation points (T1, T2) for the three strata."""
    if min(q, x_scale, y_scale, zx, zy, q_cap, level) <= 0:
        raise ValueError("all parameters must be positive")
    p = level
    if stratum == Stratum.COPRIME:
        lead = p * p * q * q
        denom = q * q_cap * p
    elif stratum == Stratum.GAMMA:
        lead = p * q * q
        denom = q * q_cap * p
    else:
        lead = p**4 * q * q
        denom = q * q_cap * p * p
    t1 = lead / x_scale * (zx + x_scale / denom) ** 2
    t2 = lead / y_scale * (zy + y_scale / denom) ** 2
    return t1, t2


def _panel_value(
    x0, x1, y0, y1, a, b, order, g_x_arg, shift, p_q2, window, x_scale, y_scale, bump
):
    """GK15 x GK15 tensor rule on one panel; returns (kronrod, |k - gauss|)."""
    hx = 0.5 * (x1 - x0)
    hy = 0.5 * (y1 - y0)
    xs = 0.5 * (x1 + x0) + hx * _K_NODES
    ys = 0.5 * (y1 + y0) + hy * _K_NODES
    fx = window.fx.value_array(xs / x_scale)
    fy = window.fy.value_array(ys / y_scale)
    jx = bessel_j_array(order, 4.0 * math.pi * a * np.sqrt(xs))
    jy = bessel_j_array(order, 4.0 * math.pi * b * np.sqrt(ys))
    col = fx * jx / np.sqrt(xs)
    row = fy * jy / np.sqrt(ys)
    mesh = np.subtract.outer(xs, ys) + shift
    gvals = delta_weight_array(g_x_arg, mesh.ravel() / p_q2, bump).reshape(mesh.shape)
    integrand = np.outer(col, row) * gvals
    k_val = hx * hy * float(_K_WEIGHTS @ integrand @ _K_WEIGHTS)
    sub = integrand[np.ix_(_G_INDEX, _G_INDEX)]
    g_val = hx * hy * float(_G_WEIGHTS @ sub @ _G_WEIGHTS)
    return k_val, abs(k_val - g_val)


def double_bessel_integral(
    a: float,
    b: float,
    c_scale: int,
    q: int,
    q_cap: float,
    level: int,
    r_shift: float,
    x_scale: float,
    y_scale: float,
    window: ProductBump,
    order: int,
    bump: SmoothBump,
    abs_tol: float | None = None,
    max_depth: int = 12,
    max_panels: int = 40000,
) -> QuadratureResult:
    """The double integral of (xy)^(-1/2) F(x/X, y/Y)
    g(q c / Q, (x - y + rM)/(P Q^2)) J_order(4 pi a sqrt(x))
    J_order(4 pi b sqrt(y)) over the support box of F.

    Adaptive tensor Gauss-Kronrod with oscillation-aware pre-splitting at
    the Bessel zero spacing; subdivision is depth first, left first.
    """
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if abs_tol is None:
        abs_tol = (
            1e-9 * window.z_bound * math.sqrt(x_scale * y_scale) * q_cap / (q * c_scale)
        )
    g_x_arg = q * c_scale / q_cap
    p_q2 = level * q_cap * q_cap
    x_lo, x_hi = window.fx.lo * x_scale, window.fx.hi * x_scale
    y_lo, y_hi = window.fy.lo * y_scale, window.fy.hi * y_scale

    def initial_edges(lo, hi, freq, scale):
        if freq * math.sqrt(scale) <= 10.0:
            return [lo, hi]
        cycles = 2.0 * freq * (math.sqrt(hi) - math.sqrt(lo))
        n_panels = int(min(48, max(1, math.ceil(cycles / 2.0))))
        return list(np.linspace(lo, hi, n_panels + 1))

    ex = initial_edges(x_lo, x_hi, a, x_scale)
    ey = initial_edges(y_lo, y_hi, b, y_scale)
    area = (x_hi - x_lo) * (y_hi - y_lo)
    stack = []
    for i in range(len(ex) - 1, 0, -1):
        for j in range(len(ey) - 1, 0, -1):
            stack.append((ex[i - 1], ex[i], ey[j - 1], ey[j], 0))
    pieces: list[float] = []
    errs: list[float] = []
    n_panels = 0
    overflow = False
    while stack:
        x0, x1, y0, y1, depth = stack.pop()
        n_panels += 1
        if n_panels > max_panels:
            overflow = True
            break
        val, err = _panel_value(
            x0, x1, y0, y1, a, b, order, g_x_arg, r_shift, p_q2, window,
            x_scale, y_scale, bump,
        )
        local_tol = abs_tol * max((x1 - x0) * (y1 - y0) / area, 1e-16)
        if err <= local_tol or depth >= max_depth:
            pieces.append(val)
            errs.append(err)
        else:
            xm = 0.5 * (x0 + x1)
            ym = 0.5 * (y0 + y1)
            stack.append((xm, x1, ym, y1, depth + 1))
            stack.append((xm, x1, y0, ym, depth + 1))
            stack.append((x0, xm, ym, y1, depth + 1))
            stack.append((x0, xm, y0, ym, depth + 1))
    value = math.fsum(pieces)
    err_total = math.fsum(errs)
    if overflow or err_total > abs_tol:
        raise NumericalFailure(
            f"quadrature stalled at error {err_total} (tolerance {abs_tol})",
            value,
            err_total,
        )
    return QuadratureResult(value, err_total, n_panels, abs_tol)
