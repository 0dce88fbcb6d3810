import math
import random
from fractions import Fraction
from math import gcd

import pytest

from deltasum import modforms, pipeline
from deltasum.expsums import kloosterman
from deltasum.kernels import SmoothBump, Stratum


def _spec(f, m, r, x, y=None):
    return pipeline.ShiftedSumSpec(
        f1=f,
        f2=f,
        r=r,
        shift_modulus=m,
        x_scale=x,
        y_scale=y or x,
        window=pipeline.default_window(),
    )


def test_q_cap_examples():
    assert pipeline.q_cap(2, 2, 1) == pytest.approx(4.0)
    assert pipeline.q_cap(8, 2, 4) == pytest.approx(4.0)


def test_q_cap_keeps_weight_support():
    # with this cap, 2 |n - m + rM| / (P Q^2) never exceeds 1 on the grid
    for level, x in ((2, 20.0), (11, 40.0)):
        cap = pipeline.q_cap(x, x, level)
        t_max = 4.0 * x
        assert 2.0 * t_max / (level * cap * cap) <= 1.0 + 1e-12


def test_spec_validation(level11_form, delta_form):
    with pytest.raises(ValueError):
        _spec(level11_form, 11, 1, 20.0)  # shift modulus shares the level
    with pytest.raises(ValueError):
        _spec(level11_form, 2, 0, 20.0)  # r = 0
    with pytest.raises(ValueError):
        _spec(level11_form, 12, 1, 20.0)  # not squarefree
    with pytest.raises(ValueError):
        pipeline.ShiftedSumSpec(
            f1=level11_form, f2=delta_form, r=1, shift_modulus=2,
            x_scale=20.0, y_scale=20.0, window=pipeline.default_window(),
        )
    f5 = modforms.builtin_form("E4_5_4")
    with pytest.raises(ValueError):
        _spec(f5, 2, 5, 20.0)  # r shares the level


def test_shifted_sum_direct_reference_loop(delta_form):
    # independent reference loop
    spec = _spec(delta_form, 3, 1, 30.0)
    w = spec.window
    total = 0.0
    for n in range(1, 200):
        m = n + 3
        fx = w.fx(n / 30.0)
        fy = w.fy(m / 30.0)
        if fx == 0.0 or fy == 0.0:
            continue
        total += (
            delta_form.lam(n) * delta_form.lam(m) / math.sqrt(n * m) * fx * fy
        )
    assert pipeline.shifted_sum_direct(spec) == pytest.approx(total, rel=1e-12)


def test_shifted_sum_relabeling_symmetry(level11_form):
    a = pipeline.shifted_sum_direct(_spec(level11_form, 2, 1, 40.0, 30.0))
    b = pipeline.shifted_sum_direct(_spec(level11_form, 2, -1, 30.0, 40.0))
    assert a == pytest.approx(b, rel=1e-12)


def test_shifted_sum_empty_support(delta_form):
    spec = _spec(delta_form, 5, 100, 20.0)
    assert spec.is_empty()
    assert pipeline.shifted_sum_direct(spec) == 0.0
    rep = pipeline.shifted_sum_delta(spec)
    assert abs(rep.delta_value) < 1e-10 and rep.direct_value == 0.0


def test_shifted_sum_insufficient_coefficients(moment_window):
    small = modforms.Newform("tiny", 1, 12, tuple([0, 1, -24]))
    spec = pipeline.ShiftedSumSpec(
        f1=small, f2=small, r=1, shift_modulus=3, x_scale=30.0, y_scale=30.0,
        window=pipeline.default_window(),
    )
    with pytest.raises(modforms.InsufficientCoefficients):
        pipeline.shifted_sum_direct(spec)


def test_shifted_sum_delta_identity(delta_form, level11_form):
    rep = pipeline.shifted_sum_delta(_spec(delta_form, 3, 1, 30.0))
    assert rep.identity_residual <= max(1e-6 * abs(rep.direct_value), 1e-10)
    # level 1 collapses the partition
    assert rep.stratum_gamma == 0.0 and rep.stratum_modulus == 0.0
    assert rep.stratum_coprime == pytest.approx(rep.delta_value, rel=1e-12)
    rep11 = pipeline.shifted_sum_delta(_spec(level11_form, 2, 1, 40.0))
    assert rep11.identity_residual <= max(1e-6 * abs(rep11.direct_value), 1e-10)
    assert rep11.partition_residual <= 1e-8 * abs(rep11.delta_value)
    # Q < P leaves the modulus stratum empty
    assert rep11.stratum_modulus == 0.0


def test_kloosterman_collapse_examples():
    direct, closed = pipeline.kloosterman_collapse(Stratum.COPRIME, 1, 2, 1, 2, 5, 3)
    assert closed == pytest.approx(kloosterman(2, 1, 15).value, abs=1e-12)
    assert abs(direct - closed) < 1e-8
    assert abs(direct.imag) < 1e-9

    direct, closed = pipeline.kloosterman_collapse(Stratum.GAMMA, 1, 2, 1, 2, 5, 3)
    inv5 = pow(5, -1, 3)
    assert closed == pytest.approx(kloosterman(2, inv5, 3).value, abs=1e-12)
    assert abs(direct - closed) < 1e-8

    direct, closed = pipeline.kloosterman_collapse(Stratum.MODULUS, 1, 1, 5, 5, 2, 1)
    assert closed == pytest.approx(0.0, abs=1e-12)  # Ramanujan sum c_4(1)
    assert abs(direct) < 1e-12


def test_kloosterman_collapse_random():
    rng = random.Random(99)
    for stratum in (Stratum.COPRIME, Stratum.GAMMA, Stratum.MODULUS):
        done = 0
        while done < 30:
            level = rng.choice((2, 3, 5, 11))
            q = rng.randrange(1, 10)
            if stratum != Stratum.MODULUS and gcd(q, level) != 1:
                continue
            r = rng.choice((1, -1, 2, -2))
            if gcd(r, level) != 1:
                continue
            direct, closed = pipeline.kloosterman_collapse(
                stratum, r, rng.randrange(1, 6), rng.randrange(1, 40),
                rng.randrange(1, 40), level, q,
            )
            assert abs(direct - closed) < 1e-8
            done += 1


def test_kloosterman_collapse_rejects_shared_factor():
    with pytest.raises(ValueError):
        pipeline.kloosterman_collapse(Stratum.COPRIME, 1, 1, 1, 2, 5, 10)


def test_voronoi_unit_phase(delta_form):
    h = SmoothBump(40.0, 200.0, sharpness=1.0, normalization="peak")
    f = modforms.builtin_form("Delta_1_12", bound=4000)
    rep = pipeline.verify_voronoi(f, 1, 1, h)
    assert rep.eta_abs_error <= 1e-6
    assert rep.residual <= 1e-5


def test_voronoi_level11_q3():
    h = SmoothBump(40.0, 200.0, sharpness=1.0, normalization="peak")
    f = modforms.builtin_form("E2_11_2", bound=20000)
    rep = pipeline.verify_voronoi(f, 1, 3, h)
    assert rep.eta_abs_error <= 1e-6
    assert rep.residual <= 1e-5


def test_voronoi_linear_in_test_function():
    # scaling h leaves the solved phase unchanged
    f = modforms.builtin_form("E8_2_8", bound=4000)
    h1 = SmoothBump(40.0, 200.0, sharpness=1.0, normalization="peak", target=1.0)
    h2 = SmoothBump(40.0, 200.0, sharpness=1.0, normalization="peak", target=2.0)
    r1 = pipeline.verify_voronoi(f, 1, 3, h1)
    r2 = pipeline.verify_voronoi(f, 1, 3, h2)
    assert abs(r1.eta - r2.eta) < 1e-8


def test_voronoi_rejects_shared_factor(delta_form):
    h = SmoothBump(40.0, 200.0, sharpness=1.0, normalization="peak")
    with pytest.raises(ValueError):
        pipeline.verify_voronoi(delta_form, 2, 4, h)


def test_second_moment_trivial_modulus(delta_form, moment_window):
    # M = 1: the single character is principal and primitive
    value = pipeline.second_moment(delta_form, 1, 30.0, moment_window)
    direct = 0.0 + 0.0j
    for n in range(1, 200):
        hv = moment_window(n / 30.0)
        if hv:
            direct += delta_form.lam(n) / math.sqrt(n) * hv
    assert value == pytest.approx(abs(direct) ** 2, rel=1e-12)


def test_second_moment_reference_loop(level11_form, moment_window):
    # independent loop over the three primitive characters mod 5
    from deltasum.characters import enumerate_characters

    value = pipeline.second_moment(level11_form, 5, 20.0, moment_window)
    chars = [c for c in enumerate_characters(5) if c.is_primitive]
    acc = 0.0
    for chi in chars:
        s = 0.0 + 0.0j
        for n in range(1, 100):
            hv = moment_window(n / 20.0)
            if hv:
                s += chi(n) * level11_form.lam(n) / math.sqrt(n) * hv
        acc += abs(s) ** 2
    assert value == pytest.approx(acc / len(chars), rel=1e-12)
    assert value >= 0.0


def test_gauss_square_opening(delta_form, moment_window):
    for modulus in (3, 5, 15, 21):
        lhs, rhs = pipeline.gauss_square_opening(delta_form, modulus, 30.0, moment_window)
        assert rhs == pytest.approx(lhs, rel=1e-8)


def test_gauss_square_opening_trivial(delta_form, moment_window):
    lhs, rhs = pipeline.gauss_square_opening(delta_form, 1, 30.0, moment_window)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_diagonal_split_reconstruction(delta_form, moment_window):
    split = pipeline.diagonal_split(delta_form, 3, 30.0, moment_window)
    _, aggregate = pipeline.residue_class_average(delta_form, 3, 30.0, moment_window)
    assert split.diagonal >= 0.0
    recon = 3 * (split.diagonal + split.off_diagonal)
    assert aggregate == pytest.approx(recon, abs=1e-8 * max(abs(aggregate), 1e-2))
    # direct congruence-constrained double-sum oracle
    direct = 0.0
    for n in range(1, 200):
        hn = moment_window(n / 30.0)
        if not hn:
            continue
        for m in range(1, 200):
            if (m - n) % 3:
                continue
            hm = moment_window(m / 30.0)
            if hm:
                direct += (
                    delta_form.lam(n) * delta_form.lam(m) / math.sqrt(n * m) * hn * hm
                )
    assert split.diagonal + split.off_diagonal == pytest.approx(direct, rel=1e-10)


def test_diagonal_split_no_admissible_shift(delta_form, moment_window):
    split = pipeline.diagonal_split(delta_form, 31, 9.0, moment_window)
    assert split.off_diagonal == 0.0


def test_second_moment_rejects_bad_modulus(level11_form, moment_window):
    with pytest.raises(ValueError):
        pipeline.second_moment(level11_form, 11, 20.0, moment_window)
    with pytest.raises(ValueError):
        pipeline.second_moment(level11_form, 12, 20.0, moment_window)


def test_second_moment_bound():
    # P = 1, delta = epsilon = 0: bound collapses to 1 + M^(-1/4)
    for modulus in (5, 20, 100):
        v = pipeline.second_moment_bound(1, modulus, modulus, 0.0, 0.0)
        assert v == pytest.approx(1.0 + modulus**-0.25)
    v1 = pipeline.second_moment_bound(1, 20, 20.0, 0.0, 0.0)
    v2 = pipeline.second_moment_bound(1, 40, 40.0, 0.0, 0.0)
    assert (v2 - 1.0) / (v1 - 1.0) == pytest.approx(2.0**-0.25)
    with pytest.raises(ValueError):
        pipeline.second_moment_bound(3, 20, 1.0, 0.05, 0.05)


def test_shifted_sum_bound_shape(delta_form):
    spec = _spec(delta_form, 3, 1, 30.0)
    w = spec.window
    expected = (
        w.z_bound
        * math.sqrt(w.zx_bound * w.zy_bound)
        * max(w.zx_bound, w.zy_bound) ** 2
        * 30.0**0.75
        / 30.0
    )
    assert pipeline.shifted_sum_bound(spec) == pytest.approx(expected)


def test_exponent_budget_examples():
    b = pipeline.exponent_budget(Fraction(2, 5))
    assert b.delta == 0 and not b.subconvex
    b = pipeline.exponent_budget(0)
    assert b.delta == Fraction(1, 10)
    assert b.final_exponent == Fraction(1, 5)
    b = pipeline.exponent_budget(Fraction(2, 7))
    assert b.delta == Fraction(1, 40)
    assert b.classical_threshold == Fraction(2, 7)


def test_exponent_budget_blomer_harcos_shape():
    # independent recomputation from the two bound terms
    for eta in (Fraction(1, 10), Fraction(1, 4), Fraction(2, 5)):
        b = pipeline.exponent_budget(eta)
        expect = (
            Fraction(1, 4)
            - Fraction(1, 8) / (2 + eta)
            - (1 - eta) / (4 * (2 + eta))
        )
        assert b.blomer_harcos_exponent == expect


def test_exponent_budget_subconvex_range():
    for num in range(0, 60):
        eta = Fraction(num, 100)
        assert pipeline.exponent_budget(eta).subconvex == (0 < eta < Fraction(2, 5))
    with pytest.raises(ValueError):
        pipeline.exponent_budget(Fraction(-1, 10))


def test_exponent_budget_exactness():
    b = pipeline.exponent_budget(Fraction(1, 3))
    assert b.delta == Fraction(2 - Fraction(5, 3), 10 * (2 + Fraction(1, 3)))
    assert isinstance(b.delta, Fraction)
