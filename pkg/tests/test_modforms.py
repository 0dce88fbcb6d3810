import math
from math import gcd

import pytest

from deltasum import modforms
from deltasum.characters import enumerate_characters


def _pentagonal_eta_power(power, scale, bound):
    """Independent oracle: expand prod (1 - q^(scale*n))^power by repeated
    naive convolution of the pentagonal series."""
    base = [0] * bound
    base[0] = 1
    k = 1
    while True:
        g1 = scale * k * (3 * k - 1) // 2
        g2 = scale * k * (3 * k + 1) // 2
        if g1 >= bound and g2 >= bound:
            break
        s = -1 if k % 2 else 1
        if g1 < bound:
            base[g1] += s
        if g2 < bound:
            base[g2] += s
        k += 1
    out = [0] * bound
    out[0] = 1
    for _ in range(power):
        nxt = [0] * bound
        for i, x in enumerate(out):
            if x == 0:
                continue
            for j, y in enumerate(base[: bound - i]):
                if y:
                    nxt[i + j] += x * y
        out = nxt
    return out


def test_eta_series_delta_oracle():
    # Ramanujan coefficients from the independent naive-convolution oracle
    oracle = _pentagonal_eta_power(24, 1, 12)
    series = modforms.eta_product_series(((1, 24),), 12)
    assert series[1] == 1
    assert series[2] == -24
    for n in range(1, 13):
        assert series[n] == oracle[n - 1]


def test_eta_series_level11_oracle():
    e1 = _pentagonal_eta_power(2, 1, 16)
    e11 = _pentagonal_eta_power(2, 11, 16)
    oracle = [0] * 16
    for i, x in enumerate(e1):
        for j, y in enumerate(e11[: 16 - i]):
            oracle[i + j] += x * y
    series = modforms.eta_product_series(((1, 2), (11, 2)), 16)
    assert series[2] == -2
    assert series[3] == -1
    for n in range(1, 17):
        assert series[n] == oracle[n - 1]


def test_eta_series_normalization():
    for recipe in (((1, 24),), ((1, 8), (2, 8)), ((1, 2), (11, 2))):
        assert modforms.eta_product_series(recipe, 10)[1] == 1


def test_eta_series_rejects_bad_leading_power():
    with pytest.raises(ValueError):
        modforms.eta_product_series(((1, 23),), 10)
    with pytest.raises(ValueError):
        modforms.eta_product_series(((1, -24),), 10)


def test_eta_series_negative_exponent_inverse():
    plus = modforms.eta_product_series(((1, 26), (1, -2)), 40)
    ref = modforms.eta_product_series(((1, 24),), 40)
    assert plus == ref


def test_eta_multiplication_order_determinism():
    a = modforms.eta_product_series(((1, 4), (5, 4)), 300)
    b = modforms.eta_product_series(((5, 4), (1, 4)), 300)
    assert a == b


def test_lambda_normalization(all_forms):
    for f in all_forms.values():
        assert f.lam(1) == 1.0
    assert all_forms["Delta_1_12"].lam(2) == pytest.approx(-24 / 2**5.5)
    assert all_forms["E2_11_2"].lam(2) == pytest.approx(-2 / math.sqrt(2))


def test_lambda_out_of_bounds(delta_form):
    with pytest.raises(modforms.InsufficientCoefficients):
        delta_form.lam(delta_form.bound + 1)


def test_hecke_residual_examples(all_forms):
    d = all_forms["Delta_1_12"]
    assert modforms.hecke_residual_exact(d, 2, 2) == 0  # lam(2)^2 = lam(4) + 1
    e = all_forms["E2_11_2"]
    assert modforms.hecke_residual_exact(e, 11, 2) == 0
    assert modforms.hecke_residual(d, 6, 35) < 1e-10


def test_hecke_sweep_exact(all_forms):
    for f in all_forms.values():
        for m in range(2, 2001):
            for n in range(2, 2000 // m + 1):
                if gcd(n, f.level) != 1:
                    continue
                assert modforms.hecke_residual_exact(f, m, n) == 0


def test_deligne_sweep(all_forms):
    for f in all_forms.values():
        for n in range(1, 2001):
            assert modforms.deligne_ok(f, n)


def test_level_coefficient_square(all_forms):
    for f in all_forms.values():
        if f.level > 1:
            assert f.a(f.level) ** 2 == f.level ** (f.weight - 2)


def test_twist_examples(level11_form):
    principal = enumerate_characters(1)[0]
    tw = modforms.twist(level11_form, principal, 50)
    for n in range(1, 51):
        assert tw.values[n] == pytest.approx(level11_form.lam(n))
    chi = next(c for c in enumerate_characters(3) if not c.is_principal)
    tw3 = modforms.twist(level11_form, chi, 50)
    for n in range(1, 51):
        if n % 3 == 0:
            assert tw3.values[n] == 0
        else:
            assert tw3.values[n] == pytest.approx(chi(n) * level11_form.lam(n))


def test_twist_rejects_shared_level():
    f = modforms.builtin_form("E2_11_2")
    chi = enumerate_characters(11)[1]
    with pytest.raises(ValueError):
        modforms.twist(f, chi, 10)


def test_csv_ingestion_roundtrip(tmp_path, level11_form):
    path = tmp_path / "form.csv"
    rows = ["level,weight", "11,2"]
    rows += [f"{n},{level11_form.a(n)}" for n in range(1, 201)]
    path.write_text("\n".join(rows) + "\n")
    loaded = modforms.load_form_csv(path)
    assert loaded.level == 11 and loaded.weight == 2
    assert loaded.coefficients == level11_form.coefficients[:201]


def test_csv_ingestion_rejects_bad_coefficients(tmp_path, level11_form):
    path = tmp_path / "bad.csv"
    rows = ["level,weight", "11,2"]
    rows += [f"{n},{level11_form.a(n)}" for n in range(1, 100)]
    rows[5] = "4,999999"  # breaks both Deligne and Hecke
    path.write_text("\n".join(rows) + "\n")
    with pytest.raises(modforms.FormValidationError):
        modforms.load_form_csv(path)


def test_csv_ingestion_rejects_gaps(tmp_path):
    path = tmp_path / "gap.csv"
    path.write_text("level,weight\n11,2\n1,1\n3,-1\n")
    with pytest.raises(modforms.FormValidationError):
        modforms.load_form_csv(path)


def test_csv_ingestion_rejects_composite_level(tmp_path):
    path = tmp_path / "lvl.csv"
    path.write_text("level,weight\n12,2\n1,1\n")
    with pytest.raises(modforms.FormValidationError):
        modforms.load_form_csv(path)
