import math

import pytest
import sympy as sp
from scipy.special import j0

from omegalab import julia_moments as moments
from omegalab.errors import ArgumentError
from omegalab.models import CheckStatus, RationalPoly

# ---------------------------
# Moment polynomials
# ---------------------------


def test_first_moment_polynomials():
    table = moments.moment_table(4)
    assert table[0].coeffs == [1]
    assert table[1].coeffs == [0, 1]
    assert table[2].coeffs == [0, 0, 1, 1]
    assert table[3].coeffs == [0, 0, 0, 1, 3]
    assert table[4].coeffs == [0, 0, 0, 0, 1, 6, 1, 1]
    assert table[4].symbol == "beta"


def test_moment_table_nonnegative_integers():
    table = moments.moment_table(50)
    assert len(table) == 51
    assert table.nonnegative_integer


def test_moment_table_rejects_negative():
    with pytest.raises(ArgumentError):
        moments.moment_table(-1)


def test_moment_at_chebyshev_values():
    assert moments.moment_at(2, 0) == 1
    assert moments.moment_at(2, 2) == sp.Rational(3, 8)
    assert moments.moment_at(2, 3) == sp.Rational(5, 16)
    assert moments.moment_at(sp.Rational(7, 5), 0) == 1


def test_moment_at_matches_arcsine_oracle():
    for k in range(51):
        assert moments.moment_at(2, k) == moments.arcsine_moment(k)


def test_moment_at_zero_alpha():
    with pytest.raises(ArgumentError):
        moments.moment_at(0, 1)


def test_odd_moments_vanish():
    assert moments.odd_moment(3) == 0


# ---------------------------
# phi polynomials
# ---------------------------


def test_phi_table_values():
    phis = moments.phi_table(5)
    assert [phi.coeffs for phi in phis] == [
        [1],
        [-1],
        [1, 1],
        [-1, -3],
        [1, 6, 1, 1],
        [-1, -10, -5, -5],
    ]
    assert phis[4].symbol == "alpha"


def test_phi_integer_coefficients_up_to_fifty():
    for phi in moments.phi_table(50):
        assert all(c.is_integer for c in phi.coeffs)


def test_phi_identity_exact():
    result = moments.phi_identity_check(40)
    assert result.passed
    assert result.detail["n_max"] == 40


def test_phi_identity_reports_residual(monkeypatch):
    good = moments.phi_table(3)
    broken = list(good)
    broken[2] = RationalPoly.from_coeffs([2, 1], "alpha")
    monkeypatch.setattr(moments, "phi_table", lambda n_max: broken)
    result = moments.phi_identity_check(3)
    assert result.status is CheckStatus.FAIL
    assert result.witness == 2


# ---------------------------
# Stieltjes transform
# ---------------------------


@pytest.mark.parametrize("z", [1.5, 2.0, 3.0, 10.0, -2.0, -3.0])
def test_stieltjes_matches_arcsine_closed_form(z):
    series = moments.stieltjes(2, z)
    assert series.converged
    assert series.value == pytest.approx(moments.stieltjes_arcsine(z), abs=1e-10)


def test_stieltjes_negative_two():
    assert moments.stieltjes(2, -2.0).value == pytest.approx(1 / math.sqrt(3), abs=1e-10)


def test_stieltjes_far_field():
    z = 1e6
    assert moments.stieltjes(1.3, z).value * z == pytest.approx(-1.0, abs=1e-9)


def test_stieltjes_domain_checks():
    with pytest.raises(ArgumentError):
        moments.stieltjes(2, 0)
    with pytest.raises(ArgumentError):
        moments.stieltjes(2, 0.9)
    with pytest.raises(ArgumentError):
        moments.stieltjes(2, 1.5, margin=1.0)


def test_stieltjes_flags_truncation():
    series = moments.stieltjes(2, 1.01, term_cap=5)
    assert not series.converged
    assert series.terms == 5


def test_support_radius():
    assert moments.support_radius(2) == pytest.approx(1.0)
    assert moments.support_radius(1) == pytest.approx((1 + math.sqrt(5)) / 2)


# ---------------------------
# Fourier transform
# ---------------------------


@pytest.mark.parametrize("alpha", [1, 1.5, 2])
@pytest.mark.parametrize("z", [0.5, 1, 2])
def test_fourier_series_agree(alpha, z):
    _, _, discrepancy = moments.fourier(alpha, z, 30)
    assert discrepancy <= 1e-8


def test_fourier_arcsine_oracle():
    series_a, series_b, discrepancy = moments.fourier(2, 1.0, 30)
    oracle = moments.arcsine_fourier(1.0)
    assert oracle == pytest.approx(j0(1.0), abs=1e-10)
    assert series_a.value == pytest.approx(0.7651977, abs=1e-6)
    assert abs(series_b.value - oracle) <= 1e-6
    assert discrepancy <= 1e-10


def test_fourier_at_zero_is_total_mass():
    series_a, series_b, _ = moments.fourier(1.7, 0.0, 10)
    assert series_a.value == 1.0
    assert series_b.value == 1.0


# ---------------------------
# Tables
# ---------------------------


def test_moment_frame_columns():
    frame = moments.moment_frame(moments.moment_table(3), 2)
    assert list(frame.columns) == ["k", "coefficients", "lambda"]
    assert list(frame["lambda"]) == ["1", "1/2", "3/8", "5/16"]
    assert frame["coefficients"][2] == "0;0;1;1"


def test_moment_errors_zero_for_exact_values():
    exact = []
    for k in range(4):
        exact += [moments.moment_value(2, k), 0.0]
    errors = moments.moment_errors(exact, 2, 3)
    assert errors.max() == 0.0
