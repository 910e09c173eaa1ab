import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from omegalab import perm_unitary as perms
from omegalab.errors import ArgumentError
from omegalab.models import CheckStatus

from conftest import FIVE_CYCLE

# ---------------------------
# Cycle decomposition
# ---------------------------


def test_decompose_three_cycle():
    perm = perms.decompose([2, 0, 1])
    assert perm.cycles == ((0, 2, 1),)
    assert perm.inverse() == (1, 2, 0)


def test_decompose_canonical_order():
    perm = perms.decompose([0, 2, 1, 3])
    assert perm.cycles == ((0,), (1, 2), (3,))


def test_decompose_duplicate_witness():
    with pytest.raises(ArgumentError) as info:
        perms.decompose([1, 1, 0])
    assert info.value.witness == (1, 0, 1)


@pytest.mark.parametrize("table", [[], [0, 3], [-1, 0]])
def test_decompose_rejects_bad_tables(table):
    with pytest.raises(ArgumentError):
        perms.decompose(table)


def test_inner_and_norm():
    f = perms.indicator(4, [0, 1])
    assert perms.inner(f, f) == pytest.approx(0.5)
    assert perms.norm(f) == pytest.approx(math.sqrt(0.5))
    assert perms.inner(f, 1j * f) == pytest.approx(-0.5j)


# ---------------------------
# Real powers
# ---------------------------


def test_half_power_of_swap():
    """T^(1/2) chi_0 on a two-cycle"""
    perm = perms.decompose([1, 0])
    half = perms.power_t(perm, perms.indicator(2, [0]), 0.5)
    assert half == pytest.approx(np.array([(1 + 1j) / 2, (1 - 1j) / 2]))


def test_integer_powers_match_composition():
    rng = np.random.default_rng(0)
    perm = perms.decompose(rng.permutation(9))
    f = rng.normal(size=9) + 1j * rng.normal(size=9)
    for n in range(-6, 7):
        assert np.abs(perms.power_t(perm, f, n) - perms.compose_power(perm, f, n)).max() <= 1e-12


def test_compose_power_shifts_along_cycle():
    perm = perms.decompose(FIVE_CYCLE)
    f = np.arange(5, dtype=complex)
    assert perms.compose_power(perm, f, 1) == pytest.approx([1, 2, 3, 4, 0])
    assert perms.compose_power(perm, f, -1) == pytest.approx([4, 0, 1, 2, 3])


def test_power_stays_on_cycle():
    """Functions supported on one cycle keep their support"""
    perm = perms.decompose([1, 0, 3, 4, 2])
    f = perms.indicator(5, [2])
    moved = perms.power_t(perm, f, 0.37)
    assert np.abs(moved[:2]).max() <= 1e-15
    assert np.abs(moved[2:]).max() > 0


def test_cycles_are_invariant_under_real_powers():
    """T^t chi_B = chi_B for every cycle B"""
    rng = np.random.default_rng(4)
    perm = perms.decompose([2, 0, 1, 4, 3, 5, 7, 8, 9, 6])
    for cycle in perm.cycles:
        chi = perms.indicator(perm.size, cycle)
        for t in rng.uniform(-10, 10, size=20):
            assert np.abs(perms.power_t(perm, chi, t) - chi).max() <= 1e-12


def test_power_rejects_wrong_length():
    perm = perms.decompose([1, 0])
    with pytest.raises(ArgumentError):
        perms.power_t(perm, np.ones(3), 0.5)


# ---------------------------
# Spectral measures
# ---------------------------


def test_three_cycle_atoms():
    perm = perms.decompose([1, 2, 0])
    f = perms.indicator(3, [0])
    measure = perms.spectral_measure(perm, f, f)
    angles = [theta for theta, _ in measure.atoms]
    weights = [w for _, w in measure.atoms]
    assert measure.self_correlation
    assert angles == pytest.approx([0.0, 2 * math.pi / 3, 4 * math.pi / 3])
    assert weights == pytest.approx([1 / 9] * 3)


def test_invariant_set_single_atom():
    perm = perms.decompose([1, 0, 2])
    f = perms.indicator(3, [0, 1])
    measure = perms.spectral_measure(perm, f, f)
    assert len(measure.atoms) == 1
    assert measure.atoms[0][0] == 0.0
    assert measure.atoms[0][1] == pytest.approx(2 / 3)


def test_disjoint_cycles_give_zero_measure():
    perm = perms.decompose([1, 0, 2])
    measure = perms.spectral_measure(perm, perms.indicator(3, [0]), perms.indicator(3, [2]))
    assert measure.atoms == []
    assert perms.fourier_transform(measure, 1.3) == 0


def test_fourier_transform_reproduces_correlation():
    rng = np.random.default_rng(2)
    perm = perms.decompose(rng.permutation(7))
    f = rng.normal(size=7) + 1j * rng.normal(size=7)
    g = rng.normal(size=7) + 1j * rng.normal(size=7)
    measure = perms.spectral_measure(perm, f, g)
    for t in (0.0, 0.4, 1.0, 2.5):
        expected = perms.inner(perms.power_t(perm, f, t), g)
        assert perms.fourier_transform(measure, t) == pytest.approx(expected, abs=1e-12)


def test_fourier_transform_half_power_of_swap():
    """<T^(1/2) chi_0, chi_0> = (1 + i) / 4 on a two-cycle"""
    perm = perms.decompose([1, 0])
    f = perms.indicator(2, [0])
    measure = perms.spectral_measure(perm, f, f)
    assert [theta for theta, _ in measure.atoms] == pytest.approx([0.0, math.pi])
    assert measure.frequencies == [Fraction(0), Fraction(-1, 2)]
    assert perms.inner(perms.power_t(perm, f, 0.5), f) == pytest.approx(0.25 + 0.25j)
    assert perms.fourier_transform(measure, 0.5) == pytest.approx(0.25 + 0.25j, abs=1e-12)


@pytest.mark.parametrize("size", [1, 2, 5, 9, 12])
def test_fourier_consistency_at_real_times(size):
    rng = np.random.default_rng(size)
    perm = perms.decompose(rng.permutation(size))
    f = rng.normal(size=size) + 1j * rng.normal(size=size)
    g = rng.normal(size=size) + 1j * rng.normal(size=size)
    measure = perms.spectral_measure(perm, f, g)
    for t in (0.1, 0.5, math.sqrt(2)):
        expected = perms.inner(perms.power_t(perm, f, t), g)
        assert abs(perms.fourier_transform(measure, t) - expected) <= 1e-12


def test_total_weight_is_squared_norm():
    perm = perms.decompose(FIVE_CYCLE)
    f = perms.indicator(5, [0, 3])
    measure = perms.spectral_measure(perm, f, f)
    assert measure.total_weight.real == pytest.approx(perms.norm(f) ** 2)


# ---------------------------
# Autocorrelation and the group law
# ---------------------------


def test_autocorrelation_values():
    perm = perms.decompose(FIVE_CYCLE)
    assert perms.autocorrelation(perm, [0, 1], 0) == sp.Rational(2, 5)
    assert perms.autocorrelation(perm, [0, 1], 1) == sp.Rational(1, 5)
    assert perms.autocorrelation(perm, [0, 1], 2) == 0


def test_autocorrelation_matches_spectral_measure():
    perm = perms.decompose([2, 0, 1, 4, 3, 5])
    subset = [0, 3, 5]
    f = perms.indicator(6, subset)
    measure = perms.spectral_measure(perm, f, f)
    for n in range(-4, 5):
        exact = perms.autocorrelation(perm, subset, n)
        assert perms.fourier_transform(measure, n).real == pytest.approx(float(exact), abs=1e-12)


def test_autocorrelation_rejects_foreign_subset():
    with pytest.raises(ArgumentError):
        perms.autocorrelation(perms.decompose([1, 0]), [2], 1)


def test_group_law_five_cycle():
    perm = perms.decompose(FIVE_CYCLE)
    assert perms.group_law_check(perm, 0.3, 0.7).passed


@pytest.mark.parametrize("size", [1, 4, 12])
def test_group_law_random_permutations(size):
    perm = perms.decompose(np.random.default_rng(size).permutation(size))
    assert perms.group_law_check(perm, 0.3, 0.7, trials=5).passed


def test_group_law_reports_failure():
    perm = perms.decompose(FIVE_CYCLE)
    result = perms.group_law_check(perm, 0.3, 0.7, tol=-1.0)
    assert result.status is CheckStatus.FAIL
    assert result.witness == ("group-law", 0)
