import cmath

import numpy as np
import pytest
import sympy as sp

from omegalab import julia_moments as moments
from omegalab import julia_sampler as sampler
from omegalab.errors import ArgumentError
from omegalab.models import CertificateVerdict, CheckStatus, SampleCloud


@pytest.fixture(scope="module")
def chebyshev_cloud():
    return sampler.sample(2, 100000, seed=1)


# ---------------------------
# Inverse branches and the chain
# ---------------------------


def test_inverse_branches_invert_the_map():
    rng = np.random.default_rng(4)
    for z in rng.normal(size=20) + 1j * rng.normal(size=20):
        for root in sampler.inverse_branches(1.3, z):
            assert 1 - 1.3 * root * root == pytest.approx(z, abs=1e-12)


def test_inverse_branches_principal_root():
    plus, minus = sampler.inverse_branches(2, -1)
    assert plus == cmath.sqrt(1)
    assert minus == -plus


def test_sample_reproducible():
    first = sampler.sample(1.5, 500, seed=7)
    again = sampler.sample(1.5, 500, seed=7)
    other = sampler.sample(1.5, 500, seed=8)
    assert np.array_equal(first.points, again.points)
    assert not np.array_equal(first.points, other.points)
    assert first.metadata() == {
        "alpha": 1.5,
        "seed": 7,
        "burn_in": 100,
        "count": 500,
        "generator": "Philox",
    }


def test_chain_consistency():
    for alpha in (2, 1.5, 0.8):
        cloud = sampler.sample(alpha, 1000, seed=0)
        assert sampler.chain_consistency(cloud) <= 1e-12


def test_sample_argument_checks():
    with pytest.raises(ArgumentError):
        sampler.sample(2.5, 10)
    with pytest.raises(ArgumentError):
        sampler.sample(0, 10)
    with pytest.raises(ArgumentError):
        sampler.sample(2, 0)
    with pytest.raises(ArgumentError):
        sampler.sample(2, 10, burn_in=-1)


# ---------------------------
# Empirical checks at a = 2
# ---------------------------


def test_cloud_matches_arcsine_law(chebyshev_cloud):
    assert sampler.arcsine_distance(chebyshev_cloud) <= 0.01


def test_cloud_stays_in_unit_interval(chebyshev_cloud):
    assert sampler.support_bound(chebyshev_cloud) <= 1.0
    assert np.abs(chebyshev_cloud.points.imag).max() == 0.0


def test_empirical_moments(chebyshev_cloud):
    """Odd moments vanish; even moments follow (2k - 1)!! / (2k)!!"""
    empirical = sampler.empirical_moments(chebyshev_cloud, 3)
    assert len(empirical) == 8
    assert empirical[0] == pytest.approx(1.0)
    assert np.abs(empirical[1::2]).max() <= 0.02
    assert empirical[2].real == pytest.approx(0.5, abs=0.02)
    assert empirical[4].real == pytest.approx(3 / 8, abs=0.02)


def test_balance_check(chebyshev_cloud):
    assert sampler.balance_check(chebyshev_cloud, lambda w: np.ones_like(w), 0.02).passed
    assert sampler.balance_check(chebyshev_cloud, lambda w: w, 0.02).passed


def test_balance_check_fails_on_single_point():
    cloud = SampleCloud(np.array([0.5 + 0j]), 2.0, 0, 0, 1)
    result = sampler.balance_check(cloud, lambda w: np.ones_like(w), 0.02)
    assert result.status is CheckStatus.FAIL


def test_symmetry_check(chebyshev_cloud):
    assert sampler.symmetry_check(chebyshev_cloud, 0.02).passed


# ---------------------------
# Empirical checks off the real line
# ---------------------------


@pytest.fixture(scope="module", params=[1.0, 1.5])
def complex_cloud(request):
    return sampler.sample(request.param, 100000, seed=3)


def test_moments_agree_off_the_real_line(complex_cloud):
    k = np.arange(6)
    empirical = sampler.empirical_moments(complex_cloud, 5)
    errors = moments.moment_errors(empirical, complex_cloud.alpha, 5)
    assert np.all(errors <= 5 * 4.0**k / np.sqrt(complex_cloud.count))


def test_symmetry_off_the_real_line(complex_cloud):
    assert sampler.symmetry_check(complex_cloud, 0.02).passed


def test_support_leaves_the_unit_interval(complex_cloud):
    assert 1.0 < sampler.support_bound(complex_cloud) < 2.0
    assert np.abs(complex_cloud.points.imag).max() > 0.0


def test_empty_cloud_rejected():
    cloud = SampleCloud(np.array([], dtype=complex), 2.0, 0, 0, 0)
    with pytest.raises(ArgumentError):
        sampler.empirical_moments(cloud, 2)
    with pytest.raises(ArgumentError):
        sampler.support_bound(cloud)


# ---------------------------
# Realness certificate
# ---------------------------


def test_certificate_refutes_at_one_point_nine():
    """b = 0.9, 0.539, -0.448"""
    cert = sampler.realness_certificate(1.9)
    assert cert.verdict is CertificateVerdict.REFUTED
    assert cert.failure_index == 2
    assert cert.chain == pytest.approx([0.9, 0.539, -0.448], abs=1e-3)


def test_certificate_fixed_chain_at_two():
    cert = sampler.realness_certificate(2)
    assert cert.verdict is CertificateVerdict.FIXED_CHAIN
    assert cert.failure_index is None


@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_certificate_small_alpha_fails_immediately(alpha):
    cert = sampler.realness_certificate(alpha)
    assert cert.verdict is CertificateVerdict.REFUTED
    assert cert.failure_index == 0


def test_certificate_exact_mode():
    cert = sampler.realness_certificate(sp.Rational(19, 10))
    assert cert.exact
    assert cert.failure_index == 2
    assert cert.chain[1] == sp.Rational(539, 1000)


def test_certificate_inconclusive_at_cap():
    cert = sampler.realness_certificate(1.99, cap=1)
    assert cert.verdict is CertificateVerdict.INCONCLUSIVE_AT_CAP


def test_certificate_grid_always_refuted():
    for alpha in np.linspace(1.001, 1.999, 1000):
        assert sampler.realness_certificate(alpha).verdict is CertificateVerdict.REFUTED


def test_certificate_annotations():
    cert = sampler.realness_certificate(1.8)
    assert cert.annotations["b1_positive_threshold"] == pytest.approx(1.7548777, abs=1e-6)
