# Monte-Carlo sampling of the balanced measure by random inverse iteration,
# empirical checks against the exact moments, and the certificate showing
# that J(T_a) is not contained in the real line for 0 < a < 2

import cmath
import logging

import numpy as np
import sympy as sp
from scipy import stats

from config import Config
from omegalab.errors import ArgumentError
from omegalab.models import (
    CertificateVerdict,
    CheckResult,
    RealnessCertificate,
    SampleCloud,
)
from omegalab.quad_family import fixed_point

logger = logging.getLogger(__name__)

# the arcsine law on [-1, 1]: CDF 1/2 + arcsin(t)/pi
ARCSINE = stats.arcsine(loc=-1.0, scale=2.0)

# b_1 > 0 exactly when a (a - 1)^2 > 1; the real root is near 1.7549, not 7/4
B1_THRESHOLD = float(max(r.real for r in np.roots([1.0, -2.0, 1.0, -1.0]) if abs(r.imag) < 1e-12))


def inverse_branches(alpha, z):
    """V_+(z), V_-(z) = +/- sqrt((1 - z) / a), principal square root"""
    root = cmath.sqrt((1 - z) / alpha)
    return root, -root


def _require_alpha(alpha):
    if not 0 < alpha <= 2:
        raise ArgumentError(f"alpha must lie in (0, 2], got {alpha}")


def sample(alpha, count, burn_in=None, seed=0) -> SampleCloud:
    """Random inverse iteration started at the fixed point x_*(a)

    Each step replaces z by V_+(z) or V_-(z) according to a fair coin from a
    Philox generator seeded with `seed`. The first burn_in points are
    discarded; the next `count` points form the cloud.

    Args:
        alpha: parameter in (0, 2]
        count: number of retained points (>= 1)
        burn_in: discarded leading points
        seed: generator seed

    Returns:
        SampleCloud in chain order
    """
    burn_in = Config.SAMPLER_BURN_IN if burn_in is None else burn_in
    _require_alpha(alpha)
    if count < 1:
        raise ArgumentError(f"count must be >= 1, got {count}")
    if burn_in < 0:
        raise ArgumentError(f"burn_in must be >= 0, got {burn_in}")
    alpha = float(alpha)

    rng = np.random.Generator(np.random.Philox(seed))
    signs = rng.integers(0, 2, size=burn_in + count)

    points = np.empty(count, dtype=complex)
    z = complex(fixed_point(alpha))
    for step, coin in enumerate(signs):
        root = cmath.sqrt((1 - z) / alpha)
        z = root if coin else -root
        if step >= burn_in:
            points[step - burn_in] = z
    return SampleCloud(points, alpha, int(seed), burn_in, count, Config.SAMPLER_GENERATOR)


def _require_points(cloud):
    if len(cloud.points) == 0:
        raise ArgumentError("the sample cloud is empty")


def empirical_moments(cloud: SampleCloud, k_max):
    """Sample averages of z^m for m = 0..2 k_max + 1"""
    _require_points(cloud)
    if k_max < 0:
        raise ArgumentError(f"k_max must be >= 0, got {k_max}")
    powers = np.vander(cloud.points, 2 * k_max + 2, increasing=True)
    return powers.mean(axis=0)


def balance_check(cloud: SampleCloud, phi, tol) -> CheckResult:
    """Sample average of z * phi(T_a(z)) should vanish within tol"""
    _require_points(cloud)
    z = cloud.points
    images = 1.0 - cloud.alpha * z * z
    value = complex(np.mean(z * phi(images)))
    if abs(value) <= tol:
        return CheckResult.ok(value=value)
    return CheckResult.fail(value)


def _ks_symmetric(values):
    """Kolmogorov distance between the samples of values and of -values"""
    return stats.ks_2samp(values, -values).statistic


def symmetry_check(cloud: SampleCloud, tol) -> CheckResult:
    """Empirical laws of z and -z agree (real and imaginary parts separately)"""
    _require_points(cloud)
    real_gap = _ks_symmetric(cloud.points.real)
    imag_gap = _ks_symmetric(cloud.points.imag)
    if max(real_gap, imag_gap) <= tol:
        return CheckResult.ok(real=real_gap, imag=imag_gap)
    return CheckResult.fail(max(real_gap, imag_gap), real=real_gap, imag=imag_gap)


def support_bound(cloud: SampleCloud):
    """max |z| over the cloud"""
    _require_points(cloud)
    return float(np.abs(cloud.points).max())


def arcsine_distance(cloud: SampleCloud):
    """Kolmogorov distance between Re z and the arcsine law (meaningful at a = 2)"""
    _require_points(cloud)
    return float(stats.kstest(cloud.points.real, ARCSINE.cdf).statistic)


def chain_consistency(cloud: SampleCloud):
    """max |T_a(z_(n+1)) - z_n| over consecutive points"""
    z = cloud.points
    if len(z) < 2:
        return 0.0
    return float(np.abs(1.0 - cloud.alpha * z[1:] ** 2 - z[:-1]).max())


def realness_certificate(alpha, cap=None) -> RealnessCertificate:
    """Refute J(T_a) inside R by the shrinking-interval chain

    If J(T_a) were real it would sit in [-1, 1] and force a > 1; then it
    sits in [-b_n, b_n] with b_0 = a - 1 and b_(n+1) = a b_n^2 - 1. The
    first b_m <= 0 is a contradiction (verdict refuted, failure index m).
    A non-decreasing step means the chain never fails (a = 2). Rational
    alpha (sympy) runs the chain exactly.
    """
    cap = Config.CERT_CAP if cap is None else cap
    exact = isinstance(alpha, sp.Basic)
    _require_alpha(alpha)
    if cap < 1:
        raise ArgumentError(f"cap must be >= 1, got {cap}")

    annotations = {
        "b1_positive_threshold": B1_THRESHOLD,
        "rounded_thresholds": ["7/4", "15/8"],
    }

    one = sp.Integer(1) if exact else 1.0
    b = alpha - one
    chain = [b]
    if not alpha > 1:
        return RealnessCertificate(alpha, chain, 0, CertificateVerdict.REFUTED, exact, annotations)

    for m in range(1, cap + 1):
        nxt = alpha * b * b - one
        chain.append(nxt)
        if nxt <= 0:
            return RealnessCertificate(
                alpha, chain, m, CertificateVerdict.REFUTED, exact, annotations
            )
        if nxt >= b:
            return RealnessCertificate(
                alpha, chain, None, CertificateVerdict.FIXED_CHAIN, exact, annotations
            )
        b = nxt

    logger.info("realness chain for alpha=%s still positive after %d steps", alpha, cap)
    return RealnessCertificate(
        alpha, chain, None, CertificateVerdict.INCONCLUSIVE_AT_CAP, exact, annotations
    )
