# Exact moments of the balanced measure of T_a(z) = 1 - a z^2
#
# lambda_a(k) = integral of z^(2k) is a polynomial in beta = 1/a with
# rational coefficients. The invariance of the measure gives, for every n,
#     sum_{k=0..n} (-1)^k C(n, k) a^k lambda_a(k) = 0 (n odd), lambda_a(n/2) (n even)
# which is solved for lambda_a(n) one degree at a time. The a = 2 case is the
# arcsine law and supplies closed-form oracles for everything in this module.

import cmath
import logging
import math
from typing import List

import numpy as np
import pandas as pd
import sympy as sp
from scipy.integrate import quad

from config import Config
from omegalab.errors import ArgumentError, ConsistencyError
from omegalab.models import CheckResult, MomentTable, RationalPoly, SeriesValue

logger = logging.getLogger(__name__)

# lambda polynomials computed so far, extended on demand (construction is sequential)
_moment_polys: List[RationalPoly] = [RationalPoly.from_coeffs([1], "beta")]


def _extend_moments(k_max):
    """Grow the cached lambda polynomials up to index k_max"""
    while len(_moment_polys) <= k_max:
        n = len(_moment_polys)
        # sum_{k<n} (-1)^k C(n, k) a^k lambda(k); a^k is a shift by beta^(-k)
        acc = RationalPoly.from_coeffs([], "beta")
        for k in range(n):
            acc = acc + _moment_polys[k].shift(-k).scale((-1) ** k * math.comb(n, k))
        rhs = _moment_polys[n // 2] if n % 2 == 0 else RationalPoly.from_coeffs([], "beta")
        _moment_polys.append((rhs - acc).shift(n).scale((-1) ** n))


def _alpha_rational(alpha):
    value = sp.Rational(alpha)
    if value == 0:
        raise ArgumentError("alpha must be nonzero")
    return value


def moment_table(k_max) -> MomentTable:
    """lambda_a(0), ..., lambda_a(k_max) as exact polynomials in beta = 1/a"""
    if k_max < 0:
        raise ArgumentError(f"k_max must be >= 0, got {k_max}")
    _extend_moments(k_max)
    polys = list(_moment_polys[: k_max + 1])

    nonnegative_integer = all(c.is_integer and c >= 0 for p in polys for c in p.coeffs)
    if not nonnegative_integer:
        logger.warning(
            "moment polynomial with a negative or non-integer coefficient (k <= %d)", k_max
        )
    return MomentTable(k_max, polys, nonnegative_integer)


def moment_at(alpha, k):
    """lambda_a(k) as an exact rational for rational alpha"""
    value = _alpha_rational(alpha)
    if k < 0:
        raise ArgumentError(f"k must be >= 0, got {k}")
    return moment_table(k)[k](1 / value)


def moment_value(alpha, k):
    """lambda_a(k) in floating point"""
    return float(moment_at(alpha, k))


def arcsine_moment(k):
    """(2k - 1)!! / (2k)!!, the even moments of the arcsine law on [-1, 1]"""
    return sp.factorial2(2 * k - 1) / sp.factorial2(2 * k)


def odd_moment(k):
    """Odd moments vanish: the balanced measure is symmetric"""
    return sp.Integer(0)


def phi_table(k_max) -> List[RationalPoly]:
    """phi_k(a) = (-1)^k a^(-k) lambda_(1/a)(k) for k = 0..k_max

    Substituting beta -> a in the lambda polynomial and dividing by a^k must
    leave a polynomial with integer coefficients; anything else means the
    moment recursion is broken.
    """
    table = moment_table(k_max)
    phis = []
    for k, lam in enumerate(table.polys):
        try:
            phi = lam.rename("alpha").shift(-k).scale((-1) ** k)
        except sp.polys.polyerrors.ExactQuotientFailed as exc:
            raise ConsistencyError(f"phi_{k} is not a polynomial: {lam}") from exc
        if not all(c.is_integer for c in phi.coeffs):
            raise ConsistencyError(f"phi_{k} has non-integer coefficients: {phi}")
        phis.append(phi)
    return phis


def phi_identity_check(n_max) -> CheckResult:
    """sum_k C(n, k) phi_k = 0 (n odd), (-1)^(n/2) phi_(n/2) a^(n/2) (n even)

    Verified exactly in the polynomial ring for every n <= n_max; a failure
    carries n as witness and the residual polynomial in the detail.
    """
    phis = phi_table(n_max)
    zero = RationalPoly.from_coeffs([], "alpha")
    for n in range(n_max + 1):
        lhs = zero
        for k in range(n + 1):
            lhs = lhs + phis[k].scale(math.comb(n, k))
        if n % 2:
            rhs = zero
        else:
            rhs = phis[n // 2].shift(n // 2).scale((-1) ** (n // 2))
        residual = lhs - rhs
        if residual.degree >= 0:
            return CheckResult.fail(n, residual=str(residual))
    return CheckResult.ok(n_max=n_max)


def support_radius(alpha):
    """Radius of a disk containing J(T_a): the positive root of a r^2 - r - 1"""
    alpha = float(alpha)
    return (1.0 + math.sqrt(1.0 + 4.0 * alpha)) / (2.0 * alpha)


def stieltjes(alpha, z, tol=None, term_cap=None, margin=None) -> SeriesValue:
    """Delta_a(z) = integral dmu(x) / (x - z) = -(1/z) sum_k lambda_a(k) z^(-2k)

    The series converges for |z| beyond the support of the measure. The
    default domain check uses the disk radius from support_radius; an
    explicit margin demands |z| > 1 + margin instead.
    """
    tol = Config.SERIES_TOL if tol is None else tol
    term_cap = Config.SERIES_TERM_CAP if term_cap is None else term_cap
    if z == 0:
        raise ArgumentError("z must be nonzero")
    if tol <= 0:
        raise ArgumentError(f"tolerance must be positive, got {tol}")
    bound = support_radius(alpha) if margin is None else 1.0 + margin
    if abs(z) <= bound:
        raise ArgumentError(f"|z| must exceed {bound:.6g} for the series to converge")

    beta = 1.0 / float(alpha)
    z_inv_sq = 1.0 / (z * z)
    total = 0.0
    power = 1.0
    last = math.inf
    terms = 0
    for k in range(term_cap):
        _extend_moments(k)
        term = _moment_polys[k].evalf(beta) * power / z
        total += term
        terms = k + 1
        last = abs(term)
        if last < tol:
            break
        power *= z_inv_sq

    converged = last < tol
    if not converged:
        logger.warning("stieltjes series not converged after %d terms (last %.3g)", terms, last)
    return SeriesValue(-total, terms, last, converged)


def stieltjes_arcsine(z):
    """Closed form at a = 2: -1/sqrt(z^2 - 1) for z > 1, +1/sqrt(z^2 - 1) for z < -1"""
    if abs(z) <= 1:
        raise ArgumentError("closed form holds only for |z| > 1")
    return -math.copysign(1.0, z) / math.sqrt(z * z - 1.0)


def fourier(alpha, z, n_max=30, tol=None):
    """Two expansions of the Fourier transform of the balanced measure

    series_a = sum_n (-1)^n lambda_a(n) z^(2n) / (2n)!
    series_b = e^(-iz) sum_n (i a)^n lambda_a(n) z^n / n!

    The second one uses invariance: the transform equals the integral of
    exp(-i (1 - a t^2) z). Both are truncated after n_max + 1 terms.

    Returns:
        (series_a, series_b, discrepancy) with discrepancy = |a - b|
    """
    tol = Config.SERIES_TOL if tol is None else tol
    if n_max < 0:
        raise ArgumentError(f"n_max must be >= 0, got {n_max}")
    _extend_moments(n_max)
    beta = 1.0 / float(alpha)
    alpha = float(alpha)

    total_a, total_b = 0.0, 0j
    last_a = last_b = 0.0
    for n in range(n_max + 1):
        lam = _moment_polys[n].evalf(beta)
        term_a = (-1) ** n * lam * z ** (2 * n) / math.factorial(2 * n)
        term_b = (1j * alpha) ** n * lam * z**n / math.factorial(n)
        total_a += term_a
        total_b += term_b
        last_a, last_b = abs(term_a), abs(term_b)

    value_b = cmath.exp(-1j * z) * total_b
    series_a = SeriesValue(total_a, n_max + 1, last_a, last_a < tol)
    series_b = SeriesValue(value_b, n_max + 1, last_b, last_b < tol)
    return series_a, series_b, abs(total_a - value_b)


def arcsine_fourier(z):
    """Transform of the arcsine law by quadrature with the (1 - t^2)^(-1/2) weight"""
    value, _ = quad(
        lambda t: math.cos(z * t) / math.pi, -1.0, 1.0, weight="alg", wvar=(-0.5, -0.5)
    )
    return value


def moment_frame(table: MomentTable, alpha=2) -> pd.DataFrame:
    """Tabular form: k, exact coefficients (ascending powers of beta), lambda at alpha"""
    value = _alpha_rational(alpha)
    rows = []
    for k, poly in enumerate(table.polys):
        rows.append(
            {
                "k": k,
                "coefficients": ";".join(str(c) for c in poly.coeffs),
                "lambda": str(poly(1 / value)),
            }
        )
    return pd.DataFrame(rows, columns=["k", "coefficients", "lambda"])


def moment_errors(cloud_moments, alpha, k_max):
    """|empirical even moment - lambda_a(k)| for k <= k_max"""
    exact = np.array([moment_value(alpha, k) for k in range(k_max + 1)])
    even = np.asarray(cloud_moments)[0 : 2 * k_max + 1 : 2]
    return np.abs(even - exact)
