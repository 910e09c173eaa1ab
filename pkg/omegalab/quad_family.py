# Closed forms and classifiers for T_a(x) = 1 - a x^2 on [-1, 1]
# Fixed point, two-cycle, multipliers, the regime classifier, the critical
# orbit and the derivative-growth statistic along the orbit of 1
#
# Functions accept floats or sympy Rationals. Rationals switch on exact mode:
# square roots stay symbolic so boundary identities hold exactly.

import logging
import math

import sympy as sp

from omegalab.errors import ArgumentError, NoRealCycleError
from omegalab.models import (
    BCStatistic,
    DeltaInfProbe,
    OrbitRecord,
    ProbeVerdict,
    Regime,
    RegimeReport,
)
from omegalab.orbit_core import detect_cycle

logger = logging.getLogger(__name__)

THREE_QUARTERS = sp.Rational(3, 4)
FIVE_QUARTERS = sp.Rational(5, 4)


def _exact(alpha):
    return isinstance(alpha, sp.Basic)


def _require_positive(alpha):
    if not alpha > 0:
        raise ArgumentError(f"alpha must be > 0, got {alpha}")


def quad_map(alpha, x):
    return 1 - alpha * x * x


def derivative(alpha, x):
    """T_a'(x) = -2 a x"""
    return -2 * alpha * x


def fixed_point(alpha):
    """Unique positive fixed point x_*(a) = (sqrt(1 + 4a) - 1) / (2a)"""
    _require_positive(alpha)
    if _exact(alpha):
        return sp.simplify((sp.sqrt(1 + 4 * alpha) - 1) / (2 * alpha))
    # rationalized form, free of cancellation for small alpha
    return 2.0 / (1.0 + math.sqrt(1.0 + 4.0 * alpha))


def fixed_multiplier(alpha):
    """|T_a'(x_*)| = sqrt(1 + 4a) - 1"""
    _require_positive(alpha)
    if _exact(alpha):
        return sp.simplify(sp.sqrt(1 + 4 * alpha) - 1)
    return 4.0 * alpha / (1.0 + math.sqrt(1.0 + 4.0 * alpha))


def two_cycle(alpha):
    """The real two-cycle (x_1, x_2) of T_a, defined for a > 3/4

    x_1 = (1 + sqrt(4a - 3)) / (2a) and x_2 = (1 - sqrt(4a - 3)) / (2a),
    so that T_a(x_1) = x_2 and T_a(x_2) = x_1.
    """
    _require_positive(alpha)
    if not alpha > THREE_QUARTERS:
        raise NoRealCycleError(f"T_a has no real two-cycle for alpha <= 3/4, got {alpha}")
    if _exact(alpha):
        root = sp.sqrt(4 * alpha - 3)
        return (
            sp.simplify((1 + root) / (2 * alpha)),
            sp.simplify((1 - root) / (2 * alpha)),
        )
    root = math.sqrt(4.0 * alpha - 3.0)
    x1 = (1.0 + root) / (2.0 * alpha)
    # x_1 * x_2 = (1 - a) / a^2 avoids cancellation in 1 - root
    x2 = (1.0 - alpha) / (alpha * alpha * x1)
    return x1, x2


def cycle_multiplier(alpha):
    """|(T_a^2)'(x_1)| = 4 |1 - a|"""
    two_cycle(alpha)  # same domain checks
    if _exact(alpha):
        return 4 * sp.Abs(1 - alpha)
    return 4.0 * abs(1.0 - alpha)


def second_iterate_fixed_points(alpha):
    """The three fixed points of T_a^2 in (-1, 1), ordered x_1 > x_* > x_2"""
    x1, x2 = two_cycle(alpha)
    return x1, fixed_point(alpha), x2


def classify(alpha) -> RegimeReport:
    """Regime of T_a for 0 < a < 2

    fixed-point-attracting for a <= 3/4, two-cycle-attracting for
    3/4 < a < 5/4, beyond-5/4 otherwise (no claim is made there).
    """
    if not 0 < alpha < 2:
        raise ArgumentError(f"alpha must lie in (0, 2), got {alpha}")

    if alpha <= THREE_QUARTERS:
        regime = Regime.FIXED_POINT_ATTRACTING
    elif alpha < FIVE_QUARTERS:
        regime = Regime.TWO_CYCLE_ATTRACTING
    else:
        regime = Regime.BEYOND_FIVE_QUARTERS

    report = RegimeReport(
        alpha=alpha,
        regime=regime,
        x_star=fixed_point(alpha),
        fixed_multiplier=fixed_multiplier(alpha),
    )
    if alpha > THREE_QUARTERS:
        report.two_cycle = two_cycle(alpha)
        report.cycle_multiplier = cycle_multiplier(alpha)
    return report


def critical_orbit(alpha, n):
    """xi_0, ..., xi_n with xi_0 = 0 and xi_(k+1) = 1 - a xi_k^2"""
    if n < 0:
        raise ArgumentError(f"n must be >= 0, got {n}")
    xi = sp.Integer(0) if _exact(alpha) else 0.0
    orbit = [xi]
    for _ in range(n):
        xi = quad_map(alpha, xi)
        orbit.append(xi)
    return orbit


def bc_statistic(alpha, n) -> BCStatistic:
    """log |d/dx T_a^n (1)| along the orbit of 1, checked against n^(2/3)

    The chain rule gives log|(T_a^m)'(1)| = sum_{j < m} ln|2 a x_j| with
    x_j = T_a^j(1); it is accumulated in log space. An exact zero in the
    orbit makes every later derivative vanish and the statistic degenerate.
    """
    if n < 1:
        raise ArgumentError(f"n must be >= 1, got {n}")
    alpha = float(alpha)

    log_values, thresholds, flags = [], [], []
    degenerate_index = None
    total = 0.0
    x = 1.0
    for m in range(1, n + 1):
        if degenerate_index is None and x == 0.0:
            degenerate_index = m
            logger.info("orbit of 1 hits the critical point; statistic degenerate at %d", m)
        if degenerate_index is None:
            total += math.log(abs(2.0 * alpha * x))
        else:
            total = -math.inf
        threshold = m ** (2.0 / 3.0)
        log_values.append(total)
        thresholds.append(threshold)
        flags.append(total >= threshold)
        x = quad_map(alpha, x)

    return BCStatistic(alpha, n, log_values, thresholds, flags, degenerate_index)


def delta_inf_probe(alpha, horizon=1000, tol=1e-9) -> DeltaInfProbe:
    """Heuristic search for an attracting cycle along the critical orbit

    0 is the only critical point, so an attracting cycle attracts the
    critical orbit. A cycle detected in the tail is reported with its
    period when its multiplier is below 1; a critical orbit that lands
    exactly on a repelling cycle is reported as eventually periodic.
    The verdict "no-cycle-detected" only means: nothing up to the horizon.
    """
    if horizon < 1000:
        raise ArgumentError(f"horizon must be >= 1000, got {horizon}")
    alpha = float(alpha)

    orbit = critical_orbit(alpha, horizon)
    report = detect_cycle(OrbitRecord(initial=0.0, states=orbit), tol)
    if report is None:
        return DeltaInfProbe(alpha, horizon, ProbeVerdict.NO_CYCLE_DETECTED)

    multiplier = math.prod(abs(derivative(alpha, x)) for x in report.points)
    if multiplier < 1.0:
        verdict = ProbeVerdict.ATTRACTING_CYCLE_FOUND
    else:
        verdict = ProbeVerdict.EVENTUALLY_PERIODIC
    return DeltaInfProbe(alpha, horizon, verdict, report.period, multiplier)


def simulate_limit(alpha, u, steps=100000, tol=1e-9):
    """Iterate T_a from u and return the cycle its tail settles on (or None)"""
    alpha = float(alpha)
    x = float(u)
    tail = []
    for step in range(steps):
        x = quad_map(alpha, x)
        if step >= steps - 64:
            tail.append(x)
    return detect_cycle(OrbitRecord(initial=u, states=tail), tol)
