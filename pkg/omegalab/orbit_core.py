# Orbit iteration, omega-limit estimation, cycle detection and Birkhoff averages
# for pluggable dynamical systems, plus the harnesses that test the statements
# about omega-limit sets (periodic points, minimality, connectedness) on fixtures

import logging
import math
from typing import Callable, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from config import Config
from omegalab.errors import ArgumentError, DomainEscapeError
from omegalab.models import (
    TWO_PI,
    CheckResult,
    CheckStatus,
    CycleReport,
    DynSystem,
    OmegaEstimate,
    OrbitRecord,
    StateSpace,
)

logger = logging.getLogger(__name__)

GOLDEN_MEAN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------
# Fixture systems
# ---------------------------


def squaring_map():
    """z -> z^2 on the complex plane"""
    return DynSystem("squaring", StateSpace.COMPLEX_PLANE, lambda z: z * z)


def rotation(gamma=GOLDEN_MEAN):
    """Rotation of the unit circle by the angle 2*pi*gamma

    States are angles in [0, 2*pi). For irrational gamma the system is
    minimal and uniquely ergodic.
    """
    step = TWO_PI * gamma
    return DynSystem(
        f"rotation({gamma:.12g})",
        StateSpace.UNIT_CIRCLE,
        lambda theta: (theta + step) % TWO_PI,
    )


def quadratic_map(alpha):
    """T_a(x) = 1 - a x^2 on the real line (escape declared at ESCAPE_RADIUS)"""
    alpha = float(alpha)
    return DynSystem(
        f"quadratic({alpha:.12g})", StateSpace.REAL_INTERVAL, lambda x: 1.0 - alpha * x * x
    )


def finite_map(image):
    """Self-map of {0, ..., len(image)-1} given by its image table"""
    table = [int(y) for y in image]
    return DynSystem(
        f"finite({len(table)})", StateSpace.FINITE_SET, lambda x: table[x], size=len(table)
    )


def _abs_distance(x, y):
    return abs(x - y)


# ---------------------------
# Operations
# ---------------------------


def iterate(system: DynSystem, u, n: int) -> OrbitRecord:
    """Compute u, Tu, ..., T^n u

    Args:
        system: the dynamical system
        u: initial state, must lie in the state space
        n: number of iterations (n >= 0)

    Returns:
        OrbitRecord with n + 1 states

    Raises:
        ArgumentError: negative n or u outside the state space
        DomainEscapeError: an iterate left the state space
    """
    if n < 0:
        raise ArgumentError(f"iteration count must be >= 0, got {n}")
    if not system.contains(u):
        raise ArgumentError(f"initial state {u!r} is outside {system.space.value}")

    states = [u]
    x = u
    for index in range(1, n + 1):
        x = system(x)
        if not system.contains(x):
            logger.info("%s escaped at index %d", system.name, index)
            raise DomainEscapeError(index, x)
        states.append(x)
    return OrbitRecord(initial=u, states=states)


def _brent_lambda(seq, dist, tol):
    """Brent's power-of-two search with a tolerance instead of equality"""
    power = lam = 1
    tortoise, hare = 0, 1
    while hare < len(seq):
        if dist(seq[tortoise], seq[hare]) <= tol:
            return lam
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare += 1
        lam += 1
    return None


def _closure_residual(states, period, dist):
    """Max distance between the last `period` states and the states one period earlier"""
    residual = 0.0
    for j in range(period):
        later = len(states) - 1 - j
        earlier = later - period
        if earlier < 0:
            break
        residual = max(residual, dist(states[later], states[earlier]))
    return residual


def detect_cycle(
    record: OrbitRecord, tol: float = None, system: DynSystem = None
) -> Optional[CycleReport]:
    """Find a cycle in the tail of an orbit record

    Brent's search runs over the back half of the record and proposes a
    period; the minimal period is then the smallest divisor of that proposal
    that closes up within tol on the last states of the record.

    Args:
        record: orbit record
        tol: recurrence tolerance (absolute)
        system: supplies the metric; plain |x - y| when omitted

    Returns:
        CycleReport, or None when nothing recurs within tol
    """
    tol = Config.CYCLE_TOL if tol is None else tol
    if not record.states:
        raise ArgumentError("cannot detect a cycle in an empty record")
    if tol <= 0:
        raise ArgumentError(f"tolerance must be positive, got {tol}")
    dist = system.distance if system is not None else _abs_distance

    states = record.states
    start = len(states) // 2 if len(states) > 3 else 0
    proposal = _brent_lambda(states[start:], dist, tol)
    if proposal is None:
        return None

    for period in range(1, proposal + 1):
        if proposal % period:
            continue
        residual = _closure_residual(states, period, dist)
        if residual <= tol:
            return CycleReport(
                period=period,
                points=list(states[len(states) - period :]),
                residual=residual,
                tol=tol,
            )
    return None


def _leader_clusters(system, points, tol):
    """Greedy sequential leader clustering in iteration order"""
    leaders = []
    for x in points:
        if leaders and system.distances([x], leaders).min() <= tol:
            continue
        leaders.append(x)
    return leaders


def omega_estimate(
    system: DynSystem, u, burn_in: int = 1000, tail: int = 1000, tol: float = None
) -> OmegaEstimate:
    """Approximate omega(u) by clustering the orbit tail

    The iterates with index in [burn_in, burn_in + tail) are grouped into
    tol-separated representatives.
    """
    tol = Config.OMEGA_TOL if tol is None else tol
    if burn_in < 1 or tail < 1:
        raise ArgumentError("burn_in and tail must both be >= 1")
    if tol <= 0:
        raise ArgumentError(f"tolerance must be positive, got {tol}")

    record = iterate(system, u, burn_in + tail - 1)
    representatives = _leader_clusters(system, record.states[burn_in:], tol)
    return OmegaEstimate(representatives, tol, burn_in, tail, system.name)


def theorem1_check(
    estimate: OmegaEstimate, system: DynSystem, tol: float = None, period_cap: int = None
) -> CheckResult:
    """If omega(u) holds a periodic point, omega(u) is that periodic orbit

    Returns PASS when a periodic representative exists and every
    representative lies within tol of its orbit, FAIL with the uncovered
    representative as witness, INCONCLUSIVE when no representative returns
    within period_cap steps.
    """
    tol = estimate.tol if tol is None else tol
    period_cap = Config.PERIOD_CAP if period_cap is None else period_cap

    for anchor in estimate.representatives:
        orbit = [anchor]
        x = anchor
        for m in range(1, period_cap + 1):
            x = system(x)
            if system.distance(x, anchor) <= tol:
                break
            orbit.append(x)
        else:
            continue

        gaps = system.distances(estimate.representatives, orbit).min(axis=1)
        for rep, gap in zip(estimate.representatives, gaps):
            if gap > tol:
                return CheckResult.fail(rep, anchor=anchor, period=m, gap=float(gap))
        return CheckResult.ok(anchor=anchor, period=m)

    return CheckResult(CheckStatus.INCONCLUSIVE, None, {"period_cap": period_cap})


def birkhoff_average(system: DynSystem, f: Callable, u, n: int) -> float:
    """(f(u) + f(Tu) + ... + f(T^n u)) / (n + 1)"""
    record = iterate(system, u, n)
    values = np.fromiter((f(x) for x in record.states), dtype=float, count=n + 1)
    return float(values.mean())


def minimality_probe(
    estimate: OmegaEstimate, system: DynSystem, eps: float, steps: int = 2000
) -> CheckResult:
    """Every representative's finite orbit should be eps-dense in the estimate"""
    if eps <= estimate.tol:
        raise ArgumentError(f"eps ({eps}) must exceed the estimate tolerance ({estimate.tol})")

    reps = estimate.representatives
    for y in reps:
        orbit = iterate(system, y, max(steps - 1, 0)).states
        gaps = system.distances(reps, orbit).min(axis=1)
        uncovered = np.flatnonzero(gaps > eps)
        if uncovered.size:
            return CheckResult.fail((y, reps[uncovered[0]]), gap=float(gaps[uncovered[0]]))
    return CheckResult.ok(representatives=len(reps), steps=steps)


def connectivity_probe(
    estimate: OmegaEstimate, link_radius: float, system: DynSystem = None
) -> int:
    """Number of connected components of the link graph on the representatives"""
    if link_radius <= 0:
        raise ArgumentError(f"link radius must be positive, got {link_radius}")
    reps = estimate.representatives
    if not reps:
        return 0
    if system is not None:
        dist = system.distances(reps, reps)
    else:
        values = np.asarray(reps)
        dist = np.abs(values[:, None] - values[None, :])
    n_components, _ = connected_components(csr_matrix(dist <= link_radius), directed=False)
    return int(n_components)


def nonexpansive_probe(system: DynSystem, u, n: int = 200, tol: float = 1e-12) -> CheckResult:
    """Check d(Tx, Ty) <= d(x, y) on pairs of orbit points"""
    states = iterate(system, u, n).states
    before = system.distances(states[:-1], states[:-1])
    after = system.distances(states[1:], states[1:])
    bad = np.argwhere(after > before + tol)
    if bad.size:
        i, j = bad[0]
        return CheckResult.fail(
            (states[i], states[j]), expansion=float(after[i, j] - before[i, j])
        )
    return CheckResult.ok(pairs=len(states) - 1)


def displacement_profile(estimate: OmegaEstimate, system: DynSystem):
    """Range (min, max) of a(x) = d(x, Tx) over the representatives"""
    values = [system.distance(x, system(x)) for x in estimate.representatives]
    return min(values), max(values)
