# Transfer operators on finite systems and the spectral potential
#
# A f(x) = sum over T(y) = x of e^c(y) f(y), weighted by A_a f = A(e^a f).
# lambda(a) = lim (1/n) ln ||A_a^n 1|| is computed by repeated squaring of
# A_a^N, N a multiple of the lcm of the cycle lengths of T past every tail.
# Around the potential sit the property checks, the functional
# Xi(mu) = inf_a [lambda(a) - mu(a)] (upper bounds and divergence
# certificates only), equilibrium measures as finite-difference subgradients
# and the identity
# lambda(a) = ln r(A) + mu(a) for uniquely ergodic systems.

import logging
import math
from typing import List, Sequence

import numpy as np

from config import Config
from omegalab.errors import ArgumentError, ConsistencyError, PreconditionError
from omegalab.models import (
    CheckResult,
    DynSystem,
    InvarianceWitness,
    MeasureVector,
    PotentialValue,
    StateSpace,
    TransferOp,
)

logger = logging.getLogger(__name__)

# exp(+/- 2 t) must stay inside the double range when t scales a coboundary
T_MAX_LIMIT = 300.0


def functional_cycles(image: Sequence[int]) -> List[tuple]:
    """Cycles of the functional graph x -> image[x], canonical order"""
    image = [int(y) for y in image]
    state = [0] * len(image)  # 0 new, 1 on the current path, 2 done
    cycles = []
    for start in range(len(image)):
        path = []
        x = start
        while state[x] == 0:
            state[x] = 1
            path.append(x)
            x = image[x]
        if state[x] == 1:
            cycle = path[path.index(x) :]
            low = cycle.index(min(cycle))
            cycles.append(tuple(cycle[low:] + cycle[:low]))
        for y in path:
            state[y] = 2
    return sorted(cycles)


def build(system, c=None) -> TransferOp:
    """Transfer operator of a finite system with base potential c

    Args:
        system: a finite-set DynSystem or an image table
        c: real value per state (zero when omitted)

    Returns:
        TransferOp with M[T(y), y] = e^c(y)
    """
    if isinstance(system, DynSystem):
        if system.space is not StateSpace.FINITE_SET:
            raise ArgumentError(
                f"transfer operators need a finite system, got {system.space.value}"
            )
        image = [system(x) for x in range(system.size)]
    else:
        image = list(system)

    size = len(image)
    if size == 0:
        raise ArgumentError("the state set is empty")
    image = np.asarray(image, dtype=int)
    if image.min() < 0 or image.max() >= size:
        raise ArgumentError(f"map table has an image outside 0..{size - 1}")

    c = np.zeros(size) if c is None else np.asarray(c, dtype=float)
    if c.shape != (size,):
        raise ArgumentError(f"potential has {c.size} values for {size} states")
    if not np.all(np.isfinite(c)):
        raise ArgumentError("potential values must be finite")
    return TransferOp(image, c)


def weight(op: TransferOp, a) -> TransferOp:
    """A_a = A(e^a .), i.e. base potential c + a"""
    a = np.asarray(a, dtype=float)
    if a.shape != (op.size,):
        raise ArgumentError(f"function has {a.size} values for {op.size} states")
    return TransferOp(op.image, op.c + a)


def _zero(op):
    return np.zeros(op.size)


def spectral_potential(op: TransferOp, a=None, tol=None, n_cap=None) -> PotentialValue:
    """lambda(a) = lim (1/n) ln ||A_a^n 1||_sup

    Starts from P_0 = A_a^N with N the first multiple of L = lcm of the cycle
    lengths that is >= |X|; from there A_a^n 1 lives on the cycles and
    A_a^(n+L) 1 = e^(S_L a) A_a^n 1 pointwise. Then P_(k+1) = P_k^2, every
    product rescaled to unit maximum with the logs accumulated, and the
    estimate at n = N 2^k is (ln ||P_(k+1) 1|| - ln ||P_k 1||) / n. Its error
    is at most ln(max v / min v) / n, v = A_a^N 1 on the cycle points; that
    bound is the residual, and the value is converged once it is <= tol.

    Args:
        op: transfer operator
        a: weighting function (zero when omitted)
        tol: convergence tolerance (> 0)
        n_cap: largest power n tried

    Returns:
        PotentialValue whose iterations field is the power n reached, not
        the number of matrix products; converged is False when n_cap was
        reached first
    """
    tol = Config.TRANSFER_TOL if tol is None else tol
    n_cap = Config.TRANSFER_N_CAP if n_cap is None else n_cap
    if tol <= 0:
        raise ArgumentError(f"tolerance must be positive, got {tol}")
    weighted = weight(op, _zero(op) if a is None else a)

    # lambda(a + s) = lambda(a) + s keeps every entry of the matrix <= 1
    shift = float(weighted.c.max())
    matrix = TransferOp(weighted.image, weighted.c - shift).matrix

    cycles = functional_cycles(op.image)
    window = math.lcm(*(len(cycle) for cycle in cycles))
    n = window * math.ceil(op.size / window)
    power = np.eye(op.size)
    log_scale = 0.0
    for _ in range(n):
        power = matrix @ power
        top = power.max()
        power /= top
        log_scale += math.log(top)

    on_cycles = power.sum(axis=1)[[x for cycle in cycles for x in cycle]]
    low = on_cycles.min()
    spread = math.log(on_cycles.max() / low) if low > 0 else math.inf

    log_norm = log_scale + math.log(power.sum(axis=1).max())
    estimate = log_norm / n
    residual = math.inf
    while residual > tol and 2 * n <= n_cap:
        power = power @ power
        top = power.max()
        power /= top
        log_scale = 2.0 * log_scale + math.log(top)
        previous = log_norm
        log_norm = log_scale + math.log(power.sum(axis=1).max())
        estimate = (log_norm - previous) / n
        residual = spread / n
        n *= 2

    converged = residual <= tol
    if not converged:
        logger.warning("spectral potential not converged at n = %d (residual %.3g)", n, residual)
    return PotentialValue(estimate + shift, n, residual, converged)


def potential(op, a=None, tol=None):
    """Shorthand for spectral_potential(...).value"""
    return spectral_potential(op, a, tol).value


def log_spectral_radius(op: TransferOp):
    """ln r(A) from the eigenvalues of the dense matrix"""
    return float(np.log(np.abs(np.linalg.eigvals(op.matrix)).max()))


def module_identity_check(op: TransferOp, f, g, tol=1e-12) -> CheckResult:
    """A(g (f o T)) = f A(g), compared through the dense matrix"""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    matrix = op.matrix
    lhs = matrix @ (g * f[op.image])
    rhs = f * (matrix @ g)
    gap = float(np.abs(lhs - rhs).max())
    if gap > tol * max(1.0, float(np.abs(rhs).max())):
        return CheckResult.fail(int(np.abs(lhs - rhs).argmax()), gap=gap)
    return CheckResult.ok(gap=gap)


def property_suite(op: TransferOp, trials=10, tol=1e-6, seed=0):
    """Check the structural properties of lambda on random a, b, t

    monotone: a <= b gives lambda(a) <= lambda(b)
    translation: lambda(a + t0) = lambda(a) + t0
    coboundary: lambda(a + b o T) = lambda(a + b)
    convexity: lambda(t a + (1 - t) b) <= t lambda(a) + (1 - t) lambda(b)
    lipschitz: |lambda(a) - lambda(b)| <= max |a - b|
    real-valued: lambda(a) is finite
    log-spectral-radius: lambda(0) = ln r(A)

    Returns:
        dict name -> CheckResult; a failure's witness is (trial, values)
    """
    if trials < 1:
        raise ArgumentError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    results = {}

    def lam(x):
        return potential(op, x)

    def record(name, trial, ok, **values):
        if not ok and name not in results:
            logger.info("property %s violated at trial %d", name, trial)
            results[name] = CheckResult.fail((trial, values))

    for trial in range(trials):
        a = rng.normal(size=op.size)
        b = rng.normal(size=op.size)
        t = float(rng.random())
        t0 = float(rng.normal())
        la, lb = lam(a), lam(b)

        upper = lam(a + np.abs(rng.normal(size=op.size)))
        record("monotone", trial, la <= upper + tol, low=la, high=upper)

        shifted = lam(a + t0)
        record("translation", trial, abs(shifted - la - t0) <= tol, lhs=shifted, rhs=la + t0)

        cob, plain = lam(a + b[op.image]), lam(a + b)
        record("coboundary", trial, abs(cob - plain) <= tol, lhs=cob, rhs=plain)

        mix = lam(t * a + (1 - t) * b)
        record("convexity", trial, mix <= t * la + (1 - t) * lb + tol, lhs=mix, t=t)

        spread = float(np.abs(a - b).max())
        record("lipschitz", trial, abs(la - lb) <= spread + tol, gap=abs(la - lb), norm=spread)

        record("real-valued", trial, math.isfinite(la) and math.isfinite(lb), a=la, b=lb)

    lam0, radius = lam(_zero(op)), log_spectral_radius(op)
    record("log-spectral-radius", 0, abs(lam0 - radius) <= tol, potential=lam0, radius=radius)

    names = ["monotone", "translation", "coboundary", "convexity", "lipschitz", "real-valued",
             "log-spectral-radius"]
    return {name: results.get(name, CheckResult.ok(trials=trials)) for name in names}


def birkhoff_sum(image, a, n):
    """S_n a = a + a o T + ... + a o T^(n-1)"""
    a = np.asarray(a, dtype=float)
    index = np.arange(len(a))
    total = np.zeros(len(a))
    for _ in range(n):
        total += a[index]
        index = np.asarray(image)[index]
    return total


def birkhoff_identity_check(op: TransferOp, a, f, n) -> CheckResult:
    """A_a^n f = A^n(e^(S_n a) f) on dense vectors (n <= 20)"""
    if not 1 <= n <= 20:
        raise ArgumentError(f"n must lie in 1..20, got {n}")
    a = np.asarray(a, dtype=float)
    weighted = weight(op, a)
    lhs = np.asarray(f, dtype=float)
    rhs = np.exp(birkhoff_sum(op.image, a, n)) * lhs
    for _ in range(n):
        lhs = weighted.apply(lhs)
        rhs = op.apply(rhs)

    scale = max(1.0, float(np.abs(lhs).max()))
    gap = float(np.abs(lhs - rhs).max())
    if gap > 1e-10 * scale:
        return CheckResult.fail(int(np.abs(lhs - rhs).argmax()), gap=gap, scale=scale)
    return CheckResult.ok(gap=gap, scale=scale)


def xi_upper(op: TransferOp, mu: MeasureVector, test_set) -> float:
    """min over the test functions of lambda(a) - mu(a), an upper bound on Xi(mu)"""
    test_set = list(test_set)
    if not test_set:
        raise ArgumentError("the test set is empty")
    return min(potential(op, a) - mu(a) for a in test_set)


def coordinate_gaps(op: TransferOp, mu: MeasureVector):
    """mu(delta_x) - mu(delta_x o T) for every state x"""
    pushed = np.zeros(op.size)
    np.add.at(pushed, op.image, mu.weights)
    return mu.weights - pushed


def invariance_witness(op: TransferOp, mu: MeasureVector, t_max=100.0, tol=1e-9):
    """Certify Xi(mu) = -infinity for a measure outside M(T)

    The checks follow the order: unit mass, nonnegativity, invariance. Each
    failing one yields a direction d with lambda(t d) - mu(t d) decreasing
    linearly in t; the value at t = t_max is reported as the bound. When
    all coordinate gaps stay within tol, mu is invariant-within-tol.
    """
    if not 0 < t_max <= T_MAX_LIMIT:
        raise ArgumentError(f"t_max must lie in (0, {T_MAX_LIMIT:g}], got {t_max}")
    weights = np.asarray(mu.weights, dtype=float)
    if weights.shape != (op.size,):
        raise ArgumentError(f"measure has {weights.size} weights for {op.size} states")
    lambda_zero = potential(op)

    def witness(kind, a, direction, gap):
        test = t_max * direction
        bound = potential(op, test) - mu(test)
        return InvarianceWitness(False, kind, a, direction, t_max, gap, bound, lambda_zero)

    defect = weights.sum() - 1.0
    if abs(defect) > tol:
        ones = np.full(op.size, math.copysign(1.0, defect))
        return witness("mass-defect", ones, ones, abs(defect))

    lightest = int(weights.argmin())
    if weights[lightest] < -tol:
        direction = -np.eye(op.size)[lightest]
        return witness("negative-weight", direction, direction, -float(weights[lightest]))

    gaps = coordinate_gaps(op, mu)
    x = int(np.abs(gaps).argmax())
    if abs(gaps[x]) > tol:
        a = math.copysign(1.0, gaps[x]) * np.eye(op.size)[x]
        return witness("not-invariant", a, a - a[op.image], abs(float(gaps[x])))

    return InvarianceWitness(True, gap=float(np.abs(gaps).max()), lambda_zero=lambda_zero)


def equilibrium_subgradient(op: TransferOp, a=None, h=None) -> MeasureVector:
    """Equilibrium measure at a as a central-difference subgradient of lambda

    mu_x = [lambda(a + h delta_x) - lambda(a - h delta_x)] / (2h), clipped at
    zero and renormalized. Negative entries beyond 10 h are logged: lambda
    is probably not differentiable at a.

    Raises:
        ConsistencyError: the result is not T-invariant within 10 h
    """
    h = Config.SUBGRADIENT_STEP if h is None else h
    if h <= 0:
        raise ArgumentError(f"step must be positive, got {h}")
    a = _zero(op) if a is None else np.asarray(a, dtype=float)

    grad = np.empty(op.size)
    for x in range(op.size):
        bump = h * np.eye(op.size)[x]
        grad[x] = (potential(op, a + bump) - potential(op, a - bump)) / (2.0 * h)

    if grad.min() < -10.0 * h:
        logger.warning(
            "subgradient entry %.3g clipped; lambda may not be differentiable here", grad.min()
        )
    grad = np.clip(grad, 0.0, None)
    if grad.sum() <= 0:
        raise ConsistencyError("finite-difference subgradient vanished")
    mu = MeasureVector(grad / grad.sum())

    drift = float(np.abs(coordinate_gaps(op, mu)).max())
    if drift > 10.0 * h:
        raise ConsistencyError(f"subgradient is not invariant (gap {drift:.3g})")
    return mu


def invariant_measure(op: TransferOp) -> MeasureVector:
    """Uniform measure on the unique cycle of T

    Raises:
        PreconditionError: T has several cycles (witness: the first two)
    """
    cycles = functional_cycles(op.image)
    if len(cycles) > 1:
        raise PreconditionError(
            f"system is not uniquely ergodic: cycles {list(cycles[0])} and {list(cycles[1])}",
            witness=(cycles[0], cycles[1]),
        )
    weights = np.zeros(op.size)
    weights[list(cycles[0])] = 1.0 / len(cycles[0])
    return MeasureVector(weights)


def theorem4_check(op: TransferOp, trials=20, tol=1e-6, seed=0) -> CheckResult:
    """lambda(a) = ln r(A) + mu(a) for the invariant measure of a uniquely ergodic T"""
    mu = invariant_measure(op)
    radius = log_spectral_radius(op)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for trial in range(trials):
        a = rng.normal(size=op.size)
        gap = abs(potential(op, a) - radius - mu(a))
        if gap > tol:
            return CheckResult.fail(trial, gap=gap, a=a.tolist())
        worst = max(worst, gap)
    return CheckResult.ok(trials=trials, worst=worst, measure=mu.weights.tolist())
