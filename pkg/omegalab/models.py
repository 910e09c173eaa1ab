# Domain types shared by the omegalab modules
# Plain dataclasses: systems, orbit records, omega-limit estimates, check
# results, exact polynomials, sample clouds, permutations and transfer operators

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

import numpy as np
import sympy as sp

from config import Config

TWO_PI = 2.0 * math.pi


# ---------------------------
# orbit-core
# ---------------------------


class StateSpace(Enum):
    REAL_INTERVAL = "real-interval"
    COMPLEX_PLANE = "complex-plane"
    UNIT_CIRCLE = "unit-circle"
    FINITE_SET = "finite-set"


@dataclass(frozen=True)
class DynSystem:
    """A continuous self-map T of a metric space (X, d)

    Circle states are angles in [0, 2*pi) with the wrap-around metric;
    finite-set states are integers 0..size-1 with the discrete metric.
    """

    name: str
    space: StateSpace
    map_fn: Callable  # state -> state
    size: int = 0  # number of states, finite sets only
    escape_radius: float = Config.ESCAPE_RADIUS

    def __call__(self, x):
        return self.map_fn(x)

    def contains(self, x):
        """True when x lies in the declared state space"""
        if self.space is StateSpace.FINITE_SET:
            return 0 <= int(x) < self.size
        if self.space is StateSpace.UNIT_CIRCLE:
            return math.isfinite(x)
        if self.space is StateSpace.REAL_INTERVAL and isinstance(x, complex):
            return False
        return math.isfinite(abs(x)) and abs(x) <= self.escape_radius

    def distance(self, x, y):
        """Metric d(x, y) of the state space"""
        return float(self.distances([x], [y])[0, 0])

    def distances(self, xs: Sequence, ys: Sequence) -> np.ndarray:
        """Pairwise metric matrix D[i, j] = d(xs[i], ys[j])"""
        a = np.asarray(xs)[:, None]
        b = np.asarray(ys)[None, :]
        if self.space is StateSpace.FINITE_SET:
            return (a != b).astype(float)
        gap = np.abs(a - b)
        if self.space is StateSpace.UNIT_CIRCLE:
            gap = np.mod(gap, TWO_PI)
            return np.minimum(gap, TWO_PI - gap)
        return gap


@dataclass
class OrbitRecord:
    """Finite piece of the orbit O(u) = {u, Tu, T^2 u, ...}"""

    initial: object
    states: List  # states[n] = T^n u

    @property
    def count(self):
        """Number of iterations N (the record holds N + 1 states)"""
        return len(self.states) - 1


@dataclass
class OmegaEstimate:
    """Clustered point cloud approximating the omega-limit set of an orbit"""

    representatives: List  # cluster leaders, pairwise farther apart than tol
    tol: float
    burn_in: int
    tail: int
    system_name: str

    def __len__(self):
        return len(self.representatives)


@dataclass
class CycleReport:
    period: int
    points: List  # [x, Tx, ..., T^(period-1) x]
    residual: float  # max d(T^period x, x) over the reported points
    tol: float


class CheckStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass
class CheckResult:
    """Outcome of a pass/fail harness; failures carry a witness"""

    status: CheckStatus
    witness: object = None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status is CheckStatus.PASS

    @classmethod
    def ok(cls, **detail):
        return cls(CheckStatus.PASS, None, detail)

    @classmethod
    def fail(cls, witness, **detail):
        return cls(CheckStatus.FAIL, witness, detail)


# ---------------------------
# quad-family
# ---------------------------


class Regime(Enum):
    FIXED_POINT_ATTRACTING = "fixed-point-attracting"
    TWO_CYCLE_ATTRACTING = "two-cycle-attracting"
    BEYOND_FIVE_QUARTERS = "beyond-5/4"


@dataclass
class RegimeReport:
    alpha: object
    regime: Regime
    x_star: object
    fixed_multiplier: object
    two_cycle: Optional[tuple] = None  # (x_1, x_2) when alpha > 3/4
    cycle_multiplier: Optional[object] = None


@dataclass
class BCStatistic:
    """Derivative growth of T_a^n at 1, accumulated in log space

    log_derivative[m - 1] = sum_{j < m} ln|2 a x_j| with x_j = T_a^j(1);
    flags[m - 1] records log_derivative[m - 1] >= m^(2/3).
    """

    alpha: float
    n: int
    log_derivative: List[float]
    thresholds: List[float]
    flags: List[bool]
    degenerate_index: Optional[int] = None  # first m whose product vanished

    @property
    def degenerate(self):
        return self.degenerate_index is not None


class ProbeVerdict(Enum):
    ATTRACTING_CYCLE_FOUND = "attracting-cycle-found"
    NO_CYCLE_DETECTED = "no-cycle-detected"
    EVENTUALLY_PERIODIC = "degenerate-eventually-periodic"


@dataclass
class DeltaInfProbe:
    """Heuristic outcome; never a proof of membership in Delta_infinity"""

    alpha: float
    horizon: int
    verdict: ProbeVerdict
    period: Optional[int] = None
    multiplier: Optional[float] = None
    heuristic: bool = True


# ---------------------------
# julia-moments
# ---------------------------


@dataclass(frozen=True)
class RationalPoly:
    """Exact univariate polynomial with rational coefficients

    Wraps a sympy Poly over QQ. `symbol` is "beta" (= 1/alpha) for the
    moment polynomials and "alpha" for the phi polynomials.
    """

    poly: sp.Poly

    @classmethod
    def from_coeffs(cls, coeffs, symbol="beta"):
        """Build from ascending coefficients c_0, c_1, ..."""
        var = sp.Symbol(symbol)
        terms = {(power,): sp.Rational(c) for power, c in enumerate(coeffs) if c != 0}
        return cls(sp.Poly.from_dict(terms or {(0,): 0}, var, domain=sp.QQ))

    @property
    def symbol(self):
        return str(self.poly.gen)

    @property
    def coeffs(self):
        """Ascending coefficient list with trailing zeros trimmed"""
        return list(reversed(self.poly.all_coeffs())) if not self.poly.is_zero else []

    @property
    def degree(self):
        return self.poly.degree() if not self.poly.is_zero else -1

    def min_power(self):
        """Lowest exponent with a nonzero coefficient"""
        for power, c in enumerate(self.coeffs):
            if c != 0:
                return power
        return None

    def shift(self, k):
        """Multiply by symbol^k; negative k divides exactly or raises"""
        var = self.poly.gen
        if k >= 0:
            return RationalPoly(self.poly * sp.Poly(var**k, var, domain=sp.QQ))
        return RationalPoly(self.poly.exquo(sp.Poly(var ** (-k), var, domain=sp.QQ)))

    def rename(self, symbol):
        """Same coefficients, new indeterminate"""
        return RationalPoly.from_coeffs(self.coeffs, symbol)

    def __add__(self, other):
        return RationalPoly(self.poly + other.poly)

    def __sub__(self, other):
        return RationalPoly(self.poly - other.poly)

    def scale(self, c):
        return RationalPoly(self.poly * sp.Rational(c))

    def __call__(self, value):
        """Exact evaluation at a rational point"""
        return self.poly.eval(sp.Rational(value))

    def evalf(self, value):
        """Floating-point evaluation (real or complex) by Horner's rule"""
        total = 0.0
        for c in reversed(self.coeffs):
            total = total * value + float(c)
        return total

    def __str__(self):
        return str(self.poly.as_expr())


@dataclass
class MomentTable:
    """Moment polynomials lambda_a(0..k_max) in beta = 1/alpha"""

    k_max: int
    polys: List[RationalPoly]
    nonnegative_integer: bool = True  # observed pattern, reported not enforced

    def __getitem__(self, k):
        return self.polys[k]

    def __len__(self):
        return len(self.polys)


@dataclass
class SeriesValue:
    value: complex
    terms: int
    last_term: float
    converged: bool
    note: str = "last-term magnitude is a heuristic error proxy"


# ---------------------------
# julia-sampler
# ---------------------------


@dataclass(frozen=True)
class SampleCloud:
    """Inverse-iteration chain approximating the balanced measure"""

    points: np.ndarray  # complex, chronological order
    alpha: float
    seed: int
    burn_in: int
    count: int
    generator: str = Config.SAMPLER_GENERATOR

    def metadata(self):
        return {
            "alpha": self.alpha,
            "seed": self.seed,
            "burn_in": self.burn_in,
            "count": self.count,
            "generator": self.generator,
        }


class CertificateVerdict(Enum):
    REFUTED = "refuted"
    INCONCLUSIVE_AT_CAP = "inconclusive-at-cap"
    FIXED_CHAIN = "fixed-chain"


@dataclass
class RealnessCertificate:
    """Chain b_0 = a - 1, b_(n+1) = a b_n^2 - 1 refuting J(T_a) inside R"""

    alpha: object
    chain: List
    failure_index: Optional[int]
    verdict: CertificateVerdict
    exact: bool = False
    annotations: dict = field(default_factory=dict)


# ---------------------------
# perm-unitary
# ---------------------------


@dataclass(frozen=True)
class Permutation:
    """Bijection of {0, ..., size-1} with its canonical cycle decomposition"""

    image: tuple
    cycles: tuple  # each cycle starts at its minimal element

    @property
    def size(self):
        return len(self.image)

    def inverse(self):
        inv = [0] * self.size
        for x, y in enumerate(self.image):
            inv[y] = x
        return tuple(inv)


@dataclass
class SpectralMeasureAtoms:
    """Finite atomic measure nu_{f,g}: (angle, complex weight) pairs"""

    atoms: List[tuple]  # (theta in [0, 2*pi), weight)
    self_correlation: bool = False
    # unwrapped frequency -k/M of each atom, in (-1, 0]; theta = 2 pi (q mod 1)
    frequencies: List[Fraction] = field(default_factory=list)

    @property
    def total_weight(self):
        return sum((w for _, w in self.atoms), 0j)


# ---------------------------
# transfer-spectral
# ---------------------------


@dataclass(frozen=True)
class TransferOp:
    """Transfer operator Af(x) = sum over T(y) = x of e^c(y) f(y)"""

    image: np.ndarray  # T as an integer table
    c: np.ndarray  # base potential

    @property
    def size(self):
        return len(self.image)

    @property
    def matrix(self):
        """Dense form M[x, y] = e^c(y) [T(y) = x]"""
        m = np.zeros((self.size, self.size))
        m[self.image, np.arange(self.size)] = np.exp(self.c)
        return m

    def apply(self, f):
        """A f without building the matrix"""
        out = np.zeros(self.size, dtype=np.result_type(f, float))
        np.add.at(out, self.image, np.exp(self.c) * f)
        return out


@dataclass
class PotentialValue:
    value: float
    iterations: int
    residual: float
    converged: bool


@dataclass
class MeasureVector:
    weights: np.ndarray  # nonnegative, unit mass

    def __call__(self, a):
        """Integral mu(a) of a function given as a vector"""
        return float(np.dot(self.weights, a))

    def is_probability(self, tol=1e-9):
        return bool(np.all(self.weights >= -tol) and abs(self.weights.sum() - 1) <= tol)


@dataclass
class InvarianceWitness:
    """Certificate that Xi(mu) = -infinity, or the verdict invariant-within-tol

    kind is "mass-defect", "negative-weight" or "not-invariant"; the test
    function evaluated is t * direction and bound = lambda(t d) - mu(t d).
    """

    invariant: bool
    kind: Optional[str] = None
    a: Optional[np.ndarray] = None
    direction: Optional[np.ndarray] = None
    t: Optional[float] = None
    gap: float = 0.0
    bound: Optional[float] = None
    lambda_zero: Optional[float] = None


# ---------------------------
# cli
# ---------------------------


@dataclass
class RunConfig:
    """Validated command line: subcommand, typed parameters, output target"""

    command: str
    params: dict
    seed: Optional[int]
    output_format: str = "json"
    output_path: Optional[str] = None
    argv: List[str] = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
