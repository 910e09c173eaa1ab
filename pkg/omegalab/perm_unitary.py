# The unitary group T^t generated by a permutation of a finite set
#
# L2(Omega) splits into one invariant subspace per cycle. On a cycle
# b, Tb, ..., T^(M-1) b the functions f_k(T^l b) = e^(2 pi i k l / M),
# k = 0..M-1, are eigenvectors of Tf = f o T with eigenvalue e^(2 pi i k / M);
# T^t scales them by e^(2 pi i k t / M). The spectral measures nu_(f,g) are
# read off the same expansion.

import logging
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy as sp

from omegalab.errors import ArgumentError
from omegalab.models import TWO_PI, CheckResult, Permutation, SpectralMeasureAtoms

logger = logging.getLogger(__name__)

# atoms lighter than this are the cancellation of disjoint supports
ATOM_FLOOR = 1e-15


def decompose(table: Sequence[int]) -> Permutation:
    """Validate an image table and split it into cycles

    Args:
        table: image table, table[x] = T(x) for x = 0..n-1

    Returns:
        Permutation whose cycles start at their minimal element and are
        sorted by it

    Raises:
        ArgumentError: out-of-range entry, or a duplicated image (the witness
            is the image value together with two of its preimages)
    """
    image = tuple(int(y) for y in table)
    size = len(image)
    if size == 0:
        raise ArgumentError("permutation table is empty")

    preimage = {}
    for x, y in enumerate(image):
        if not 0 <= y < size:
            raise ArgumentError(f"image {y} of {x} is outside 0..{size - 1}")
        if y in preimage:
            raise ArgumentError(
                f"table is not a bijection: {preimage[y]} and {x} both map to {y}",
                witness=(y, preimage[y], x),
            )
        preimage[y] = x

    seen = [False] * size
    cycles = []
    for start in range(size):
        if seen[start]:
            continue
        cycle = []
        x = start
        while not seen[x]:
            seen[x] = True
            cycle.append(x)
            x = image[x]
        cycles.append(tuple(cycle))
    return Permutation(image, tuple(cycles))


def indicator(size, subset):
    """chi_B as a complex vector"""
    f = np.zeros(size, dtype=complex)
    f[list(subset)] = 1.0
    return f


def inner(f, g):
    """<f, g> = (1/|Omega|) sum f(x) conj(g(x))"""
    f = np.asarray(f)
    return complex(np.vdot(g, f)) / len(f)


def norm(f):
    return float(np.sqrt(inner(f, f).real))


def _point_power(perm: Permutation, n):
    """Index table of x -> T^n x (negative n through the inverse)"""
    step = np.asarray(perm.image if n >= 0 else perm.inverse())
    table = np.arange(perm.size)
    for _ in range(abs(n)):
        table = step[table]
    return table


def compose_power(perm: Permutation, f, n: int):
    """T^n f = f o T^n by direct composition"""
    return np.asarray(f, dtype=complex)[_point_power(perm, int(n))]


def _cycle_coefficients(f, cycle):
    """c_k with f(T^l b) = sum_k c_k e^(2 pi i k l / M)"""
    values = np.asarray(f, dtype=complex)[list(cycle)]
    return np.fft.fft(values) / len(cycle)


def power_t(perm: Permutation, f, t: float):
    """T^t f for real t through the eigenbasis of each cycle

    Integer t agrees with compose_power up to roundoff.
    """
    f = np.asarray(f, dtype=complex)
    if len(f) != perm.size:
        raise ArgumentError(f"vector has {len(f)} entries, permutation has {perm.size}")
    out = np.empty(perm.size, dtype=complex)
    for cycle in perm.cycles:
        m = len(cycle)
        coeffs = _cycle_coefficients(f, cycle)
        phases = np.exp(2j * np.pi * np.arange(m) * t / m)
        out[list(cycle)] = np.fft.ifft(coeffs * phases) * m
    return out


def spectral_measure(perm: Permutation, f, g) -> SpectralMeasureAtoms:
    """Atoms of nu_(f,g), where <T^t f, g> = sum weight * e^(-2 pi i t q)

    The k-th eigencomponent of an M-cycle contributes weight
    M c_k(f) conj(c_k(g)) / |Omega| at frequency q = -k/M. Atoms from
    different cycles sharing a frequency are merged; zero atoms dropped.
    Atoms list theta = 2 pi (q mod 1) for display; q itself is kept in
    frequencies and is what the transform uses at non-integer t.
    """
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    self_correlation = bool(np.array_equal(f, g))

    merged = {}
    for cycle in perm.cycles:
        m = len(cycle)
        cf = _cycle_coefficients(f, cycle)
        cg = cf if self_correlation else _cycle_coefficients(g, cycle)
        weights = m * cf * np.conj(cg) / perm.size
        for k, w in enumerate(weights):
            key = Fraction(-k, m)
            merged[key] = merged.get(key, 0j) + w

    atoms = []
    frequencies = []
    for key in sorted(merged, key=lambda q: q % 1):
        w = merged[key]
        if abs(w) <= ATOM_FLOOR:
            continue
        atoms.append((TWO_PI * float(key % 1), w.real if self_correlation else w))
        frequencies.append(key)
    return SpectralMeasureAtoms(atoms, self_correlation, frequencies)


def fourier_transform(measure: SpectralMeasureAtoms, t):
    """sum weight * e^(-2 pi i t q) over the atoms, q the unwrapped frequency"""
    terms = zip(measure.atoms, measure.frequencies)
    return sum((w * np.exp(-2j * np.pi * t * float(q)) for (_, w), q in terms), 0j)


def autocorrelation(perm: Permutation, subset, n: int):
    """|T^(-n) B  intersect  B| / |Omega| as an exact rational"""
    members = set(int(b) for b in subset)
    if any(not 0 <= b < perm.size for b in members):
        raise ArgumentError(f"subset is not contained in 0..{perm.size - 1}")
    table = _point_power(perm, int(n))
    hits = sum(1 for x in members if int(table[x]) in members)
    return sp.Rational(hits, perm.size)


def group_law_check(perm: Permutation, t, s, trials=10, tol=1e-12, seed=0) -> CheckResult:
    """T^(t+s) = T^t T^s, unitarity and sum |T^t chi_B|^2 = |B| on random data

    The witness of a failure is (law, trial).
    """
    rng = np.random.default_rng(seed)
    n = perm.size
    worst = 0.0
    for trial in range(trials):
        f = rng.normal(size=n) + 1j * rng.normal(size=n)

        gap = norm(power_t(perm, f, t + s) - power_t(perm, power_t(perm, f, s), t))
        if gap > tol:
            return CheckResult.fail(("group-law", trial), gap=gap)

        drift = abs(norm(power_t(perm, f, t)) - norm(f))
        if drift > tol:
            return CheckResult.fail(("unitarity", trial), gap=drift)

        subset = np.flatnonzero(rng.random(n) < 0.5)
        mass = float(np.sum(np.abs(power_t(perm, indicator(n, subset), t)) ** 2))
        if abs(mass - len(subset)) > tol * max(1, len(subset)):
            return CheckResult.fail(("indicator-mass", trial), gap=abs(mass - len(subset)))
        worst = max(worst, gap, drift)

    return CheckResult.ok(trials=trials, worst=worst)
