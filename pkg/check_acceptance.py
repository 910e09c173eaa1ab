#!/usr/bin/env python3
"""
Acceptance checker for the omegalab toolkit
"""

import math
import time

import numpy as np
import sympy as sp

from config import Config
from omegalab import julia_moments as moments
from omegalab import julia_sampler as sampler
from omegalab import orbit_core
from omegalab import perm_unitary as perms
from omegalab import quad_family as quad
from omegalab import transfer_spectral as transfer
from omegalab.errors import ConsistencyError
from omegalab.models import CertificateVerdict


def check_moment_oracle():
    """lambda_2(k) = (2k - 1)!! / (2k)!! for k <= 50"""
    bad = [k for k in range(51) if moments.moment_at(2, k) != moments.arcsine_moment(k)]
    return not bad, f"mismatch at k = {bad[0]}" if bad else "51 exact matches"


def check_phi_table():
    expected = [[1], [-1], [1, 1], [-1, -3], [1, 6, 1, 1], [-1, -10, -5, -5]]
    got = [phi.coeffs for phi in moments.phi_table(5)]
    got = [[int(c) for c in coeffs] for coeffs in got]
    return got == expected, f"phi_0..phi_5 = {got}"


def check_phi_identity():
    result = moments.phi_identity_check(40)
    return result.passed, "exact for n <= 40" if result.passed else f"fails at n = {result.witness}"


def check_stieltjes():
    gaps = [
        abs(moments.stieltjes(2, z).value - moments.stieltjes_arcsine(z)) for z in (1.5, 2, 3, 10)
    ]
    return max(gaps) <= 1e-10, f"max gap {max(gaps):.2e}"


def check_fourier():
    worst = 0.0
    for alpha in (1, 1.5, 2):
        for z in (0.5, 1, 2):
            worst = max(worst, moments.fourier(alpha, z, 30)[2])
    series_a, series_b, _ = moments.fourier(2, 1.0, 30)
    oracle = moments.arcsine_fourier(1.0)
    quad_gap = max(abs(series_a.value - oracle), abs(series_b.value - oracle))
    message = f"series gap {worst:.2e}, quadrature gap {quad_gap:.2e}"
    return worst <= 1e-8 and quad_gap <= 1e-6, message


def check_sampler():
    cloud = sampler.sample(2, 100000, seed=1)
    distance = sampler.arcsine_distance(cloud)
    empirical = sampler.empirical_moments(cloud, 5)
    odd = float(np.abs(empirical[1::2]).max())
    return distance <= 0.01 and odd <= 0.02, f"KS {distance:.4f}, odd moments {odd:.4f}"


def check_certificate():
    grid = np.linspace(1.001, 1.999, 1000)
    refuted = all(
        sampler.realness_certificate(a, 10000).verdict is CertificateVerdict.REFUTED for a in grid
    )
    at_19 = sampler.realness_certificate(1.9).failure_index
    at_2 = sampler.realness_certificate(2).verdict
    ok = refuted and at_19 == 2 and at_2 is CertificateVerdict.FIXED_CHAIN
    return ok, f"grid refuted: {refuted}, index at 1.9: {at_19}, alpha = 2: {at_2.value}"


def check_regimes():
    for alpha in (0.1, 0.3, 0.5, 0.7, 0.74):
        cycle = quad.simulate_limit(alpha, 0.3)
        if cycle is None or abs(cycle.points[-1] - quad.fixed_point(alpha)) > 1e-6:
            return False, f"alpha = {alpha} misses the fixed point"
    for alpha in (0.8, 1.0, 1.2):
        cycle = quad.simulate_limit(alpha, 0.3)
        x1, x2 = quad.two_cycle(alpha)
        if cycle is None or cycle.period != 2:
            return False, f"alpha = {alpha} does not settle on a two-cycle"
        if min(abs(cycle.points[0] - x1), abs(cycle.points[0] - x2)) > 1e-6:
            return False, f"alpha = {alpha} misses the two-cycle"
    boundary = (
        quad.fixed_multiplier(sp.Rational(3, 4)) == 1
        and quad.cycle_multiplier(sp.Rational(5, 4)) == 1
    )
    return boundary, "classifier and simulation agree"


def check_periodic_harness():
    fixtures = [
        (orbit_core.quadratic_map(0.5), 0.3),
        (orbit_core.quadratic_map(1.0), 0.3),
        (orbit_core.squaring_map(), 1j),
    ]
    for system, u in fixtures:
        estimate = orbit_core.omega_estimate(system, u, tol=1e-6)
        if not orbit_core.theorem1_check(estimate, system).passed:
            return False, f"{system.name} failed"
    return True, "finite omega-limit fixtures pass"


def _permutation_fixtures(rng):
    """Random permutations of sizes 1..12 plus the identity, a single cycle and mixed cycles"""
    fixtures = [perms.decompose(rng.permutation(size)) for size in range(1, 13)]
    fixtures.append(perms.decompose(range(7)))
    fixtures.append(perms.decompose([(x + 1) % 12 for x in range(12)]))
    fixtures.append(perms.decompose([1, 0, 3, 4, 2, 6, 7, 8, 5, 9]))
    return fixtures


def check_permutations():
    rng = np.random.default_rng(0)
    for perm in _permutation_fixtures(rng):
        size = perm.size
        f = rng.normal(size=size) + 1j * rng.normal(size=size)
        g = rng.normal(size=size) + 1j * rng.normal(size=size)
        for n in range(-6, 7):
            if np.abs(perms.power_t(perm, f, n) - perms.compose_power(perm, f, n)).max() > 1e-12:
                return False, f"integer power {n} on size {size}"
        if not perms.group_law_check(perm, 0.3, 0.7).passed:
            return False, f"group law on size {size}"

        for cycle in perm.cycles:
            chi = perms.indicator(size, cycle)
            for t in rng.uniform(-10, 10, size=20):
                if np.abs(perms.power_t(perm, chi, t) - chi).max() > 1e-12:
                    return False, f"cycle {cycle} moved at t = {t:.3f}"

        measure = perms.spectral_measure(perm, f, g)
        for t in (0.1, 0.5, math.sqrt(2)):
            direct = perms.inner(perms.power_t(perm, f, t), g)
            if abs(perms.fourier_transform(measure, t) - direct) > 1e-12:
                return False, f"Fourier atoms at t = {t:.3f} on size {size}"

        subset = np.flatnonzero(rng.random(size) < 0.5)
        chi = perms.indicator(size, subset)
        comb = perms.spectral_measure(perm, chi, chi)
        for n in range(-size, size + 1):
            exact = float(perms.autocorrelation(perm, subset, n))
            if abs(perms.fourier_transform(comb, n) - exact) > 1e-12:
                return False, f"autocorrelation at n = {n} on size {size}"
    return True, "sizes 1..12, identity, single and mixed cycles"


def check_transfer():
    rng = np.random.default_rng(0)
    for trial in range(100):
        size = int(rng.integers(1, 13))
        op = transfer.build(rng.integers(0, size, size=size), rng.normal(size=size))
        report = transfer.property_suite(op, trials=2, seed=trial)
        failed = [name for name, check in report.items() if not check.passed]
        if failed:
            return False, f"operator {trial}: {', '.join(failed)}"
        a, f = rng.normal(size=size), rng.normal(size=size)
        for n in (1, 5, 20):
            if not transfer.birkhoff_identity_check(op, a, f, n).passed:
                return False, f"operator {trial}: Birkhoff identity at n = {n}"
    return True, "100 random operators clean"


def check_uniquely_ergodic():
    rng = np.random.default_rng(1)
    fixtures = [[1, 2, 3, 4, 0], [0, 2, 0, 2], [1, 2, 0, 0, 1, 3], [0]]
    for image in fixtures:
        op = transfer.build(image, rng.normal(size=len(image)))
        result = transfer.theorem4_check(op)
        if not result.passed:
            return False, f"map {image}: gap {result.detail['gap']:.2e}"
    return True, f"{len(fixtures)} single-cycle fixtures"


def check_equilibrium():
    rng = np.random.default_rng(2)
    h = Config.SUBGRADIENT_STEP
    for trial in range(20):
        size = int(rng.integers(1, 9))
        op = transfer.build(rng.integers(0, size, size=size), rng.normal(size=size))
        try:
            mu = transfer.equilibrium_subgradient(op, rng.normal(size=size))
        except ConsistencyError as exc:
            return False, f"operator {trial}: {exc}"
        drift = float(np.abs(transfer.coordinate_gaps(op, mu)).max())
        if drift > 10 * h or mu.weights.min() < 0 or abs(mu.weights.sum() - 1) > 1e-9:
            return False, f"operator {trial}: not an invariant probability (gap {drift:.2e})"
    return True, "20 subgradients invariant"


def check_rotation():
    system = orbit_core.rotation()
    n = 10**6
    averages = [orbit_core.birkhoff_average(system, math.cos, u, n) for u in (0.0, 1.0)]
    estimate = orbit_core.omega_estimate(system, 0.0, tol=0.01)
    minimal = orbit_core.minimality_probe(estimate, system, eps=0.05).passed
    components = orbit_core.connectivity_probe(estimate, 0.05, system)
    ok = abs(averages[0] - averages[1]) <= 10 / n and minimal and components == 1
    return ok, f"averages {averages[0]:.2e} / {averages[1]:.2e}, components {components}"


CHECKS = [
    ("Chebyshev moment oracle", check_moment_oracle),
    ("phi table", check_phi_table),
    ("phi identity", check_phi_identity),
    ("Stieltjes oracle", check_stieltjes),
    ("Fourier double series", check_fourier),
    ("Sampler vs arcsine", check_sampler),
    ("Realness certificate", check_certificate),
    ("Regime agreement", check_regimes),
    ("Periodic-point harness", check_periodic_harness),
    ("Permutation suite", check_permutations),
    ("Transfer operator suite", check_transfer),
    ("Uniquely ergodic identity", check_uniquely_ergodic),
    ("Equilibrium subgradients", check_equilibrium),
    ("Ergodic probes", check_rotation),
]


def run_checks():
    """Run every acceptance check and print the report"""
    print("🔍 ACCEPTANCE REPORT")
    print("=" * 50)

    failures = 0
    for name, check in CHECKS:
        start = time.perf_counter()
        ok, message = check()
        elapsed = time.perf_counter() - start
        if ok:
            print(f"✅ {name}: {message} ({elapsed:.1f} s)")
        else:
            print(f"❌ {name}: {message} ({elapsed:.1f} s)")
            failures += 1

    print("\n📊 SUMMARY")
    print("=" * 20)
    if failures == 0:
        print("🎉 ALL ACCEPTANCE CHECKS PASSED!")
    else:
        print(f"⚠️  {failures} acceptance checks failed")
    return failures == 0


if __name__ == "__main__":
    raise SystemExit(0 if run_checks() else 1)
