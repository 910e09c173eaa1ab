# Controller functions for the omegalab command line, keeping routes.py thin
# Each run_* function takes a validated RunConfig, calls the module operations
# and returns (result dict, optional table); dispatch wraps the result into an
# artifact, writes it and maps toolkit errors to exit codes

import logging
import math
import sys
from dataclasses import asdict, is_dataclass
from enum import Enum
from fractions import Fraction

import numpy as np
import pandas as pd
import sympy as sp

from omegalab import __version__
from omegalab import data_loader
from omegalab import julia_moments as moments
from omegalab import julia_sampler as sampler
from omegalab import orbit_core
from omegalab import perm_unitary as perms
from omegalab import quad_family as quad
from omegalab import transfer_spectral as transfer
from omegalab.errors import ArgumentError, NonConvergenceError, OmegalabError
from omegalab.models import MeasureVector, RunConfig, StateSpace

logger = logging.getLogger(__name__)

TOOL = "omegalab"
METADATA_KEYS = ("tool", "version", "command", "seed", "tolerances")


def to_jsonable(value):
    """Convert results to JSON-safe values; exact rationals become "p/q" strings"""
    if isinstance(value, Enum):
        return value.value
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (sp.Rational, Fraction)):
        return str(value)
    if isinstance(value, sp.Basic):
        return {"exact": str(value), "float": float(value)}
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        if value.imag == 0:
            return to_jsonable(value.real)
        return {"re": to_jsonable(value.real), "im": to_jsonable(value.imag)}
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    return value


def _check(result):
    """CheckResult as a plain dict"""
    return {"status": result.status.value, "witness": result.witness, "detail": result.detail}


# ---------------------------
# orbit-core
# ---------------------------


def _system(params):
    name = params["system"]
    if name == "squaring":
        return orbit_core.squaring_map()
    if name == "rotation":
        return orbit_core.rotation(params.get("gamma") or orbit_core.GOLDEN_MEAN)
    if name == "quadratic":
        return orbit_core.quadratic_map(params["alpha"])
    if name == "finite":
        if not params.get("map_file"):
            raise ArgumentError("--map-file is required for the finite system")
        image, _ = data_loader.load_finite_system(params["map_file"])
        return orbit_core.finite_map(image)
    raise ArgumentError(f"unknown system '{name}'")


def _initial_state(system, raw):
    """Parse --u for the given state space"""
    try:
        if system.space is StateSpace.COMPLEX_PLANE:
            return complex(raw.replace(" ", ""))
        if system.space is StateSpace.FINITE_SET:
            return int(raw)
        return float(raw)
    except ValueError as exc:
        raise ArgumentError(f"cannot read initial state '{raw}' for {system.space.value}") from exc


def _state_frame(states):
    values = np.asarray(states)
    frame = pd.DataFrame({"n": np.arange(len(values))})
    if np.iscomplexobj(values):
        frame["re"], frame["im"] = values.real, values.imag
    else:
        frame["state"] = values
    return frame


def run_orbit(cfg: RunConfig):
    p = cfg.params
    system = _system(p)
    record = orbit_core.iterate(system, _initial_state(system, p["u"]), p["n"])
    cycle = orbit_core.detect_cycle(record, p.get("tol"), system)
    result = {
        "system": system.name,
        "initial": record.initial,
        "count": record.count,
        "final": record.states[-1],
        "cycle": None if cycle is None else {"period": cycle.period, "points": cycle.points,
                                             "residual": cycle.residual},
    }
    return result, _state_frame(record.states)


def run_omega(cfg: RunConfig):
    p = cfg.params
    system = _system(p)
    estimate = orbit_core.omega_estimate(
        system, _initial_state(system, p["u"]), p["burn_in"], p["tail"], p.get("tol")
    )
    result = {
        "system": system.name,
        "representatives": estimate.representatives,
        "size": len(estimate),
        "burn_in": estimate.burn_in,
        "tail": estimate.tail,
    }
    return result, _state_frame(estimate.representatives)


def run_omega_check(cfg: RunConfig):
    """Periodic-point, minimality and connectedness harnesses on one estimate"""
    p = cfg.params
    system = _system(p)
    estimate = orbit_core.omega_estimate(
        system, _initial_state(system, p["u"]), p["burn_in"], p["tail"], p.get("tol")
    )
    result = {
        "system": system.name,
        "size": len(estimate),
        "periodic": _check(orbit_core.theorem1_check(estimate, system)),
        "minimality": _check(orbit_core.minimality_probe(estimate, system, p["eps"])),
        "components": orbit_core.connectivity_probe(estimate, p["link_radius"], system),
        "displacement": orbit_core.displacement_profile(estimate, system),
    }
    return result, None


OBSERVABLES = {
    "cos": lambda x: math.cos(x),
    "sin": lambda x: math.sin(x),
    "identity": lambda x: float(x.real) if isinstance(x, complex) else float(x),
    "square": lambda x: abs(x) ** 2,
}


def run_birkhoff(cfg: RunConfig):
    p = cfg.params
    system = _system(p)
    observable = OBSERVABLES[p["observable"]]
    u = _initial_state(system, p["u"])
    average = orbit_core.birkhoff_average(system, observable, u, p["n"])
    result = {"system": system.name, "observable": p["observable"], "n": p["n"], "average": average}
    return result, None


# ---------------------------
# quad-family
# ---------------------------


def run_classify(cfg: RunConfig):
    report = quad.classify(cfg.params["alpha"])
    result = asdict(report)
    result["regime"] = report.regime
    return result, None


def run_critical_orbit(cfg: RunConfig):
    p = cfg.params
    orbit = quad.critical_orbit(p["alpha"], p["n"])
    frame = pd.DataFrame({"k": range(len(orbit)), "xi": [float(x) for x in orbit]})
    return {"alpha": p["alpha"], "orbit": orbit}, frame


def run_bc_stat(cfg: RunConfig):
    p = cfg.params
    stat = quad.bc_statistic(p["alpha"], p["n"])
    probe = quad.delta_inf_probe(p["alpha"], p["horizon"])
    frame = pd.DataFrame(
        {
            "m": range(1, stat.n + 1),
            "log_derivative": stat.log_derivative,
            "threshold": stat.thresholds,
            "flag": stat.flags,
        }
    )
    result = {
        "alpha": stat.alpha,
        "n": stat.n,
        "flags_true": int(sum(stat.flags)),
        "degenerate_index": stat.degenerate_index,
        "final_log_derivative": stat.log_derivative[-1],
        "probe": probe,
    }
    return result, frame


# ---------------------------
# julia-moments
# ---------------------------


def run_moments(cfg: RunConfig):
    p = cfg.params
    table = moments.moment_table(p["kmax"])
    frame = moments.moment_frame(table, p["alpha"])
    result = {
        "alpha": p["alpha"],
        "k_max": table.k_max,
        "nonnegative_integer": table.nonnegative_integer,
        "rows": frame.to_dict(orient="records"),
    }
    return result, frame


def run_phi(cfg: RunConfig):
    p = cfg.params
    phis = moments.phi_table(p["kmax"])
    frame = pd.DataFrame(
        {
            "k": range(len(phis)),
            "coefficients": [";".join(str(c) for c in phi.coeffs) for phi in phis],
        }
    )
    result = {
        "k_max": p["kmax"],
        "phi": [str(phi) for phi in phis],
        "identity": _check(moments.phi_identity_check(p["kmax"])),
    }
    return result, frame


def run_stieltjes(cfg: RunConfig):
    p = cfg.params
    series = moments.stieltjes(p["alpha"], p["z"], p.get("tol"), p.get("terms"), p.get("margin"))
    if not series.converged and not p.get("allow_unconverged"):
        raise NonConvergenceError(f"series not converged after {series.terms} terms")
    result = {"alpha": p["alpha"], "z": p["z"], "series": series}
    if p["alpha"] == 2:
        result["closed_form"] = moments.stieltjes_arcsine(p["z"])
    return result, None


def run_fourier(cfg: RunConfig):
    p = cfg.params
    series_a, series_b, discrepancy = moments.fourier(p["alpha"], p["z"], p["nmax"], p.get("tol"))
    if not (series_a.converged and series_b.converged) and not p.get("allow_unconverged"):
        last = max(series_a.last_term, series_b.last_term)
        raise NonConvergenceError(
            f"series not converged after {series_a.terms} terms (last term {last:.3g})"
        )
    result = {
        "alpha": p["alpha"],
        "z": p["z"],
        "series_a": series_a,
        "series_b": series_b,
        "discrepancy": discrepancy,
    }
    if p["alpha"] == 2:
        result["quadrature"] = moments.arcsine_fourier(p["z"])
    return result, None


# ---------------------------
# julia-sampler
# ---------------------------


def run_sample_julia(cfg: RunConfig):
    p = cfg.params
    cloud = sampler.sample(p["alpha"], p["count"], p.get("burn_in"), cfg.seed)
    empirical = sampler.empirical_moments(cloud, p["kmax"])
    result = {
        "cloud": cloud.metadata(),
        "empirical_even_moments": empirical[0::2],
        "moment_errors": moments.moment_errors(empirical, p["alpha"], p["kmax"]),
        "support_bound": sampler.support_bound(cloud),
        "chain_consistency": sampler.chain_consistency(cloud),
        "symmetry": _check(sampler.symmetry_check(cloud, p["sym_tol"])),
    }
    if p["alpha"] == 2:
        result["arcsine_distance"] = sampler.arcsine_distance(cloud)
    if p.get("meta_file"):
        data_loader.write_json(to_jsonable(cloud.metadata()), p["meta_file"])
    return result, data_loader.cloud_frame(cloud)


def run_real_cert(cfg: RunConfig):
    p = cfg.params
    alpha = sp.Rational(p["alpha_text"]) if p.get("exact") else p["alpha"]
    cert = sampler.realness_certificate(alpha, p.get("cap"))
    result = asdict(cert)
    result["verdict"] = cert.verdict
    return result, pd.DataFrame({"n": range(len(cert.chain)), "b": [str(b) for b in cert.chain]})


# ---------------------------
# perm-unitary
# ---------------------------


def _permutation(params):
    if params.get("perm_file"):
        return perms.decompose(data_loader.load_permutation(params["perm_file"]))
    if params.get("image"):
        return perms.decompose(params["image"])
    raise ArgumentError("a permutation is required (--perm-file or --image)")


def run_perm_spectral(cfg: RunConfig):
    p = cfg.params
    perm = _permutation(p)
    f_set = p.get("f_set") or [0]
    g_set = p.get("g_set") or f_set
    f = perms.indicator(perm.size, f_set)
    g = perms.indicator(perm.size, g_set)
    measure = perms.spectral_measure(perm, f, g)

    checks = []
    for t in p["t_values"]:
        direct = perms.inner(perms.power_t(perm, f, t), g)
        spectral = perms.fourier_transform(measure, t)
        gap = abs(direct - spectral)
        checks.append({"t": t, "inner": direct, "transform": spectral, "gap": gap})
    result = {
        "cycles": perm.cycles,
        "f": f_set,
        "g": g_set,
        "atoms": measure.atoms,
        "frequencies": measure.frequencies,
        "total_weight": measure.total_weight,
        "checks": checks,
    }
    if f_set == g_set:
        result["autocorrelation"] = {
            n: perms.autocorrelation(perm, f_set, n) for n in range(-p["n"], p["n"] + 1)
        }
    frame = pd.DataFrame(
        {
            "frequency": [str(q) for q in measure.frequencies],
            "theta": [theta for theta, _ in measure.atoms],
            "weight_re": [complex(w).real for _, w in measure.atoms],
            "weight_im": [complex(w).imag for _, w in measure.atoms],
        }
    )
    return result, frame


def run_perm_check(cfg: RunConfig):
    p = cfg.params
    perm = _permutation(p)
    result = {
        "cycles": perm.cycles,
        "group_law": _check(
            perms.group_law_check(perm, p["t"], p["s"], p["trials"], seed=cfg.seed)
        ),
    }
    return result, None


# ---------------------------
# transfer-spectral
# ---------------------------


def _operator(params):
    if not params.get("map_file"):
        raise ArgumentError("--map-file is required")
    image, c = data_loader.load_finite_system(params["map_file"])
    return transfer.build(image, c)


def _function(params, key, size):
    values = params.get(key)
    if values is None:
        return np.zeros(size)
    if len(values) != size:
        raise ArgumentError(f"--{key.replace('_', '-')} needs {size} values, got {len(values)}")
    return np.asarray(values, dtype=float)


def run_transfer_potential(cfg: RunConfig):
    p = cfg.params
    op = _operator(p)
    a = _function(p, "a_values", op.size)
    value = transfer.spectral_potential(op, a, p.get("tol"), p.get("n_cap"))
    if not value.converged:
        raise NonConvergenceError(
            f"spectral potential not converged at n = {value.iterations}"
            f" (residual {value.residual:.3g})"
        )
    result = {
        "size": op.size,
        "cycles": transfer.functional_cycles(op.image),
        "a": a,
        "potential": value,
        "log_spectral_radius": transfer.log_spectral_radius(op),
    }
    if p.get("equilibrium"):
        result["equilibrium"] = transfer.equilibrium_subgradient(op, a, p.get("h")).weights
    return result, None


def run_transfer_props(cfg: RunConfig):
    p = cfg.params
    op = _operator(p)
    rng = np.random.default_rng(cfg.seed)
    f, g = rng.normal(size=op.size), rng.normal(size=op.size)
    report = transfer.property_suite(op, p["trials"], p["tol"], cfg.seed)
    result = {
        "size": op.size,
        "properties": {name: _check(check) for name, check in report.items()},
        "module_identity": _check(transfer.module_identity_check(op, f, g)),
        "birkhoff_identity": _check(
            transfer.birkhoff_identity_check(op, rng.normal(size=op.size), f, min(op.size, 20))
        ),
        "passed": all(check.passed for check in report.values()),
    }
    if p.get("measure"):
        mu = MeasureVector(_function(p, "measure", op.size))
        result["invariance"] = transfer.invariance_witness(op, mu, p["t_max"])
    return result, None


def run_theorem4(cfg: RunConfig):
    p = cfg.params
    op = _operator(p)
    check = transfer.theorem4_check(op, p["trials"], p["tol"], cfg.seed)
    return {"size": op.size, "check": _check(check)}, None


COMMANDS = {
    "orbit": run_orbit,
    "omega": run_omega,
    "omega-check": run_omega_check,
    "birkhoff": run_birkhoff,
    "classify": run_classify,
    "critical-orbit": run_critical_orbit,
    "bc-stat": run_bc_stat,
    "moments": run_moments,
    "phi": run_phi,
    "stieltjes": run_stieltjes,
    "fourier": run_fourier,
    "sample-julia": run_sample_julia,
    "real-cert": run_real_cert,
    "perm-spectral": run_perm_spectral,
    "perm-check": run_perm_check,
    "transfer-potential": run_transfer_potential,
    "transfer-props": run_transfer_props,
    "theorem4": run_theorem4,
}


def build_artifact(cfg: RunConfig, result):
    """Result fields plus tool, version, command line, seed and tolerances"""
    artifact = {
        "tool": TOOL,
        "version": __version__,
        "command": " ".join(cfg.argv),
        "seed": cfg.seed,
        "tolerances": cfg.tolerances,
    }
    artifact.update(result)
    return to_jsonable(artifact)


def dispatch(cfg: RunConfig) -> int:
    """Run one subcommand and write its artifact

    Returns:
        process exit code: 0 on success, the error's exit code otherwise
    """
    try:
        result, frame = COMMANDS[cfg.command](cfg)
        artifact = build_artifact(cfg, result)
        if cfg.output_format == "csv":
            if frame is None:
                frame = pd.json_normalize(
                    {k: v for k, v in artifact.items() if k not in METADATA_KEYS}
                )
            metadata = {key: artifact[key] for key in METADATA_KEYS}
            data_loader.write_csv(frame, cfg.output_path, metadata)
        else:
            data_loader.write_json(artifact, cfg.output_path)
        return 0
    except OmegalabError as error:
        print(f"error: {error}", file=sys.stderr)
        logger.info("%s failed with %s", cfg.command, type(error).__name__)
        return error.exit_code
