# Command-line routes for the omegalab toolkit
# Declares every subcommand and its flags, validates them into a RunConfig and
# hands over to controller.dispatch (business logic stays in controller.py)

import argparse
import logging
import sys
from fractions import Fraction

import numpy as np

from config import Config
from omegalab import __version__, controller
from omegalab.errors import ArgumentError
from omegalab.models import RunConfig

logger = logging.getLogger(__name__)

# allowed alpha range per subcommand: (low, high, high included)
ALPHA_RANGES = {
    "classify": (0.0, 2.0, False),
    "critical-orbit": (0.0, 2.0, True),
    "bc-stat": (0.0, 2.0, True),
    "stieltjes": (0.0, 2.0, True),
    "fourier": (0.0, 2.0, True),
    "sample-julia": (0.0, 2.0, True),
    "real-cert": (0.0, 2.0, True),
}

# Config settings recorded in the artifacts of each subcommand
TOLERANCE_KEYS = {
    "orbit": ["CYCLE_TOL", "ESCAPE_RADIUS"],
    "omega": ["OMEGA_TOL", "ESCAPE_RADIUS"],
    "omega-check": ["OMEGA_TOL", "PERIOD_CAP", "ESCAPE_RADIUS"],
    "birkhoff": ["ESCAPE_RADIUS"],
    "classify": [],
    "critical-orbit": [],
    "bc-stat": ["CYCLE_TOL"],
    "moments": [],
    "phi": [],
    "stieltjes": ["SERIES_TOL", "SERIES_TERM_CAP"],
    "fourier": ["SERIES_TOL"],
    "sample-julia": ["SAMPLER_BURN_IN", "SAMPLER_GENERATOR"],
    "real-cert": ["CERT_CAP"],
    "perm-spectral": [],
    "perm-check": [],
    "transfer-potential": ["TRANSFER_TOL", "TRANSFER_N_CAP", "SUBGRADIENT_STEP"],
    "transfer-props": ["TRANSFER_TOL"],
    "theorem4": ["TRANSFER_TOL"],
}

# flags whose value overrides a recorded Config setting
OVERRIDES = {
    "tol": {
        "orbit": "CYCLE_TOL",
        "omega": "OMEGA_TOL",
        "omega-check": "OMEGA_TOL",
        "stieltjes": "SERIES_TOL",
        "fourier": "SERIES_TOL",
        "transfer-potential": "TRANSFER_TOL",
    },
    "terms": {"stieltjes": "SERIES_TERM_CAP"},
    "burn_in": {"sample-julia": "SAMPLER_BURN_IN"},
    "cap": {"real-cert": "CERT_CAP"},
    "n_cap": {"transfer-potential": "TRANSFER_N_CAP"},
    "h": {"transfer-potential": "SUBGRADIENT_STEP"},
}

STOCHASTIC = {"sample-julia", "perm-check", "transfer-props", "theorem4"}


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def _orbit_flags(parser, n_default=1000):
    parser.add_argument("--system", choices=["squaring", "rotation", "quadratic", "finite"],
                        default="quadratic", help="fixture system (default: quadratic)")
    parser.add_argument("--alpha", type=float, default=0.5, help="parameter of the quadratic map")
    parser.add_argument("--gamma", type=float, help="rotation number (default: golden mean)")
    parser.add_argument("--map-file", help='finite system JSON {"map": [...]}')
    parser.add_argument("--u", default="0.3", help="initial state (complex as 1+2j)")
    parser.add_argument("--n", type=int, default=n_default, help="number of iterations")


def build_parser():
    """Argument parser with one subparser per subcommand"""
    parser = argparse.ArgumentParser(
        prog="omegalab",
        description="omega-limit sets, transfer operators and the Julia set of 1 - a z^2",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--format", dest="output_format", choices=["json", "csv"], default="json")
    parser.add_argument("--output", dest="output_path", help="artifact path (default: stdout)")
    parser.add_argument("--seed", type=int, help="generator seed (drawn from entropy if omitted)")
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help=f"logging level (default: {Config.LOG_LEVEL})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", help="iterate a fixture system and look for a cycle")
    _orbit_flags(p)
    p.add_argument("--tol", type=float, help=f"cycle tolerance (default: {Config.CYCLE_TOL})")

    for name, text in (("omega", "estimate an omega-limit set"),
                       ("omega-check", "periodic-point, minimality and connectedness checks")):
        p = sub.add_parser(name, help=text)
        _orbit_flags(p)
        p.add_argument("--burn-in", type=int, default=1000)
        p.add_argument("--tail", type=int, default=1000)
        p.add_argument("--tol", type=float, help=f"cluster tolerance (default: {Config.OMEGA_TOL})")
        if name == "omega-check":
            p.add_argument("--eps", type=float, default=0.05, help="density radius")
            p.add_argument("--link-radius", type=float, default=0.05, help="link-graph radius")

    p = sub.add_parser("birkhoff", help="Birkhoff average of an observable along an orbit")
    _orbit_flags(p, n_default=100000)
    p.add_argument("--observable", choices=sorted(controller.OBSERVABLES), default="cos")

    p = sub.add_parser("classify", help="regime of T_a for 0 < a < 2")
    p.add_argument("--alpha", type=float, required=True)

    p = sub.add_parser("critical-orbit", help="orbit of the critical point 0")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, default=50)

    p = sub.add_parser("bc-stat", help="derivative growth along the orbit of 1")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--horizon", type=int, default=1000, help="critical-orbit horizon (>= 1000)")

    p = sub.add_parser("moments", help="exact moment polynomials of the balanced measure")
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--alpha", default="2", help="rational alpha for the lambda column")

    p = sub.add_parser("phi", help="phi polynomials and their binomial identity")
    p.add_argument("--kmax", type=int, default=10)

    p = sub.add_parser("stieltjes", help="Stieltjes transform by the moment series")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--tol", type=float)
    p.add_argument("--terms", type=int, help=f"term cap (default: {Config.SERIES_TERM_CAP})")
    p.add_argument(
        "--margin", type=float, help="demand |z| > 1 + margin instead of the disk radius"
    )
    p.add_argument(
        "--allow-unconverged",
        action="store_true",
        help="report a truncated series instead of exiting 3",
    )

    p = sub.add_parser("fourier", help="two series for the Fourier transform")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--nmax", type=int, default=30)
    p.add_argument("--tol", type=float)
    p.add_argument(
        "--allow-unconverged",
        action="store_true",
        help="report truncated series instead of exiting 3",
    )

    p = sub.add_parser("sample-julia", help="inverse-iteration sample of the Julia set")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--count", type=int, default=100000)
    p.add_argument("--burn-in", type=int)
    p.add_argument("--kmax", type=int, default=5)
    p.add_argument("--sym-tol", type=float, default=0.02)
    p.add_argument("--meta-file", help="JSON sidecar with the cloud metadata")

    p = sub.add_parser("real-cert", help="certificate that J(T_a) is not real")
    p.add_argument("--alpha", required=True, help="alpha, a decimal or p/q with --exact")
    p.add_argument("--cap", type=int)
    p.add_argument("--exact", action="store_true", help="run the chain in exact rationals")

    for name, text in (("perm-spectral", "spectral measure of a permutation"),
                       ("perm-check", "group law and unitarity of T^t")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--perm-file", help='permutation JSON {"image": [...]}')
        p.add_argument("--image", type=_int_list, help="inline image table, e.g. 1,2,0")
        if name == "perm-spectral":
            p.add_argument("--f", dest="f_set", type=_int_list, help="subset B for f = chi_B")
            p.add_argument("--g", dest="g_set", type=_int_list, help="subset for g (default: f)")
            p.add_argument("--t", dest="t_values", type=_float_list, default=[0.1, 0.5, 2 ** 0.5])
            p.add_argument("--n", type=int, default=6, help="autocorrelation range -n..n")
        else:
            p.add_argument("--t", type=float, default=0.3)
            p.add_argument("--s", type=float, default=0.7)
            p.add_argument("--trials", type=int, default=10)

    p = sub.add_parser("transfer-potential", help="spectral potential lambda(a)")
    p.add_argument("--map-file", required=True, help='system JSON {"map": [...], "c": [...]}')
    p.add_argument("--a", dest="a_values", type=_float_list)
    p.add_argument("--tol", type=float)
    p.add_argument("--n-cap", type=int)
    p.add_argument("--equilibrium", action="store_true", help="also report the subgradient measure")
    p.add_argument("--h", type=float)

    p = sub.add_parser("transfer-props", help="property suite of the spectral potential")
    p.add_argument("--map-file", required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--measure", type=_float_list, help="measure to test for invariance")
    p.add_argument("--t-max", type=float, default=100.0)

    p = sub.add_parser("theorem4", help="lambda(a) = ln r(A) + mu(a) on a uniquely ergodic system")
    p.add_argument("--map-file", required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-6)
    return parser


def _check_alpha(command, alpha):
    low, high, closed = ALPHA_RANGES[command]
    inside = low < alpha <= high if closed else low < alpha < high
    if not inside:
        bracket = "]" if closed else ")"
        raise ArgumentError(f"--alpha must lie in ({low:g}, {high:g}{bracket}, got {alpha:g}")


def validate_config(args, argv) -> RunConfig:
    """Typed, range-checked RunConfig from parsed arguments

    Raises:
        ArgumentError: a value outside its allowed range
    """
    params = {
        key: value
        for key, value in vars(args).items()
        if key not in ("command", "output_format", "output_path", "seed", "log_level")
    }
    command = args.command

    if command == "real-cert":
        params["alpha_text"] = params["alpha"]
        try:
            params["alpha"] = float(Fraction(params["alpha"]))
        except (ValueError, ZeroDivisionError):
            raise ArgumentError(f"cannot read --alpha '{params['alpha_text']}'")
    if command == "moments":
        try:
            params["alpha"] = Fraction(params["alpha"])
        except (ValueError, ZeroDivisionError):
            raise ArgumentError(f"cannot read --alpha '{params['alpha']}'")
        if params["alpha"] == 0:
            raise ArgumentError("--alpha must be nonzero")
        params["alpha"] = str(params["alpha"])

    if command in ALPHA_RANGES:
        _check_alpha(command, params["alpha"])
    if command == "orbit" and params.get("system") == "quadratic" and params["alpha"] <= 0:
        raise ArgumentError("--alpha must be > 0")

    for key in ("kmax", "n", "nmax", "count", "trials", "tail", "cap", "terms"):
        value = params.get(key)
        if value is not None and value < 0:
            raise ArgumentError(f"--{key.replace('_', '-')} must be >= 0, got {value}")
    for key in ("tol", "eps", "link_radius", "h", "t_max", "sym_tol"):
        value = params.get(key)
        if value is not None and value <= 0:
            raise ArgumentError(f"--{key.replace('_', '-')} must be positive, got {value}")

    seed = args.seed
    if seed is None and command in STOCHASTIC:
        seed = int(np.random.SeedSequence().entropy % 2**63)
        print(f"seed: {seed}", file=sys.stderr)
        logger.info("drew seed %d from entropy", seed)

    tolerances = {key.lower(): getattr(Config, key) for key in TOLERANCE_KEYS[command]}
    for flag, targets in OVERRIDES.items():
        if command in targets and params.get(flag) is not None:
            tolerances[targets[command].lower()] = params[flag]

    return RunConfig(
        command=command,
        params=params,
        seed=seed,
        output_format=args.output_format,
        output_path=args.output_path,
        argv=list(argv),
        tolerances=tolerances,
    )


def main(argv=None) -> int:
    """Parse argv, validate and dispatch; returns the process exit code"""
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, --version and argparse usage errors
        return int(exc.code or 0)

    if args.log_level:
        logging.getLogger("omegalab").setLevel(args.log_level)

    try:
        cfg = validate_config(args, argv)
    except ArgumentError as error:
        print(f"error: {error}", file=sys.stderr)
        return error.exit_code
    return controller.dispatch(cfg)
