# Configuration for the omegalab toolkit
# Every tolerance and default used by the modules lives here and can be
# overridden through environment variables or a local .env file

import os

from dotenv import load_dotenv

load_dotenv()


def _env_float(name, default):
    """Read a float setting from the environment, falling back to default"""
    value = os.getenv(name)
    return float(value) if value not in (None, "") else default


def _env_int(name, default):
    """Read an integer setting from the environment, falling back to default"""
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


class Config:
    """Toolkit-wide defaults

    Modules read their default tolerances from this class. Callers can still
    pass explicit values per call; the CLI records the effective values in
    every artifact it writes.
    """

    LOG_LEVEL = os.getenv("OMEGALAB_LOG_LEVEL", "WARNING")

    # orbit-core
    ESCAPE_RADIUS = _env_float("OMEGALAB_ESCAPE_RADIUS", 1e6)
    PERIOD_CAP = _env_int("OMEGALAB_PERIOD_CAP", 64)
    CYCLE_TOL = _env_float("OMEGALAB_CYCLE_TOL", 1e-9)
    OMEGA_TOL = _env_float("OMEGALAB_OMEGA_TOL", 1e-6)

    # julia-moments
    SERIES_TOL = _env_float("OMEGALAB_SERIES_TOL", 1e-12)
    SERIES_TERM_CAP = _env_int("OMEGALAB_SERIES_TERM_CAP", 200)
    SERIES_MARGIN = _env_float("OMEGALAB_SERIES_MARGIN", 1.0)

    # julia-sampler
    SAMPLER_BURN_IN = _env_int("OMEGALAB_SAMPLER_BURN_IN", 100)
    SAMPLER_GENERATOR = "Philox"  # counter-based, recorded in every cloud
    CERT_CAP = _env_int("OMEGALAB_CERT_CAP", 10000)

    # transfer-spectral
    TRANSFER_TOL = _env_float("OMEGALAB_TRANSFER_TOL", 1e-12)
    TRANSFER_N_CAP = _env_int("OMEGALAB_TRANSFER_N_CAP", 2**60)
    SUBGRADIENT_STEP = _env_float("OMEGALAB_SUBGRADIENT_STEP", 1e-4)

    # Artifacts
    CSV_FLOAT_FORMAT = "%.17g"  # round-trip safe
