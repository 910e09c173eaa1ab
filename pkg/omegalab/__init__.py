# omegalab: orbits, omega-limit sets, transfer operators and the Julia set
# of the quadratic family T_a(z) = 1 - a z^2

import logging

from config import Config

__version__ = "0.1.0"

logger = logging.getLogger("omegalab")
if not logger.handlers:
    _handler = logging.StreamHandler()  # standard error
    _handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.addHandler(_handler)
logger.setLevel(Config.LOG_LEVEL)
