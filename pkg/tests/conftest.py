import json
import os
import sys

import pytest

# Ensure the repository root is in the path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from omegalab import orbit_core, routes  # noqa: E402
from omegalab import transfer_spectral as transfer  # noqa: E402

FIVE_CYCLE = [1, 2, 3, 4, 0]
COLLAPSING = [0, 2, 0, 2]


@pytest.fixture
def rotation_system():
    """Golden-mean rotation of the circle"""
    return orbit_core.rotation()


@pytest.fixture
def quad_system():
    """T_a with a = 0.5 (attracting fixed point)"""
    return orbit_core.quadratic_map(0.5)


@pytest.fixture
def five_cycle_op():
    return transfer.build(FIVE_CYCLE)


@pytest.fixture
def collapsing_op():
    """T = [0, 2, 0, 2]: every state falls onto the fixed point 0"""
    return transfer.build(COLLAPSING)


@pytest.fixture
def json_file(tmp_path):
    """Write a payload to a JSON file and return its path"""

    def write(payload, name="input.json"):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)

    return write


@pytest.fixture
def run_cli(capsys):
    """Run the command line in-process; returns (exit code, stdout, stderr)"""

    def run(*argv):
        code = routes.main([str(a) for a in argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run
