import gzip
import math
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
ZEROS_1E5 = ROOT / "data" / "zeta_zeros_1e5.txt.gz"

# r~ moments of the GUE bulk, k = 1..4
GUE_MOMENTS = (0.5997504209, 0.4132049292, 0.3100223500, 0.2460560527)

# 40-digit Fredholm determinants (mpmath, independent quadrature), see scripts/oracles.py
LNJ_REFERENCE = {
    (-1.0, 1.0): -0.06741692453857251888881763,
    (-2.0, 3.0): -1.004646587954059384945882,
    (0.0, 3.0): -0.6787526967715826692563563,
    (-5.0, 5.0): -6.277655854339170331006906,
    (-10.0, 10.0): -34.67622701848971697,
}


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running statistical or grid checks")
    config.addinivalue_line("markers", "optional_data: needs a user-supplied zero table")


@pytest.fixture(scope="session")
def zeros_1e5():
    if not ZEROS_1E5.exists():
        pytest.skip(f"{ZEROS_1E5} not generated (scripts/make_zeros.py)")
    return ZEROS_1E5


@pytest.fixture
def first_zeros(tmp_path):
    p = tmp_path / "zeros.txt"
    p.write_text("# first three\n14.134725\n21.022040\n25.010858\n")
    return p
