import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qtentropy import PAPER_PARAMS, CouplingKind, thermal_populations  # noqa: E402

# frozen from tests/oracles.py (mpmath, 40 digits)
F00_T1 = 0.88079707797788244406
F11_T1 = 0.11920292202211755594
S2_T1 = 0.36533385508720760832
F00_T05 = 0.98201379003790844197
S2_T05 = 0.09009476776617597246
GAP_T05 = 0.96402758007581688395  # tanh(2)
GAP_T1 = 0.76159415595576488812  # tanh(1)
LN2 = 0.69314718055994530942


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def ising():
    return PAPER_PARAMS


@pytest.fixture
def heis():
    return PAPER_PARAMS.with_coupling(CouplingKind.HEISENBERG)


@pytest.fixture
def pops_t1():
    return thermal_populations(1.0, 1.0)
