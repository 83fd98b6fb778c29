import os
import sys

import numpy as np
import pytest

# Make sure that the package source directory is on sys.path,
# or else before running pytest 'export PYTHONPATH='${PYTHONPATH}:<PyFringeRootDir>''
dir_pyfringe = os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..'))
sys.path.insert(0, dir_pyfringe)

from PyFringe.wave_optics import AngleGrid, SlitGeometry  # noqa: E402


@pytest.fixture
def geom():
    return SlitGeometry.default()


@pytest.fixture
def grid():
    return AngleGrid.uniform()


@pytest.fixture
def rng():
    return np.random.default_rng(20240208)
