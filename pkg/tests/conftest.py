import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from hartreelab.grids import ComplexField, GridSpec, RealField
from hartreelab.model import AdmissiblePair, ModelParams
from hartreelab.profiles import AsymptoticDatum
from hartreelab.spectral import sobolev_norm


@pytest.fixture(scope="session")
def arena():
    return GridSpec(3, 32, 16.0)


@pytest.fixture(scope="session")
def params_g08():
    return ModelParams(3, 1.0, 0.8, 1.0)


@pytest.fixture(scope="session")
def pair22():
    return AdmissiblePair(2, 2)


@pytest.fixture(scope="session")
def arena_datum(arena):
    """Band-limited Gaussian datum normalized to |w+|_3 = 1/2."""
    shape = np.exp(-arena.radius_squared() / (2.0 * 1.5**2))
    probe = AsymptoticDatum(ComplexField(arena, shape))
    amp = 0.5 / sobolev_norm(probe.w_plus, 3)
    return AsymptoticDatum(ComplexField(arena, amp * shape))


def gaussian_field(grid, amplitude=1.0, sigma=1.5, center=(0.0, 0.0, 0.0), phase=None):
    xs = grid.coordinate_arrays()
    r2 = sum((x - c) ** 2 for x, c in zip(xs, center))
    vals = amplitude * np.exp(-r2 / (2.0 * sigma**2))
    if phase is not None:
        vals = vals * np.exp(1j * sum(p * x for p, x in zip(phase, xs)))
    return ComplexField(grid, vals + 0j)
