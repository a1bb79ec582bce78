import numpy as np
import pytest

from hartreelab.errors import ParameterError
from hartreelab.gaussians import (
    GaussianSymbol,
    gaussian_apply,
    mdfm_compose,
    sample_symbol,
    symbol_distance,
)
from hartreelab.grids import GridSpec

SYMBOLS = [
    GaussianSymbol(1.0, 1.0, 3),
    GaussianSymbol(0.7 + 0.3j, 1.5 + 0.4j, 3),
    GaussianSymbol(-2.0 + 1.0j, 0.3 - 0.2j, 3),
]


@pytest.mark.parametrize("t", [1.0, 2.0, 10.0])
@pytest.mark.parametrize("sym", SYMBOLS)
def test_mdfm_factorization_matches_propagator(sym, t):
    # both closed forms computed independently; equality is the factorization
    assert symbol_distance(mdfm_compose(sym, t), gaussian_apply(sym, "U", t)) <= 1e-12


def test_fourier_involution_on_even_gaussians():
    sym = GaussianSymbol(2.0, 1.5 + 0.4j, 3)
    back = gaussian_apply(gaussian_apply(sym, "F"), "F")
    assert symbol_distance(back, sym) <= 1e-12


def test_dilation_at_unit_time():
    sym = GaussianSymbol(1.0, 1.0, 3)
    out = gaussian_apply(sym, "D", 1.0)
    factor = np.exp(-1.5 * np.log(1j))  # i^(-n/2), principal branch
    assert abs(out.amplitude - factor) <= 1e-14
    assert abs(out.width_param - 1.0) <= 1e-14


def test_degenerate_times_rejected():
    sym = GaussianSymbol(1.0, 1.0, 3)
    for op in ("M", "D"):
        with pytest.raises(ParameterError):
            gaussian_apply(sym, op, 0.0)
        with pytest.raises(ParameterError):
            gaussian_apply(sym, op)  # missing time


def test_width_param_positivity_enforced():
    with pytest.raises(ParameterError):
        GaussianSymbol(1.0, -0.5, 3)
    with pytest.raises(ParameterError):
        GaussianSymbol(1.0, 1j, 3)


def test_propagator_preserves_width_positivity():
    sym = GaussianSymbol(1.0, 2.0 + 1.0j, 3)
    for t in (-5.0, -1.0, 0.0, 1.0, 100.0):
        out = gaussian_apply(sym, "U", t)
        assert np.real(out.width_param) > 0.0


def test_sample_symbol_dimension_mismatch():
    with pytest.raises(ParameterError):
        sample_symbol(GaussianSymbol(1.0, 1.0, 2), GridSpec(3, 32, 16.0))


def test_unknown_operator():
    with pytest.raises(ParameterError):
        gaussian_apply(GaussianSymbol(1.0, 1.0, 3), "Q", 1.0)
