import numpy as np
import pytest

from conftest import gaussian_field
from oracles import fd_laplacian, interior_line_targets, kernel_quadrature

from hartreelab.errors import ParameterError
from hartreelab.grids import ComplexField, GridSpec, RealField, VectorField, read_field, write_field
from hartreelab.spectral import (
    NormReport,
    apply_multiplier,
    chirp_conjugation_residual,
    free_propagator,
    galilei_norm,
    gradient,
    homogeneous_norm,
    l2_inner,
    lr_norm,
    norm_report,
    riesz_potential,
    sobolev_norm,
    x_norm,
    x_space_exponents,
    y_norm,
)
from hartreelab.gaussians import GaussianSymbol, gaussian_apply, sample_symbol


def rand_field(grid, seed=0):
    rng = np.random.default_rng(seed)
    return ComplexField(grid, rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))


def test_multiplier_identity(arena):
    f = gaussian_field(arena, sigma=2.0)
    out = apply_multiplier(f, lambda ks: 1.0)
    assert np.max(np.abs(out.values - f.values)) <= 1e-12


def test_multiplier_plane_wave_eigenfunction(arena):
    k0 = arena.axis_frequencies()[3]
    xs = arena.coordinate_arrays()
    pw = ComplexField(arena, np.exp(1j * k0 * xs[0]) * np.ones(arena.shape))
    out = apply_multiplier(pw, lambda ks: 1j * ks[0])
    assert np.max(np.abs(out.values - 1j * k0 * pw.values)) <= 1e-12 * abs(k0)


def test_multiplier_rejects_nonfinite(arena):
    f = gaussian_field(arena)
    with pytest.raises(ParameterError):
        apply_multiplier(f, lambda ks: 1.0 / (ks[0] * 0.0))


def test_laplacian_matches_finite_difference_oracle():
    # FD oracle is O(h^2); spectral is exact, so the gap must shrink ~4x per halving
    errs = {}
    for N in (32, 64):
        grid = GridSpec(3, N, 16.0)
        f = gaussian_field(grid, sigma=2.0)
        spec = apply_multiplier(f, lambda ks: -sum(k**2 for k in ks))
        fd = fd_laplacian(f.values, grid.h)
        errs[N] = np.max(np.abs(spec.values - fd))
    assert errs[32] <= 0.05  # O(h^2) with the Gaussian's curvature scale
    assert errs[32] / errs[64] > 3.0


def test_riesz_zero_and_mean(arena):
    zero = riesz_potential(ComplexField.zero(arena), 1.0)
    assert np.max(np.abs(zero.values)) == 0.0
    out = riesz_potential(rand_field(arena, 3), 1.0)
    assert abs(out.values.mean()) <= 1e-13


def test_riesz_parameter_range(arena):
    f = gaussian_field(arena)
    for mu in (0.0, -1.0, 3.0, 5.0):
        with pytest.raises(ParameterError):
            riesz_potential(f, mu)


def test_riesz_matches_kernel_quadrature_oracle(arena):
    # expected values computed by the independent Romberg kernel quadrature
    from oracles import neutral_gaussian_pair

    _, _, rho = neutral_gaussian_pair(3.0, 2.2)
    f = ComplexField(arena, rho(*np.meshgrid(*[arena.axis_coordinates()] * 3, indexing="ij")))
    targets, locs = interior_line_targets(arena)
    oracle = kernel_quadrature(arena, rho, targets, 1.0).real
    spec = riesz_potential(f, 1.0).values.real
    got = np.array([spec[l] for l in locs])
    oc, gc = oracle - oracle.mean(), got - got.mean()
    assert np.max(np.abs(oc - gc)) / np.max(np.abs(oc)) <= 1e-3


def test_riesz_self_adjoint(arena):
    f, g = rand_field(arena, 1), rand_field(arena, 2)
    lhs = l2_inner(f, riesz_potential(g, 1.0))
    rhs = l2_inner(riesz_potential(f, 1.0), g)
    assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), 1.0)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 10.0, -3.0])
def test_free_propagator_unitary(arena, t):
    f = rand_field(arena, 5)
    assert abs(lr_norm(free_propagator(f, t), 2) - lr_norm(f, 2)) <= 1e-12 * lr_norm(f, 2)


def test_free_propagator_identity_and_inverse(arena):
    f = gaussian_field(arena, sigma=2.0)
    assert np.max(np.abs(free_propagator(f, 0.0).values - f.values)) <= 1e-14
    back = free_propagator(free_propagator(f, 2.0), -2.0)
    assert np.max(np.abs(back.values - f.values)) <= 1e-12


@pytest.mark.parametrize("t", [1.0, 2.0, 10.0])
def test_free_propagator_gaussian_closed_form(t):
    grid = GridSpec(3, 64, 32.0)
    sym = GaussianSymbol(1.0, 0.1, 3)
    got = free_propagator(sample_symbol(sym, grid), t)
    want = sample_symbol(gaussian_apply(sym, "U", t), grid)
    rel = np.max(np.abs(got.values - want.values)) / np.max(np.abs(want.values))
    assert rel <= 1e-8


@pytest.mark.parametrize("t", [1.0, 2.0, 10.0])
def test_chirp_conjugation_identity(arena, t):
    # localized Gaussian of width 4h, plus an asymmetric field: both at round-off
    f = gaussian_field(arena, sigma=4.0 * arena.h)
    assert chirp_conjugation_residual(f, t) <= 1e-6
    g = rand_field(arena, 11)
    assert chirp_conjugation_residual(g, t) <= 1e-6


def test_sobolev_h0_equals_l2(arena):
    f = rand_field(arena, 7)
    assert abs(sobolev_norm(f, 0) - lr_norm(f, 2)) <= 1e-12 * lr_norm(f, 2)


def test_sobolev_monotone_and_homogeneous(arena):
    f = gaussian_field(arena, sigma=2.0)
    norms = [sobolev_norm(f, k) for k in range(4)]
    assert all(b >= a for a, b in zip(norms, norms[1:]))
    c = 2.7 - 1.3j
    scaled = ComplexField(arena, c * f.values)
    assert abs(sobolev_norm(scaled, 2) - abs(c) * sobolev_norm(f, 2)) <= 1e-10 * sobolev_norm(f, 2)


def test_plane_wave_homogeneous_norm_oracle(arena):
    # analytic eigenvalue oracle: Hdot^j of exp(i xi0 . x) is the multi-index sum
    k = arena.axis_frequencies()
    xi0 = np.array([k[2], k[5], 0.0])
    xs = arena.coordinate_arrays()
    pw = ComplexField(arena, np.exp(1j * (xi0[0] * xs[0] + xi0[1] * xs[1])) * np.ones(arena.shape))
    l2 = lr_norm(pw, 2)
    for j in (1, 2, 3):
        from hartreelab.spectral import multi_indices

        want = sum(
            np.prod([abs(x) ** a for x, a in zip(xi0, alpha)]) for alpha in multi_indices(3, j)
        ) * l2
        assert abs(homogeneous_norm(pw, j) - want) <= 1e-9 * max(want, 1.0)


def test_galilei_norm_basics(arena):
    f = rand_field(arena, 8)
    assert abs(galilei_norm(f, 0) - lr_norm(f, 2)) <= 1e-12 * lr_norm(f, 2)
    assert galilei_norm(ComplexField.zero(arena), 3) == 0.0


def test_galilei_norm_binomial_oracle(arena):
    # direct derivative-sum computation: <xi>^4 = 1 + 2|xi|^2 + |xi|^4
    v = gaussian_field(arena, sigma=2.0, phase=(0.5, 0.0, 0.0))
    lap = apply_multiplier(v, lambda ks: -sum(k**2 for k in ks))
    grads = [apply_multiplier(v, lambda ks, i=i: 1j * ks[i]) for i in range(3)]
    oracle = np.sqrt(
        lr_norm(v, 2) ** 2 + 2.0 * sum(lr_norm(g, 2) ** 2 for g in grads) + lr_norm(lap, 2) ** 2
    )
    assert abs(galilei_norm(v, 2) - oracle) <= 1e-8 * oracle


def test_x_norm_composition(arena, params_g08):
    s = gradient(RealField(arena, np.exp(-arena.radius_squared() / 6.0)))
    r0, ell0 = x_space_exponents(3)
    assert r0 == 6 and ell0 == 1
    manual = lr_norm(s, 6) + homogeneous_norm(s, 1) + homogeneous_norm(s, 3)
    assert abs(x_norm(s, 2) - manual) <= 1e-12 * manual
    rep = norm_report(s, 2, rs=(2.0, 6.0), ell=2)
    assert abs(rep.x_norm - manual) <= 1e-12 * manual
    assert set(rep.x_constituents) == {"L^6", "Hdot^1", "Hdot^3"}


def test_y_norm(arena):
    phi = RealField(arena, 0.3 * np.exp(-arena.radius_squared() / 8.0))
    val = y_norm(phi, 2)
    assert val >= lr_norm(phi, np.inf)


def test_field_serialization_roundtrip(arena, tmp_path):
    for f in (
        rand_field(arena, 9),
        RealField(arena, np.exp(-arena.radius_squared() / 4.0)),
        gradient(RealField(arena, np.exp(-arena.radius_squared() / 4.0))),
    ):
        path = tmp_path / "field.hlf"
        write_field(f, str(path))
        back = read_field(str(path))
        assert back.grid == arena
        a = f.components if isinstance(f, VectorField) else f.values
        b = back.components if isinstance(back, VectorField) else back.values
        assert np.array_equal(a, b)


def test_field_slice_csv(arena):
    from hartreelab.grids import field_slice_csv

    text = field_slice_csv(gaussian_field(arena), axis=0)
    lines = text.strip().splitlines()
    assert lines[0] == "x,value_re,value_im"
    assert len(lines) == arena.points_per_axis + 1


def test_grid_validation():
    with pytest.raises(ParameterError):
        GridSpec(3, 24, 16.0)  # not a power of two
    with pytest.raises(ParameterError):
        GridSpec(3, 4, 16.0)
    with pytest.raises(ParameterError):
        GridSpec(0, 32, 16.0)
    with pytest.raises(ParameterError):
        GridSpec(3, 32, -1.0)
