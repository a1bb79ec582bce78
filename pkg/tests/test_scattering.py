import warnings

import numpy as np
import pytest

from conftest import gaussian_field

from hartreelab.errors import ParameterError
from hartreelab.grids import ComplexField, GridSpec, RealField, VectorField
from hartreelab.model import AdmissiblePair, ModelParams
from hartreelab.profiles import AsymptoticDatum, s02_of_t
from hartreelab.dynamics import AuxState, IntegratorConfig, vorticity_max
from hartreelab.scattering import (
    GaugeFunction,
    extract_s0,
    extract_w_plus,
    gauge_transform,
    geometric_sample_grid,
    heuristic_T,
    omega1_map,
    omega_map,
    phi_map,
    rescaled_profile_bound,
    seed_at_t0,
    wave_operator_W,
)
from hartreelab.spectral import fftn, ifftn, lr_norm, sobolev_norm, x_norm
from hartreelab.model import g0


def small_config(t_lo, t_hi, ratio=2.0**0.5, rel=0.05):
    return IntegratorConfig(sample_times=geometric_sample_grid(t_lo, t_hi, ratio), rel_dt_cap=rel)


def test_geometric_sample_grid():
    ts = geometric_sample_grid(100.0, 1000.0)
    assert ts[0] == 100.0 and ts[-1] == 1000.0
    ratios = np.diff(np.log(np.asarray(ts)))
    assert np.all(ratios <= np.log(2.0 ** 0.25) + 1e-9)
    with pytest.raises(ParameterError):
        geometric_sample_grid(10.0, 5.0)


def test_heuristic_T_properties(arena_datum, params_g08, pair22):
    base = heuristic_T(arena_datum, params_g08, pair22)
    # direct evaluation of the formula from its ingredients
    a = arena_datum.amplitude_scale(pair22.k + 1)
    b = rescaled_profile_bound(arena_datum, params_g08, pair22.ell + 1)
    want = (2.0 * params_g08.gamma - 1.0) ** -2.0 * max(
        (b + a * a) ** (1.0 / params_g08.gamma), a**4 / (b * b)
    )
    assert abs(base - want) <= 1e-12 * want
    # formula monotonicity in a at fixed b
    gam = params_g08.gamma
    T_of = lambda a_, b_: (2 * gam - 1) ** -2.0 * max((b_ + a_ * a_) ** (1 / gam), a_**4 / b_**2)
    assert T_of(2.0 * a, b) > T_of(a, b)
    # doubling the datum scales b by 4 = (2a/a)^2, leaving the a^4/b^2 branch
    # invariant; the formula value must not decrease
    grid = arena_datum.grid
    doubled = AsymptoticDatum(ComplexField(grid, 2.0 * arena_datum.w_plus.values))
    assert heuristic_T(doubled, params_g08, pair22) >= base * (1.0 - 1e-12)
    # gamma -> 1/2 blows the window start up
    near_half = ModelParams(3, 1.0, 0.51, 1.0)
    assert heuristic_T(arena_datum, near_half, pair22) > 50.0 * base


def test_seed_structure(arena, arena_datum, params_g08):
    st = seed_at_t0(arena_datum, 1.0e6, params_g08)
    # the seed differs from the asymptotic state only by the half-propagator
    dw = st.w.values - arena_datum.w_plus.values
    l2 = np.sqrt(arena.cell_volume * np.sum(np.abs(dw) ** 2))
    bound = 1.0e-3 * sobolev_norm(arena_datum.w_plus, 1)  # t0^(-1/2) |w+|_1
    assert l2 <= bound
    assert vorticity_max(st.s) <= 1e-10
    from hartreelab.dynamics import gradient_gap

    assert gradient_gap(st.s, st.phi) <= 1e-10
    zero = AsymptoticDatum(ComplexField.zero(arena))
    st0 = seed_at_t0(zero, 100.0, params_g08)
    assert np.max(np.abs(st0.w.values)) == 0.0


def test_wave_operator_trivial_limit(arena, params_g08, pair22, arena_datum):
    # lambda = 0, zero phase: the system is static; at large t0 the seeding
    # phase is below 1e-10 and all trajectories coincide
    p0 = ModelParams(3, 0.0, 0.8, 1.0)
    cfg = IntegratorConfig(
        sample_times=geometric_sample_grid(1.0e8, 1.0e9, 2.0), rel_dt_cap=0.2
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        run = wave_operator_W(arena_datum, [1.0e10, 2.0e10], p0, pair22, cfg, t_max=1.0e9)
    assert np.all(run.cauchy_diffs <= 1e-10)
    assert not run.diverged


def test_wave_operator_cauchy_decrease(arena, params_g08, pair22, arena_datum):
    cfg = small_config(50.0, 400.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        run = wave_operator_W(arena_datum, [100.0, 200.0, 400.0], params_g08, pair22, cfg)
    assert len(run.cauchy_diffs) == 2
    assert run.cauchy_diffs[1] < run.cauchy_diffs[0]
    assert not run.diverged
    assert run.window[0] == 50.0


def test_wave_operator_validation(arena, params_g08, pair22, arena_datum):
    cfg = small_config(50.0, 200.0)
    with pytest.raises(ParameterError):
        wave_operator_W(arena_datum, [100.0, 100.0], params_g08, pair22, cfg)
    with pytest.raises(ParameterError):
        wave_operator_W(
            arena_datum, [100.0], params_g08, AdmissiblePair(2, 1), cfg
        )
    low_gamma = ModelParams(3, 1.0, 0.4, 1.0)
    with pytest.raises(ParameterError):
        wave_operator_W(arena_datum, [100.0], low_gamma, pair22, cfg)


def test_wave_operator_warns_below_heuristic_window(arena, params_g08, pair22, arena_datum):
    cfg = small_config(5.0, 20.0)
    with pytest.warns(UserWarning, match="heuristic"):
        wave_operator_W(arena_datum, [10.0, 20.0], params_g08, pair22, cfg)


def test_limit_fields_stable_under_grid_doubling(params_g08, pair22):
    # discretization-refinement check on the constructed solution
    fields = {}
    for N in (32, 64):
        grid = GridSpec(3, N, 16.0)
        shape = np.exp(-grid.radius_squared() / (2.0 * 1.5**2))
        datum = AsymptoticDatum(ComplexField(grid, 0.0173 * shape))
        cfg = IntegratorConfig(
            sample_times=geometric_sample_grid(200.0, 400.0, 2.0**0.5), rel_dt_cap=0.05
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            run = wave_operator_W(datum, [400.0], params_g08, pair22, cfg)
        fields[N] = run.limit.snapshots[0]["w_hat"] / N**3  # trig coefficients
    coarse, fine = fields[32], fields[64]
    # compare on the band both grids resolve (inside the coarse 2/3 mask,
    # where the band-limited data of both runs genuinely live)
    keep = np.array([m for m in range(-10, 11)])
    sub_f = fine[np.ix_(keep, keep, keep)]
    sub_c = coarse[np.ix_(keep, keep, keep)]
    rel = np.linalg.norm(sub_f - sub_c) / np.linalg.norm(sub_c)
    assert rel < 1e-4


def test_extraction_trivial_and_static(arena, params_g08, pair22, arena_datum):
    # synthetic record: w frozen at w+, s = 0; every correction integral is 0
    from hartreelab.dynamics import TrajectoryRecord

    rec = TrajectoryRecord(pair=pair22, grid=arena)
    w_hat = fftn(arena_datum.w_plus.values)
    for t in (100.0, 200.0, 400.0):
        rec.ts.append(t)
        rec.snapshots.append(
            {"t": t, "w_hat": w_hat.copy(), "s_hat": np.zeros((3,) + arena.shape, complex), "phi_hat": None}
        )
    w_rec, proxy = extract_w_plus(rec, params_g08, pair22)
    assert np.max(np.abs(w_rec.values - arena_datum.w_plus.values)) <= 1e-13
    assert proxy <= 1e-13
    fields, tail = extract_s0(rec, w_rec, params_g08, pair22, [100.0])
    assert np.max(np.abs(fields[0][1].components)) <= 1e-14
    assert tail <= 1e-14


def test_extraction_correction_small_on_free_profile(arena, params_g08, pair22, arena_datum):
    # w frozen at w+ and s on the simple free profile: the coupling difference
    # cancels exactly and only the quadratic transport correction survives
    from hartreelab.dynamics import TrajectoryRecord

    rec = TrajectoryRecord(pair=pair22, grid=arena)
    w_hat = fftn(arena_datum.w_plus.values)
    phased = AsymptoticDatum(
        arena_datum.w_plus,
        RealField(arena, 0.2 * np.exp(-arena.radius_squared() / (2.0 * 2.5**2))),
    )
    ts = geometric_sample_grid(100.0, 1600.0)
    for t in ts:
        s = s02_of_t(phased, t, params_g08)
        rec.ts.append(t)
        rec.snapshots.append(
            {
                "t": t,
                "w_hat": w_hat.copy(),
                "s_hat": np.stack([fftn(s.components[i]) for i in range(3)]),
                "phi_hat": None,
            }
        )
    fields, _ = extract_s0(rec, arena_datum.w_plus, params_g08, pair22, [ts[0]])
    t0, s0_rec = fields[0]
    s_seed = s02_of_t(phased, t0, params_g08)
    corr = VectorField(arena, s0_rec.components - s_seed.components)
    assert x_norm(corr, pair22.ell) <= 1e-3 * x_norm(s_seed, pair22.ell)


def test_gauge_transform_structure(arena, params_g08, arena_datum):
    sigma = RealField(arena, 0.3 * np.exp(-arena.radius_squared() / (2.0 * 4.0**2)))
    out = gauge_transform(arena_datum, GaugeFunction(sigma))
    assert np.max(np.abs(np.abs(out.w_plus.values) - np.abs(arena_datum.w_plus.values))) <= 1e-14
    g_base = g0(arena_datum.w_plus, arena_datum.w_plus, params_g08)
    g_new = g0(out.w_plus, out.w_plus, params_g08)
    assert np.max(np.abs(g_base.values - g_new.values)) <= 1e-12

    ident = gauge_transform(arena_datum, GaugeFunction(RealField.zero(arena)))
    assert np.max(np.abs(ident.w_plus.values - arena_datum.w_plus.values)) <= 1e-14

    const = gauge_transform(arena_datum, GaugeFunction(RealField(arena, 0.7 * np.ones(arena.shape))))
    want = np.exp(0.7j) * arena_datum.w_plus.values
    assert np.max(np.abs(const.w_plus.values - want)) <= 1e-14
    assert np.max(np.abs(const.phi02_at_1.values - 0.7)) <= 1e-14


def test_phi_map_unitary(arena, params_g08, arena_datum):
    st = seed_at_t0(arena_datum, 1.0e8, params_g08)
    v = phi_map(st)
    assert abs(lr_norm(v, 2) - lr_norm(st.w, 2)) <= 1e-12 * lr_norm(st.w, 2)
    # with zero phase and enormous t, v is the amplitude itself
    st_flat = AuxState(1.0e8, arena_datum.w_plus, VectorField.zero(arena), RealField.zero(arena))
    v_flat = phi_map(st_flat)
    assert np.max(np.abs(v_flat.values - arena_datum.w_plus.values)) <= 1e-6
    with pytest.raises(ParameterError):
        phi_map(AuxState(10.0, arena_datum.w_plus, VectorField.zero(arena)))


def test_omega_zero_input(arena, params_g08, pair22):
    cfg = small_config(100.0, 400.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        run = omega_map(ComplexField.zero(arena), params_g08, pair22, cfg, schedule=[400.0])
    for _, v in run.v_fields:
        assert np.max(np.abs(v.values)) == 0.0


def test_omega_injectivity_probe(arena, params_g08, pair22, arena_datum):
    # two data differing by a non-constant gauge in w+ only (phases both zero)
    # are NOT gauge equivalent and must stay separated in v-representation
    sigma = 0.5 * np.exp(-arena.radius_squared() / (2.0 * 4.0**2))
    w2 = ComplexField(arena, arena_datum.w_plus.values * np.exp(1j * sigma))
    cfg = small_config(100.0, 1000.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        run1 = omega_map(arena_datum.w_plus, params_g08, pair22, cfg, schedule=[1000.0])
        run2 = omega_map(w2, params_g08, pair22, cfg, schedule=[1000.0])
    sep_in = lr_norm(ComplexField(arena, w2.values - arena_datum.w_plus.values), 2)
    seps = [
        lr_norm(ComplexField(arena, vb.values - va.values), 2)
        for (_, va), (_, vb) in zip(run1.v_fields, run2.v_fields)
    ]
    assert min(seps) >= 0.3 * sep_in


def test_omega1_linear_case(arena, pair22, arena_datum):
    p0 = ModelParams(3, 0.0, 0.8, 1.0)
    cfg = small_config(100.0, 400.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        out = omega1_map(arena_datum.w_plus, p0, pair22, cfg, schedule=[400.0])
    # with lambda = 0 and zero phase the whole chain is the exact multiplier
    t_from = out["from_t"]
    k2 = arena.k_squared()
    w_hat = fftn(arena_datum.w_plus.values)
    v_from = ifftn(np.exp(0.5j / t_from * k2) * np.exp(-0.5j / 400.0 * k2) * w_hat)
    want = ifftn(np.exp(-0.5j * (1.0 / t_from - 1.0) * k2) * fftn(v_from))
    assert np.max(np.abs(out["v_at_1"].values - want)) <= 1e-12
    assert abs(out["mass_at_1"] - out["mass_input"]) <= 1e-8 * out["mass_input"]
    assert out["mass_rel_drift_per_step"] <= 1e-13


def test_gauge_check_invariant_under_constant_shift(arena, params_g08, pair22, arena_datum):
    # adding a global constant to sigma together with the matching constant
    # phase on the datum is pure gauge freedom: the covariance discrepancy
    # must not move by more than a factor of two
    from hartreelab.scattering import gauge_covariance_check

    sigma = RealField(arena, 0.3 * np.exp(-arena.radius_squared() / (2.0 * 4.0**2)))
    cfg = small_config(100.0, 1000.0, rel=0.05)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        base = gauge_covariance_check(
            arena_datum, GaugeFunction(sigma), params_g08, pair22, cfg, t0_limit=1.0e4
        )
        shifted_datum = gauge_transform(
            arena_datum, GaugeFunction(RealField(arena, 0.9 * np.ones(arena.shape)))
        )
        shifted = gauge_covariance_check(
            shifted_datum, GaugeFunction(sigma), params_g08, pair22, cfg, t0_limit=1.0e4
        )
    d1, d2 = np.max(base["v_discrepancy"]), np.max(shifted["v_discrepancy"])
    assert 0.5 <= (d2 + 1e-300) / (d1 + 1e-300) <= 2.0


def test_empty_suite_selection_gives_empty_table():
    from hartreelab.acceptance import AcceptanceConfig, run_acceptance_suite

    verdicts, _ = run_acceptance_suite(AcceptanceConfig(suites=()))
    assert verdicts == []


def test_omega1_rejects_large_mu(arena, params_g08, pair22, arena_datum):
    p_bad = ModelParams(3, 1.0, 0.8, 2.5)
    cfg = small_config(100.0, 400.0)
    with pytest.raises(ParameterError):
        omega1_map(arena_datum.w_plus, p_bad, pair22, cfg)
