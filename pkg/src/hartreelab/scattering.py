"""Wave-operator constructions for the auxiliary system and the original field.

The Cauchy-at-infinity construction: seed the auxiliary system at a large
time t0 with the free data

    w(t0) = U(1/t0) w_plus,   s(t0) = s02(t0),   phi(t0) = phi02(t0),

integrate into a comparison window J = [T, T_max], and send t0 -> infinity
along a schedule.  Successive trajectories are compared in the lossy norm
H^(k-1) (+) X^(l-1); the final (largest-t0) trajectory is the working limit,
with optional Richardson extrapolation in t0.

The converse maps extract the scattering data back out of a trajectory:
w_plus as the large-time limit of w, and the free profiles through the
correction integrals evaluated on the trajectory's geometric sample grid.

Gauge machinery: data transform as (w+, phi02(1)) -> (w+ e^{i sigma},
phi02(1) + sigma); two such data must produce the same gauge-invariant
representative v = exp(-i phi) U*(1/t) w, and the phase difference of their
trajectories must drift to sigma.  The physical-space field u = M D v is
never sampled on a grid (the dilation maps the grid off itself); every
asymptotic error functional is evaluated through its exact v-representation
identity instead.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ParameterError
from .grids import ComplexField, RealField, VectorField, grid_arrays
from .model import AdmissiblePair, ModelParams, require_admissible
from .profiles import (
    AsymptoticDatum,
    dollard_coefficient,
    phi02_hat_of_t,
    s02_of_t,
    tail_hats_at,
)
from .dynamics import (
    AuxState,
    IntegratorConfig,
    TrajectoryRecord,
    evolve_rescaled,
    integrate_aux,
    v_representation_hat,
)
from .spectral import (
    fftn,
    ifftn,
    l2_norm_hat,
    lr_norm,
    sobolev_norm,
    sobolev_norm_hat,
    x_norm,
    x_norm_hat,
)


def geometric_sample_grid(t_lo: float, t_hi: float, ratio: float = 2.0 ** 0.25) -> tuple:
    """Geometric sample times covering [t_lo, t_hi], endpoints included."""
    if not (0.0 < t_lo < t_hi):
        raise ParameterError("need 0 < t_lo < t_hi")
    ts = [t_lo]
    while ts[-1] * ratio < t_hi * 0.999999:
        ts.append(ts[-1] * ratio)
    ts.append(t_hi)
    return tuple(ts)


@dataclass(frozen=True)
class GaugeFunction:
    """A real gauge function sigma(x)."""

    sigma: RealField


@dataclass
class WaveOpRun:
    """One Cauchy-at-infinity run: per-t0 trajectories and their differences."""

    datum: AsymptoticDatum
    params: ModelParams
    pair: AdmissiblePair
    t0_schedule: tuple
    window: tuple
    sample_ts: tuple
    trajectories: list
    cauchy_t0: np.ndarray
    cauchy_diffs: np.ndarray
    limit: TrajectoryRecord
    diverged: bool = False
    calibration: dict = field(default_factory=dict)
    richardson: dict | None = None


# ---------------------------------------------------------------------------
# seeding
# ---------------------------------------------------------------------------


def heuristic_T(
    datum: AsymptoticDatum,
    params: ModelParams,
    pair: AdmissiblePair,
    c_cal: float = 1.0,
) -> float:
    """Comparison-window start from the size parameters of the datum.

    T = c_cal (2 gamma - 1)^(-2) max( (b + a^2)^(1/gamma), a^4 b^(-2) ) with
    a = |w+|_{k+1} and b the uniform bound on |t^(gamma-1) s02(t)|_{X^{l+1}}.
    The absolute constant in front is non-explicit in the theory, hence the
    calibration knob.
    """
    params.require_scattering()
    a = datum.amplitude_scale(pair.k + 1)
    b = rescaled_profile_bound(datum, params, pair.ell + 1)
    if a == 0.0 and b == 0.0:
        return 1.0
    first = (b + a * a) ** (1.0 / params.gamma)
    second = a**4 / (b * b) if b > 0.0 else first
    return c_cal * (2.0 * params.gamma - 1.0) ** (-2.0) * max(first, second)


def rescaled_profile_bound(datum: AsymptoticDatum, params: ModelParams, ell: int) -> float:
    """sup over t >= 1 of |t^(gamma-1) s02(t); X^ell|, probed geometrically.

    t^(gamma-1) s02(t) interpolates between s02(1) and (1-gamma)^(-1) grad g0,
    so a coarse geometric probe plus the endpoint captures the supremum.
    """
    grid = datum.grid
    ks = grid_arrays(grid)["k"]
    g_hat = datum.g0_ref_hat(params)
    phi1_hat = datum.phi02_at_1_hat()

    def profile_norm(t: float) -> float:
        lam_t = t ** (params.gamma - 1.0)
        hat = lam_t * phi1_hat + lam_t * dollard_coefficient(t, params.gamma) * g_hat
        comps = np.stack([ifftn(1j * ks[i] * hat).real for i in range(grid.n)])
        return x_norm(VectorField(grid, comps), ell)

    best = 0.0
    t = 1.0
    for _ in range(22):
        best = max(best, profile_norm(t))
        t *= 4.0
    # t -> infinity endpoint
    hat_inf = g_hat / (1.0 - params.gamma)
    comps = np.stack([ifftn(1j * ks[i] * hat_inf).real for i in range(grid.n)])
    return max(best, x_norm(VectorField(grid, comps), ell))


def seed_at_t0(datum: AsymptoticDatum, t0: float, params: ModelParams) -> AuxState:
    """Free data at time t0: w = U(1/t0) w+, s = s02(t0), phi = phi02(t0)."""
    if not t0 >= 1.0:
        raise ParameterError("seed time must satisfy t0 >= 1")
    grid = datum.grid
    k2 = grid_arrays(grid)["k2"]
    w_vals = ifftn(np.exp(-0.5j / t0 * k2) * datum.w_plus_hat())
    w = ComplexField(grid, w_vals)
    s = s02_of_t(datum, t0, params)
    phi_hat = phi02_hat_of_t(datum, t0, params)
    phi = RealField(grid, ifftn(phi_hat).real)
    return AuxState(t0, w, s, phi)


# ---------------------------------------------------------------------------
# the wave operator W for the auxiliary system
# ---------------------------------------------------------------------------


def _two_sided_trajectory(
    datum, t0, params, pair, config, t_max, keep_snapshots, observer=None
) -> TrajectoryRecord:
    """Seed at t0 and cover [window-start, t_max] in one merged record."""
    seed = seed_at_t0(datum, t0, params)
    t_lo = min(config.sample_times) if config.sample_times else t_max
    rec = integrate_aux(seed, t_lo, config, params, pair, observer, keep_snapshots)
    if rec.failed:
        return rec
    if t_max > t0:
        up_samples = tuple(x for x in config.sample_times if x > t0)
        if up_samples:
            up_config = replace(config, sample_times=up_samples)
            up = integrate_aux(seed, t_max, up_config, params, pair, observer, keep_snapshots)
            rec.ts += up.ts
            for name in rec.columns:
                rec.columns[name] += up.columns[name]
            rec.snapshots += up.snapshots
            rec.flags += up.flags
            rec.failed, rec.failure_reason = up.failed, up.failure_reason
            rec.sort_by_time()
    return rec


def _cauchy_difference(rec_a, rec_b, pair, window) -> float:
    """sup over shared samples in the window of |dw|_(k-1) + |ds|_(l-1)."""
    grid = rec_a.grid
    by_t = {s["t"]: s for s in rec_b.snapshots}
    worst = 0.0
    for snap in rec_a.snapshots:
        t = snap["t"]
        if t not in by_t or not (window[0] <= t <= window[1]):
            continue
        other = by_t[t]
        dw = snap["w_hat"] - other["w_hat"]
        ds = snap["s_hat"] - other["s_hat"]
        ds_list = [ds[i] for i in range(grid.n)]
        ds_phys = [ifftn(ds[i]).real for i in range(grid.n)]
        val = sobolev_norm_hat(grid, [dw], pair.k - 1) + x_norm_hat(
            grid, ds_list, ds_phys, pair.ell - 1
        )
        worst = max(worst, val)
    return worst


def wave_operator_W(
    datum: AsymptoticDatum,
    schedule,
    params: ModelParams,
    pair: AdmissiblePair,
    config: IntegratorConfig,
    t_max: float | None = None,
    keep_snapshots: bool = True,
    limit_observer=None,
    richardson: bool = False,
    c_cal: float = 1.0,
    max_retries: int = 4,
    stream_diffs: bool = False,
) -> WaveOpRun:
    """Cauchy-at-infinity construction along a t0 schedule.

    For each t0, seed and integrate backward to the window start and forward
    to t_max; record trajectories and the successive Cauchy differences over
    the comparison window.  Non-decreasing differences raise the divergence
    flag.  If the first two differences fail to decrease the window start is
    doubled and the run retried (the theory's constants are non-explicit).
    """
    params.require_scattering()
    require_admissible(params.n, params.mu, pair)
    schedule = tuple(sorted(float(x) for x in schedule))
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ParameterError("t0 schedule must be strictly increasing")
    if not config.sample_times:
        raise ParameterError("config.sample_times must cover the comparison window")
    t_lo = min(config.sample_times)
    t_hi = max(config.sample_times)
    t_max = t_max if t_max is not None else t_hi

    T_heur = heuristic_T(datum, params, pair, c_cal)
    if schedule[0] < T_heur:
        warnings.warn(
            f"schedule starts at {schedule[0]:.3g} below the heuristic window "
            f"start {T_heur:.3g}; proceeding on user override",
            stacklevel=2,
        )

    window = (t_lo, t_max)
    retries = 0
    while True:
        trajectories = []
        diffs = []
        prev = None
        need_diffs = len(schedule) > 1
        for i, t0 in enumerate(schedule):
            is_last = i == len(schedule) - 1
            rec = _two_sided_trajectory(
                datum,
                t0,
                params,
                pair,
                config,
                t_max,
                keep_snapshots or need_diffs,
                observer=limit_observer if is_last else None,
            )
            if prev is not None:
                diffs.append(_cauchy_difference(prev, rec, pair, window))
                if stream_diffs:
                    prev.snapshots = []
            trajectories.append(rec)
            prev = rec
        if not keep_snapshots and trajectories:
            trajectories[-1].snapshots = []
        diffs = np.asarray(diffs)

        needs_retry = len(diffs) >= 2 and not diffs[1] < diffs[0]
        if needs_retry and retries < max_retries:
            retries += 1
            new_lo = 2.0 * min(config.sample_times)
            keep = tuple(x for x in config.sample_times if x >= new_lo)
            if len(keep) < 2 or new_lo >= schedule[0]:
                break
            config = replace(config, sample_times=keep)
            window = (new_lo, t_max)
            continue
        break

    diverged = bool(len(diffs) and np.any(np.diff(diffs) >= 0.0))
    run = WaveOpRun(
        datum=datum,
        params=params,
        pair=pair,
        t0_schedule=schedule,
        window=window,
        sample_ts=tuple(config.sample_times),
        trajectories=trajectories,
        cauchy_t0=np.asarray(schedule[:-1]),
        cauchy_diffs=diffs,
        limit=trajectories[-1],
        diverged=diverged,
        calibration={"c_cal": c_cal, "heuristic_T": T_heur, "retries": retries},
    )
    if richardson and len(trajectories) >= 2:
        run.richardson = _richardson_limit(run)
    return run


def _richardson_limit(run: WaveOpRun) -> dict:
    """Extrapolate the two largest-t0 trajectories in t0^(-min(gamma, 1/2)).

    With errors ~ t0^(-p): f_lim = f_b + (f_b - f_a) / ((tb/ta)^p - 1).
    """
    p = min(run.params.gamma, 0.5)
    ta, tb = run.t0_schedule[-2], run.t0_schedule[-1]
    gain = 1.0 / ((tb / ta) ** p - 1.0)
    by_t = {s["t"]: s for s in run.trajectories[-2].snapshots}
    fields = {}
    for snap in run.limit.snapshots:
        t = snap["t"]
        if t not in by_t:
            continue
        prev = by_t[t]
        fields[t] = {
            "w_hat": snap["w_hat"] + gain * (snap["w_hat"] - prev["w_hat"]),
            "s_hat": snap["s_hat"] + gain * (snap["s_hat"] - prev["s_hat"]),
        }
    return {"exponent": p, "gain": gain, "fields": fields}


# ---------------------------------------------------------------------------
# extraction of asymptotic data from a trajectory
# ---------------------------------------------------------------------------


def extract_w_plus(rec: TrajectoryRecord, params: ModelParams, pair: AdmissiblePair):
    """w+ as w at the last sample, with proxy error |w(t) - w(t/2)|_(k-1)."""
    if not rec.snapshots:
        raise ParameterError("extraction needs snapshots")
    last = rec.snapshots[-1]
    t_max = last["t"]
    half = min(rec.snapshots, key=lambda s: abs(s["t"] - 0.5 * t_max))
    proxy = sobolev_norm_hat(rec.grid, [last["w_hat"] - half["w_hat"]], pair.k - 1)
    return ComplexField(rec.grid, ifftn(last["w_hat"])), proxy


def _extraction_integrand_hat(grid, params, snap, w_plus_hat):
    """tau^(-2) (s.grad)s + tau^(-gamma) grad[g0(U*(1/tau)w) - g0(U*(1/tau)w+)]."""
    from .model import g0_hat

    arrs = grid_arrays(grid)
    ks, k2, mask = arrs["k"], arrs["k2"], arrs["dealias"]
    n = grid.n
    tau = snap["t"]
    s_hat = snap["s_hat"]
    s_phys = [ifftn(s_hat[i]).real for i in range(n)]
    half = np.exp(0.5j / tau * k2)
    v = ifftn(half * snap["w_hat"])
    v_plus = ifftn(half * w_plus_hat)
    dg = g0_hat(grid, v, v, params) - g0_hat(grid, v_plus, v_plus, params)
    out = np.empty((n,) + grid.shape, dtype=np.complex128)
    tgam = tau ** (-params.gamma)
    for i in range(n):
        conv = s_phys[0] * ifftn(1j * ks[0] * s_hat[i]).real
        for j in range(1, n):
            conv = conv + s_phys[j] * ifftn(1j * ks[j] * s_hat[i]).real
        out[i] = tau**-2.0 * (mask * fftn(conv)) + tgam * (1j * ks[i] * dg)
    return out


def extract_s0(
    rec: TrajectoryRecord,
    w_plus: ComplexField,
    params: ModelParams,
    pair: AdmissiblePair,
    eval_ts=None,
):
    """Refined free profile along the trajectory via the correction integral.

    s0(t) = s(t) + int_t^{T_max} { tau^(-2)(s.grad)s
                                   + tau^(-gamma) grad[g0(U*w) - g0(U*w+)] } dtau
    evaluated by the trapezoid rule on the trajectory's geometric sample grid,
    plus a reported tail bound for the part beyond T_max.

    Returns (list of (t, VectorField), tail_bound).
    """
    if not rec.snapshots:
        raise ParameterError("extraction needs snapshots")
    grid = rec.grid
    n = grid.n
    w_plus_hat = fftn(w_plus.values)
    snaps = rec.snapshots
    ts = [s["t"] for s in snaps]
    integrands = [_extraction_integrand_hat(grid, params, s, w_plus_hat) for s in snaps]

    # cumulative integral from each sample up to T_max (reverse accumulation)
    cumint = [np.zeros((n,) + grid.shape, dtype=np.complex128)]
    for j in range(len(ts) - 1, 0, -1):
        seg = 0.5 * (ts[j] - ts[j - 1]) * (integrands[j] + integrands[j - 1])
        cumint.append(cumint[-1] + seg)
    cumint = cumint[::-1]

    tail_bound = (
        sum(l2_norm_hat(grid, integrands[-1][i]) for i in range(n))
        * ts[-1]
        / (2.0 * params.gamma - 1.0)
    )

    eval_ts = list(ts) if eval_ts is None else [float(t) for t in eval_ts]
    out = []
    for t in eval_ts:
        j = min(range(len(ts)), key=lambda i: abs(ts[i] - t))
        comps = np.stack(
            [ifftn(snaps[j]["s_hat"][i] + cumint[j][i]).real for i in range(n)]
        )
        out.append((t, VectorField(grid, comps)))
    return out, tail_bound


def extract_s02(
    rec: TrajectoryRecord,
    w_plus: ComplexField,
    params: ModelParams,
    pair: AdmissiblePair,
    eval_ts=None,
    tol: float = 1e-8,
):
    """Simple free profile along the trajectory: s0 plus the conversion tail."""
    s0_fields, tail_bound = extract_s0(rec, w_plus, params, pair, eval_ts)
    grid = rec.grid
    datum = AsymptoticDatum(w_plus)
    ts = [t for t, _ in s0_fields]
    tails = tail_hats_at(datum, ts, params, pair.k, tol)
    ks = grid_arrays(grid)["k"]
    out = []
    for (t, s0f), tail in zip(s0_fields, tails):
        grad_tail = np.stack([ifftn(1j * ks[i] * tail).real for i in range(grid.n)])
        out.append((t, VectorField(grid, s0f.components - grad_tail)))
    return out, tail_bound


def round_trip_check(
    datum: AsymptoticDatum,
    params: ModelParams,
    pair: AdmissiblePair,
    config: IntegratorConfig,
    t0_limit: float = 1.0e6,
    t_eval: float | None = None,
) -> dict:
    """Construct the limit solution from the datum, then recover the datum.

    Reports relative discrepancies of the recovered w+ in H^(k-1) and of the
    recovered s02(1) in X^(l-1) against the seeding data.
    """
    params.require_scattering()
    run = wave_operator_W(datum, [t0_limit], params, pair, config, keep_snapshots=True)
    rec = run.limit
    w_rec, proxy = extract_w_plus(rec, params, pair)
    t_eval = t_eval if t_eval is not None else min(config.sample_times)
    s02_fields, tail_bound = extract_s02(rec, w_rec, params, pair, [t_eval])
    _, s02_at_teval = s02_fields[0]

    # pull the recovered profile back to t = 1 through the closed form
    grid = datum.grid
    rec_datum = AsymptoticDatum(w_rec)
    g_hat = rec_datum.g0_ref_hat(params)
    ks = grid_arrays(grid)["k"]
    coef = dollard_coefficient(t_eval, params.gamma)
    grad_g = np.stack([ifftn(1j * ks[i] * coef * g_hat).real for i in range(grid.n)])
    s02_at_1 = VectorField(grid, s02_at_teval.components - grad_g)

    w_ref = datum.w_plus
    s_ref = datum.s02_at_1()
    dw = ComplexField(grid, w_rec.values - w_ref.values)
    ds = VectorField(grid, s02_at_1.components - s_ref.components)
    w_scale = sobolev_norm(w_ref, pair.k - 1)
    s_scale = x_norm(s_ref, pair.ell - 1)
    return {
        "w_rel_err": sobolev_norm(dw, pair.k - 1) / w_scale if w_scale > 0 else sobolev_norm(dw, pair.k - 1),
        "s02_rel_err": x_norm(ds, pair.ell - 1) / s_scale if s_scale > 0 else x_norm(ds, pair.ell - 1),
        "w_proxy": proxy,
        "s0_tail_bound": tail_bound,
        "run": run,
        "recovered_w_plus": w_rec,
        "recovered_s02_at_1": s02_at_1,
    }


# ---------------------------------------------------------------------------
# gauge transformations and covariance
# ---------------------------------------------------------------------------


def gauge_transform(datum: AsymptoticDatum, gauge: GaugeFunction) -> AsymptoticDatum:
    """(w+, phi02(1)) -> (w+ exp(i sigma), phi02(1) + sigma).

    The transformed amplitude keeps |w+| pointwise, so g0 is invariant; to
    preserve that exactly the product is not re-band-limited (the acceptance
    gauge fields are chosen smooth enough that the leakage is negligible).
    """
    grid = datum.grid
    if gauge.sigma.grid != grid:
        raise ParameterError("gauge function on a different grid")
    w_new = datum.w_plus.values * np.exp(1j * gauge.sigma.values)
    phi1 = datum.phi02_at_1.values if datum.phi02_at_1 is not None else 0.0
    return AsymptoticDatum(
        ComplexField(grid, w_new),
        RealField(grid, phi1 + gauge.sigma.values),
        band_limit=False,
    )


def phi_map(state: AuxState) -> ComplexField:
    """The gauge-invariant representative v = exp(-i phi) U*(1/t) w.

    The physical field is u = M D v; the dilation never touches the grid.
    """
    if state.phi is None:
        raise ParameterError("phi_map needs the tracked phase")
    grid = state.w.grid
    k2 = grid_arrays(grid)["k2"]
    wt = ifftn(np.exp(0.5j / state.t * k2) * fftn(state.w.values))
    return ComplexField(grid, np.exp(-1j * state.phi.values) * wt)


def gauge_covariance_check(
    datum: AsymptoticDatum,
    gauge: GaugeFunction,
    params: ModelParams,
    pair: AdmissiblePair,
    config: IntegratorConfig,
    t0_limit: float = 1.0e6,
) -> dict:
    """Run the construction on a datum and its gauge transform and compare.

    Returns the sup of the v-representation discrepancy over the samples, the
    drift series |(phi' - phi)(t) - sigma|_inf, and the reference mass.
    """
    params.require_scattering()
    datum2 = gauge_transform(datum, gauge)
    run1 = wave_operator_W(datum, [t0_limit], params, pair, config, keep_snapshots=True)
    run2 = wave_operator_W(datum2, [t0_limit], params, pair, config, keep_snapshots=True)
    grid = datum.grid
    vol = math.sqrt(grid.cell_volume)
    by_t = {s["t"]: s for s in run2.limit.snapshots}
    ts, v_disc, drift = [], [], []
    for snap in run1.limit.snapshots:
        t = snap["t"]
        if t not in by_t:
            continue
        other = by_t[t]
        v1 = v_representation_hat(grid, t, snap["w_hat"], snap["phi_hat"])
        v2 = v_representation_hat(grid, t, other["w_hat"], other["phi_hat"])
        dphi = ifftn(other["phi_hat"] - snap["phi_hat"]).real
        ts.append(t)
        v_disc.append(vol * float(np.linalg.norm((v2 - v1).ravel())))
        drift.append(float(np.max(np.abs(dphi - gauge.sigma.values))))
    mass = run1.limit.series("mass")
    return {
        "ts": np.asarray(ts),
        "v_discrepancy": np.asarray(v_disc),
        "phase_drift": np.asarray(drift),
        "mass_scale": float(mass[0]) if len(mass) else 0.0,
        "runs": (run1, run2),
    }


# ---------------------------------------------------------------------------
# the full maps for the original field
# ---------------------------------------------------------------------------


@dataclass
class OmegaRun:
    """The constructed solution in v-representation with all diagnostics."""

    datum: AsymptoticDatum
    params: ModelParams
    pair: AdmissiblePair
    wave: WaveOpRun
    v_fields: list


def omega_map(
    u_plus_fourier: ComplexField,
    params: ModelParams,
    pair: AdmissiblePair,
    config: IntegratorConfig,
    schedule=None,
    t_max: float | None = None,
    limit_observer=None,
    keep_snapshots: bool = True,
) -> OmegaRun:
    """The modified wave operator: datum (Fu+, 0), then W, then the v-map."""
    params.require_scattering()
    require_admissible(params.n, params.mu, pair)
    datum = AsymptoticDatum(u_plus_fourier, None)
    schedule = schedule if schedule is not None else [1.0e6]
    run = wave_operator_W(
        datum,
        schedule,
        params,
        pair,
        config,
        t_max=t_max,
        keep_snapshots=keep_snapshots,
        limit_observer=limit_observer,
    )
    grid = datum.grid
    v_fields = []
    for snap in run.limit.snapshots:
        v = v_representation_hat(grid, snap["t"], snap["w_hat"], snap["phi_hat"])
        v_fields.append((snap["t"], ComplexField(grid, v)))
    return OmegaRun(datum=datum, params=params, pair=pair, wave=run, v_fields=v_fields)


def omega1_map(
    u_plus_fourier: ComplexField,
    params: ModelParams,
    pair: AdmissiblePair,
    config: IntegratorConfig,
    schedule=None,
    rel_dt_cap: float = 0.02,
) -> dict:
    """Continue the constructed solution down to t = 1 in v-representation.

    Needs mu < 2 (global solvability at finite times); returns v(1), whose
    physical counterpart is u(1) = M(1) D(1) v(1).
    """
    if not params.mu < 2.0:
        raise ParameterError(f"omega1 needs mu < 2, got mu={params.mu}")
    run = omega_map(u_plus_fourier, params, pair, config, schedule)
    if not run.v_fields:
        raise ParameterError("omega run produced no samples")
    t_start, v_start = run.v_fields[0]
    mass_log: list = []
    v1 = evolve_rescaled(v_start, t_start, 1.0, params, rel_dt_cap, mass_log)
    return {
        "v_at_1": v1,
        "from_t": t_start,
        "mass_rel_drift_per_step": max(mass_log) if mass_log else 0.0,
        "mass_at_1": lr_norm(v1, 2),
        "mass_input": lr_norm(run.datum.w_plus, 2),
        "omega": run,
    }
