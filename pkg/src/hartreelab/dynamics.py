"""Time integration of the auxiliary amplitude/phase system.

The state is (w, s, phi) with s = grad(phi) propagated by

    dw/dt   = (2 t^2)^(-1) U(1/t) ( 2 s . grad + (div s) ) U*(1/t) w
    ds/dt   = t^(-2) (s . grad) s + t^(-gamma) grad g0(U*(1/t) w)
    dphi/dt = (2 t^2)^(-1) |s|^2 + t^(-gamma) g0(U*(1/t) w)

For real s the transport generator 2 s.grad + (div s) is skew-adjoint, so the
L2 mass of w is a continuum invariant; with 2/3-rule de-aliased products and
band-limited states the semi-discretization inherits it to round-off.  The
curl of s and the gap s - grad(phi) are transported quantities that vanish
identically when seeded at zero; both are monitored.

Stepping is classical RK4 with dt = cfl * min(dt_base, t^2 h / (1 + |s|_inf),
rel_dt_cap * t); the last term makes steps grow linearly in t, which is what
makes seeds at t0 ~ 1e6 affordable.  An optional viscosity eta adds
eta t^(-2) Laplacian to the w and s equations, applied as an exact spectral
integrating factor around each step.

A separate exact split-step scheme (`rescaled_nls_step`) evolves the
gauge-invariant representative v = exp(-i phi) U*(1/t) w by its own equation

    i dv/dt = -(2 t^2)^(-1) Laplacian v + t^(-gamma) g0(v, v) v

and `cross_check_gauge` confronts the two discretizations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .grids import ComplexField, GridSpec, RealField, VectorField, grid_arrays
from .model import AdmissiblePair, ModelParams
from .spectral import (
    fftn,
    ifftn,
    l2_norm_hat,
    riesz_symbol,
    sobolev_norm_hat,
    x_norm_hat,
)

CSV_COLUMNS = (
    "t",
    "mass",
    "norm_w_k",
    "norm_w_km1",
    "norm_s_l",
    "norm_s_lm1",
    "vort_max",
    "grad_gap",
    "err_w_plus_k",
    "err_s0_l",
    "err_s02_l",
    "err_prof_dollard",
    "err_prof_refined",
)


@dataclass
class AuxState:
    """One time slice (t, w, s, phi) of the auxiliary system."""

    t: float
    w: ComplexField
    s: VectorField
    phi: RealField | None = None

    def __post_init__(self):
        if not self.t > 0.0:
            raise ParameterError(f"auxiliary state needs t > 0, got {self.t}")
        if self.w.grid != self.s.grid:
            raise ParameterError("w and s live on different grids")
        if self.phi is not None and self.phi.grid != self.w.grid:
            raise ParameterError("phi lives on a different grid")


@dataclass(frozen=True)
class IntegratorConfig:
    dt_base: float = 1e9
    cfl_safety: float = 0.9
    eta: float = 0.0
    sample_times: tuple = ()
    tol_grad: float = 1e-6
    tol_vort: float = 1e-6
    rel_dt_cap: float = 0.05
    blowup_factor: float = 1e6
    track_phase: bool = True

    def __post_init__(self):
        if not self.dt_base > 0.0:
            raise ParameterError("dt_base must be positive")
        if not (0.0 < self.cfl_safety <= 1.0):
            raise ParameterError("cfl_safety must lie in (0, 1]")
        if self.eta < 0.0:
            raise ParameterError("viscosity eta must be >= 0")
        ts = tuple(self.sample_times)
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ParameterError("sample_times must be strictly increasing")


@dataclass
class TrajectoryRecord:
    """Sampled diagnostics (and optional spectral snapshots) of one run."""

    pair: AdmissiblePair
    grid: GridSpec
    ts: list = field(default_factory=list)
    columns: dict = field(default_factory=dict)
    snapshots: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    failed: bool = False
    failure_reason: str = ""

    def __post_init__(self):
        for name in CSV_COLUMNS[1:]:
            self.columns.setdefault(name, [])

    def series(self, name: str) -> np.ndarray:
        return np.asarray(self.columns[name], dtype=float)

    def sample_times(self) -> np.ndarray:
        return np.asarray(self.ts, dtype=float)

    def sort_by_time(self):
        order = np.argsort(self.ts)
        self.ts = [self.ts[i] for i in order]
        for name, col in self.columns.items():
            self.columns[name] = [col[i] for i in order]
        if self.snapshots:
            self.snapshots = [self.snapshots[i] for i in order]

    def to_csv(self) -> str:
        rows = [",".join(CSV_COLUMNS)]
        for i, t in enumerate(self.ts):
            cells = [f"{t:.17g}"]
            for name in CSV_COLUMNS[1:]:
                col = self.columns[name]
                v = col[i] if i < len(col) else None
                cells.append("" if v is None or (isinstance(v, float) and math.isnan(v)) else f"{v:.17g}")
            rows.append(",".join(cells))
        return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# right-hand side on raw spectral arrays
# ---------------------------------------------------------------------------


def _aux_rhs_hat(grid: GridSpec, params: ModelParams, t: float, w_hat, s_hat, track_phase):
    """Spectral RHS; returns (dw_hat, ds_hat, dphi_hat, |s|_inf)."""
    arrs = grid_arrays(grid)
    ks, k2, mask = arrs["k"], arrs["k2"], arrs["dealias"]
    n = grid.n
    half_phase = np.exp(0.5j / t * k2)

    wt_hat = half_phase * w_hat  # U*(1/t) w
    wt = ifftn(wt_hat)
    grad_wt = [ifftn(1j * ks[i] * wt_hat) for i in range(n)]

    s_phys = [ifftn(s_hat[i]).real for i in range(n)]
    div_s = ifftn(sum(1j * ks[i] * s_hat[i] for i in range(n))).real

    transport = div_s * wt
    for i in range(n):
        transport = transport + 2.0 * s_phys[i] * grad_wt[i]
    dw_hat = (0.5 / t**2) * np.conj(half_phase) * (mask * fftn(transport))

    ds_hat = np.empty_like(s_hat)
    grad_s = [[ifftn(1j * ks[j] * s_hat[i]).real for j in range(n)] for i in range(n)]
    g_hat = params.lam * riesz_symbol(grid, params.mu) * (mask * fftn(np.abs(wt) ** 2))
    tm2, tmg = t**-2.0, t**-params.gamma
    for i in range(n):
        conv = s_phys[0] * grad_s[i][0]
        for j in range(1, n):
            conv = conv + s_phys[j] * grad_s[i][j]
        ds_hat[i] = tm2 * (mask * fftn(conv)) + tmg * (1j * ks[i] * g_hat)

    dphi_hat = None
    if track_phase:
        s_sq = s_phys[0] ** 2
        for j in range(1, n):
            s_sq = s_sq + s_phys[j] ** 2
        dphi_hat = (0.5 * tm2) * (mask * fftn(s_sq)) + tmg * g_hat

    s_inf = max(float(np.max(np.abs(c))) for c in s_phys)
    return dw_hat, ds_hat, dphi_hat, s_inf


def aux_rhs(state: AuxState, params: ModelParams):
    """Public RHS: returns (dw, ds, dphi) as fields."""
    grid = state.w.grid
    w_hat = fftn(state.w.values)
    s_hat = np.stack([fftn(state.s.components[i]) for i in range(grid.n)])
    dw_hat, ds_hat, dphi_hat, _ = _aux_rhs_hat(grid, params, state.t, w_hat, s_hat, True)
    dw = ComplexField(grid, ifftn(dw_hat))
    ds = VectorField(grid, np.stack([ifftn(ds_hat[i]).real for i in range(grid.n)]))
    dphi = RealField(grid, ifftn(dphi_hat).real)
    return dw, ds, dphi


# ---------------------------------------------------------------------------
# monitors
# ---------------------------------------------------------------------------


def _vorticity_max_hat(grid: GridSpec, s_hat) -> float:
    ks = grid_arrays(grid)["k"]
    worst = 0.0
    for i in range(grid.n):
        for j in range(i + 1, grid.n):
            curl = ifftn(1j * ks[i] * s_hat[j] - 1j * ks[j] * s_hat[i]).real
            worst = max(worst, float(np.max(np.abs(curl))))
    return worst


def _grad_s_inf_hat(grid: GridSpec, s_hat) -> float:
    ks = grid_arrays(grid)["k"]
    worst = 0.0
    for i in range(grid.n):
        for j in range(grid.n):
            worst = max(worst, float(np.max(np.abs(ifftn(1j * ks[j] * s_hat[i]).real))))
    return worst


def vorticity_max(s: VectorField) -> float:
    """max over grid and index pairs of |d_i s_j - d_j s_i|."""
    s_hat = np.stack([fftn(s.components[i]) for i in range(s.grid.n)])
    return _vorticity_max_hat(s.grid, s_hat)


def gradient_gap(s: VectorField, phi: RealField) -> float:
    """max |s - grad phi| over the grid."""
    if s.grid != phi.grid:
        raise ParameterError("s and phi on different grids")
    ks = grid_arrays(s.grid)["k"]
    phi_hat = fftn(phi.values)
    worst = 0.0
    for i in range(s.grid.n):
        gp = ifftn(1j * ks[i] * phi_hat).real
        worst = max(worst, float(np.max(np.abs(s.components[i] - gp))))
    return worst


# ---------------------------------------------------------------------------
# integrator
# ---------------------------------------------------------------------------


def _record_sample(rec, grid, pair, t, w_hat, s_hat, phi_hat, config, observer, keep):
    n = grid.n
    mass = l2_norm_hat(grid, w_hat)
    s_list = [s_hat[i] for i in range(n)]
    s_phys = [ifftn(s_hat[i]).real for i in range(n)]
    vort = _vorticity_max_hat(grid, s_hat)
    dsinf = _grad_s_inf_hat(grid, s_hat)

    gap = float("nan")
    if phi_hat is not None:
        ks = grid_arrays(grid)["k"]
        gap = 0.0
        for i in range(n):
            gp = ifftn(1j * ks[i] * phi_hat).real
            gap = max(gap, float(np.max(np.abs(s_phys[i] - gp))))
        if gap > 10.0 * config.tol_grad * (1.0 + max(np.max(np.abs(c)) for c in s_phys)):
            rec.flags.append(f"gradient-consistency violation at t={t:.6g}")
    if vort > 10.0 * config.tol_vort * (1.0 + dsinf):
        rec.flags.append(f"vorticity violation at t={t:.6g}")

    rec.ts.append(t)
    cols = rec.columns
    cols["mass"].append(mass)
    cols["norm_w_k"].append(sobolev_norm_hat(grid, [w_hat], pair.k))
    cols["norm_w_km1"].append(sobolev_norm_hat(grid, [w_hat], pair.k - 1))
    cols["norm_s_l"].append(x_norm_hat(grid, s_list, s_phys, pair.ell))
    cols["norm_s_lm1"].append(x_norm_hat(grid, s_list, s_phys, pair.ell - 1))
    cols["vort_max"].append(vort)
    cols["grad_gap"].append(gap)
    cols.setdefault("s_sup", []).append(max(float(np.max(np.abs(c))) for c in s_phys))
    cols.setdefault("grad_s_sup", []).append(dsinf)
    for name in CSV_COLUMNS[8:]:
        cols[name].append(float("nan"))
    if keep:
        rec.snapshots.append(
            {
                "t": t,
                "w_hat": w_hat.copy(),
                "s_hat": s_hat.copy(),
                "phi_hat": None if phi_hat is None else phi_hat.copy(),
            }
        )
    if observer is not None:
        extra = observer(t, w_hat, s_hat, phi_hat)
        if extra:
            for name, value in extra.items():
                cols[name][-1] = value


def integrate_aux(
    initial: AuxState,
    t_target: float,
    config: IntegratorConfig,
    params: ModelParams,
    pair: AdmissiblePair = AdmissiblePair(2, 2),
    observer=None,
    keep_snapshots: bool = False,
) -> TrajectoryRecord:
    """Integrate the auxiliary system from initial.t to t_target (either direction)."""
    if not t_target > 0.0:
        raise ParameterError("t_target must be positive")
    grid = initial.w.grid
    arrs = grid_arrays(grid)
    k2 = arrs["k2"]
    track = config.track_phase and initial.phi is not None

    w_hat = fftn(initial.w.values)
    s_hat = np.stack([fftn(initial.s.components[i]) for i in range(grid.n)])
    phi_hat = fftn(initial.phi.values) if track else None

    rec = TrajectoryRecord(pair=pair, grid=grid)
    t = initial.t
    forward = t_target >= t
    sign = 1.0 if forward else -1.0

    stops = [float(x) for x in config.sample_times if min(t, t_target) <= x <= max(t, t_target)]
    stops = sorted(set(stops + [t_target]), reverse=not forward)
    sample_set = set(float(x) for x in config.sample_times)

    guard_w = config.blowup_factor * max(l2_norm_hat(grid, w_hat), 1e-300)
    guard_s = config.blowup_factor * max(
        sum(l2_norm_hat(grid, s_hat[i]) for i in range(grid.n)), 1.0
    )

    if t in sample_set and t not in stops:
        _record_sample(rec, grid, pair, t, w_hat, s_hat, phi_hat, config, observer, keep_snapshots)

    h = grid.h
    _, _, _, s_inf = _aux_rhs_hat(grid, params, t, w_hat, s_hat, False)

    for stop in stops:
        while (stop - t) * sign > 1e-12 * max(t, stop):
            dt_mag = config.cfl_safety * min(
                config.dt_base,
                t * t * h / (1.0 + s_inf),
                config.rel_dt_cap * t,
            )
            dt = sign * min(dt_mag, abs(stop - t))
            t_new = t + dt if abs(stop - t) > dt_mag else stop

            if config.eta > 0.0:
                damp = np.exp(-config.eta * k2 * abs(1.0 / t - 1.0 / t_new))
                w_hat = damp * w_hat
                s_hat = damp[None] * s_hat

            k1 = _aux_rhs_hat(grid, params, t, w_hat, s_hat, track)
            k2_ = _aux_rhs_hat(
                grid, params, t + 0.5 * dt, w_hat + 0.5 * dt * k1[0], s_hat + 0.5 * dt * k1[1], track
            )
            k3 = _aux_rhs_hat(
                grid, params, t + 0.5 * dt, w_hat + 0.5 * dt * k2_[0], s_hat + 0.5 * dt * k2_[1], track
            )
            k4 = _aux_rhs_hat(grid, params, t + dt, w_hat + dt * k3[0], s_hat + dt * k3[1], track)

            w_hat = w_hat + (dt / 6.0) * (k1[0] + 2.0 * k2_[0] + 2.0 * k3[0] + k4[0])
            s_hat = s_hat + (dt / 6.0) * (k1[1] + 2.0 * k2_[1] + 2.0 * k3[1] + k4[1])
            if track:
                phi_hat = phi_hat + (dt / 6.0) * (k1[2] + 2.0 * k2_[2] + 2.0 * k3[2] + k4[2])
            s_inf = k1[3]
            t = t_new

            if l2_norm_hat(grid, w_hat) > guard_w or (
                sum(l2_norm_hat(grid, s_hat[i]) for i in range(grid.n)) > guard_s
            ):
                rec.failed = True
                rec.failure_reason = f"blow-up guard triggered at t={t:.6g}"
                rec.sort_by_time()
                return rec

        if stop in sample_set:
            _record_sample(rec, grid, pair, t, w_hat, s_hat, phi_hat, config, observer, keep_snapshots)

    rec.sort_by_time()
    return rec


def final_state(rec: TrajectoryRecord, params: ModelParams) -> AuxState:
    """Reconstruct the AuxState at the last recorded snapshot time."""
    if not rec.snapshots:
        raise ParameterError("trajectory was run without snapshots")
    snap = rec.snapshots[-1]
    return snapshot_state(rec, snap)


def snapshot_state(rec: TrajectoryRecord, snap: dict) -> AuxState:
    grid = rec.grid
    w = ComplexField(grid, ifftn(snap["w_hat"]))
    s = VectorField(grid, np.stack([ifftn(snap["s_hat"][i]).real for i in range(grid.n)]))
    phi = None if snap["phi_hat"] is None else RealField(grid, ifftn(snap["phi_hat"]).real)
    return AuxState(snap["t"], w, s, phi)


# ---------------------------------------------------------------------------
# rescaled direct solver for the gauge-invariant representative
# ---------------------------------------------------------------------------


def _power_integral(t0: float, t1: float, gamma: float) -> float:
    """integral of tau^(-gamma) over [t0, t1] (gamma != 1)."""
    om = 1.0 - gamma
    return (t1**om - t0**om) / om


def rescaled_nls_step(v: ComplexField, t: float, dt: float, params: ModelParams) -> ComplexField:
    """One Strang step of i v' = -(2t^2)^(-1) Lap v + t^(-gamma) g0(v) v.

    Both substeps are exact: the linear multiplier accumulates the exact
    increment of -1/t, and |v| is invariant during the phase rotation so g0
    is frozen; each substep is unitary and the step conserves mass to
    round-off.
    """
    if not t > 0.0 or not t + dt > 0.0:
        raise ParameterError("rescaled step needs t > 0 and t + dt > 0")
    grid = v.grid
    vals = _rescaled_step_arr(grid, v.values, t, dt, params)
    return ComplexField(grid, vals)


def _rescaled_step_arr(grid: GridSpec, vals: np.ndarray, t: float, dt: float, params: ModelParams):
    arrs = grid_arrays(grid)
    k2, mask = arrs["k2"], arrs["dealias"]
    riesz = riesz_symbol(grid, params.mu)
    tm = t + 0.5 * dt

    half = np.exp(-0.5j * (1.0 / t - 1.0 / tm) * k2)
    vals = ifftn(half * fftn(vals))
    g = ifftn(params.lam * riesz * (mask * fftn(np.abs(vals) ** 2))).real
    vals = vals * np.exp(-1j * g * _power_integral(t, t + dt, params.gamma))
    half = np.exp(-0.5j * (1.0 / tm - 1.0 / (t + dt)) * k2)
    return ifftn(half * fftn(vals))


def evolve_rescaled(
    v0: ComplexField,
    t0: float,
    t1: float,
    params: ModelParams,
    rel_dt_cap: float = 0.02,
    mass_log: list | None = None,
) -> ComplexField:
    """Drive the split-step solver from t0 to t1 with dt = rel_dt_cap * t."""
    grid = v0.grid
    vals = v0.values
    t = t0
    sign = 1.0 if t1 >= t0 else -1.0
    prev_mass = float(np.linalg.norm(vals.ravel()))
    while abs(t1 - t) > 1e-12 * max(t, t1):
        dt = sign * min(rel_dt_cap * t, abs(t1 - t))
        vals = _rescaled_step_arr(grid, vals, t, dt, params)
        t = t1 if abs(t1 - t) <= rel_dt_cap * t else t + dt
        if mass_log is not None:
            m = float(np.linalg.norm(vals.ravel()))
            mass_log.append(abs(m - prev_mass) / prev_mass)
            prev_mass = m
    return ComplexField(grid, vals)


def v_representation_hat(grid: GridSpec, t: float, w_hat, phi_hat) -> np.ndarray:
    """v = exp(-i phi) U*(1/t) w from spectral data, returned in physical space."""
    k2 = grid_arrays(grid)["k2"]
    wt = ifftn(np.exp(0.5j / t * k2) * w_hat)
    phi = ifftn(phi_hat).real
    return wt * np.exp(-1j * phi)


def cross_check_gauge(rec: TrajectoryRecord, params: ModelParams, rel_dt_cap: float = 0.02):
    """Evolve v directly and compare with exp(-i phi) U*(1/t) w along the record.

    Returns (sample times, L2 discrepancies, per-step relative mass drifts).
    """
    if not rec.snapshots:
        raise ParameterError("cross check needs snapshots")
    if rec.snapshots[0]["phi_hat"] is None:
        raise ParameterError("cross check needs the tracked phase")
    grid = rec.grid
    vol = math.sqrt(grid.cell_volume)
    snaps = rec.snapshots
    v = v_representation_hat(grid, snaps[0]["t"], snaps[0]["w_hat"], snaps[0]["phi_hat"])
    ts, discrepancies, mass_steps = [snaps[0]["t"]], [0.0], []
    for prev, cur in zip(snaps, snaps[1:]):
        t = prev["t"]
        target = cur["t"]
        prev_mass = float(np.linalg.norm(v.ravel()))
        while abs(target - t) > 1e-12 * max(t, target):
            dt = min(rel_dt_cap * t, target - t)
            v = _rescaled_step_arr(grid, v, t, dt, params)
            t = target if target - t <= rel_dt_cap * t else t + dt
            m = float(np.linalg.norm(v.ravel()))
            mass_steps.append(abs(m - prev_mass) / prev_mass)
            prev_mass = m
        ref = v_representation_hat(grid, target, cur["w_hat"], cur["phi_hat"])
        ts.append(target)
        discrepancies.append(vol * float(np.linalg.norm((v - ref).ravel())))
    return np.asarray(ts), np.asarray(discrepancies), np.asarray(mass_steps)
