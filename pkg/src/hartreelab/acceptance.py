"""Orchestration of the acceptance experiments into a verdict table.

Default arena: n = 3, mu = 1, (k, l) = (2, 2), 32^3 grid with half-width 16,
a real Gaussian datum normalized to |w+|_{k+1} = 1/2, coupling lambda = +1
(the round trip also exercises lambda = 0, and the sign enters only through
ModelParams).  The constructed solutions are seeded at t0 = 4e6 and fitted
over t in [1e2, 1e4]; Cauchy-in-t0 convergence uses the schedule
{100, 200, 400, 800}; robustness reruns double the box (16 -> 32 at fixed
spacing) and switch on the viscosity eta = 1e-5.

Every claim lands in one Verdict row; suite items are independent and a
failed item never aborts the rest.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ParameterError
from .grids import ComplexField, GridSpec, RealField
from .model import AdmissiblePair, ModelParams
from .profiles import AsymptoticDatum, tail_hats_at
from .dynamics import (
    IntegratorConfig,
    cross_check_gauge,
    integrate_aux,
)
from .gaussians import GaussianSymbol, gaussian_apply, mdfm_compose, symbol_distance
from .ratelab import (
    Verdict,
    boolean_verdict,
    diagnostic_verdict,
    exponent_verdict,
    fit_power_law,
    lr_profile_errors,
    make_omega_observer,
    slope_estimate,
    upper_verdict,
    verdicts_csv,
    verdicts_json,
)
from .scattering import (
    GaugeFunction,
    gauge_covariance_check,
    geometric_sample_grid,
    round_trip_check,
    seed_at_t0,
    wave_operator_W,
)
from .spectral import chirp_conjugation_residual, sobolev_norm

ALL_SUITES = (
    "identities",
    "structure",
    "decay",
    "profiles",
    "cauchy",
    "roundtrip",
    "gauge",
    "robustness",
)


@dataclass(frozen=True)
class AcceptanceConfig:
    grid_points: int = 32
    half_width: float = 16.0
    lam: float = 1.0
    mu: float = 1.0
    pair_k: int = 2
    pair_ell: int = 2
    gammas: tuple = (0.6, 0.75, 0.9)
    fit_window: tuple = (1.0e2, 1.0e4)
    t0_limit: float = 1.0e8
    schedule: tuple = (100.0, 200.0, 400.0, 800.0)
    cauchy_window: tuple = (1.0e2, 1.6e3)
    datum_sigma: float = 1.5
    datum_norm: float = 0.5
    rel_dt_cap: float = 0.03
    robust_rel_dt_cap: float = 0.05
    robust_cauchy_window: tuple = (1.0e2, 8.0e2)
    eta_variant: float = 1.0e-5
    gauge_gamma: float = 0.8
    gauge_width: float = 4.0
    gauge_amp: float = 0.3
    crosscheck_span: tuple = (50.0, 500.0)
    roundtrip_gamma: float = 0.8
    roundtrip_t0: float = 1.0e6
    roundtrip_extract_hi: float = 1.0e5
    roundtrip_phi_amp: float = 0.2
    roundtrip_phi_width: float = 2.5
    quad_tol: float = 1.0e-8
    suites: tuple = ALL_SUITES

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_dict(d: dict) -> "AcceptanceConfig":
        base = AcceptanceConfig()
        known = set(base.to_dict())
        bad = set(d) - known
        if bad:
            raise ParameterError(f"unknown acceptance-config keys: {sorted(bad)}")
        merged = {**base.to_dict(), **d}
        for name in ("gammas", "fit_window", "schedule", "cauchy_window",
                     "robust_cauchy_window", "crosscheck_span", "suites"):
            merged[name] = tuple(merged[name])
        return AcceptanceConfig(**merged)


def config_hash(cfg: AcceptanceConfig) -> str:
    blob = json.dumps(cfg.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def arena_grid(cfg: AcceptanceConfig, doubled: bool = False) -> GridSpec:
    if doubled:
        return GridSpec(3, 2 * cfg.grid_points, 2.0 * cfg.half_width)
    return GridSpec(3, cfg.grid_points, cfg.half_width)


def arena_datum(cfg: AcceptanceConfig, grid: GridSpec, amplitude: float | None = None):
    """Normalized Gaussian datum; the amplitude is fixed on the base grid so
    box-doubling keeps the same physical field."""
    r2 = grid.radius_squared()
    shape = np.exp(-r2 / (2.0 * cfg.datum_sigma**2))
    if amplitude is None:
        probe = AsymptoticDatum(ComplexField(grid, shape))
        amplitude = cfg.datum_norm / sobolev_norm(probe.w_plus, cfg.pair_k + 1)
    return AsymptoticDatum(ComplexField(grid, amplitude * shape)), amplitude


def arena_params(cfg: AcceptanceConfig, gamma: float, lam: float | None = None) -> ModelParams:
    return ModelParams(3, cfg.lam if lam is None else lam, gamma, cfg.mu)


def _pair(cfg) -> AdmissiblePair:
    return AdmissiblePair(cfg.pair_k, cfg.pair_ell)


# ---------------------------------------------------------------------------
# pipelines
# ---------------------------------------------------------------------------


def _conservation_stats(record) -> dict:
    ts = record.sample_times()
    mass = record.series("mass")
    span = abs(math.log(ts[-1] / ts[0])) if len(ts) > 1 else 1.0
    drift = float(np.max(np.abs(mass - mass[0]))) / mass[0] / span if len(ts) > 1 else 0.0
    s_sup = np.asarray(record.columns.get("s_sup", [0.0]), dtype=float)
    g_sup = np.asarray(record.columns.get("grad_s_sup", [0.0]), dtype=float)
    vort = record.series("vort_max") / (1.0 + g_sup)
    gap = record.series("grad_gap") / (1.0 + s_sup)
    gap = gap[~np.isnan(gap)]
    out = {
        "mass_drift_per_log": drift,
        "vort_ratio": float(np.max(vort)) if len(vort) else 0.0,
        "gap_ratio": float(np.max(gap)) if len(gap) else 0.0,
    }
    # discrete shadow of the transport growth bound, with 10 as the unknown constant
    wk = record.series("norm_w_k")
    sl = record.series("norm_s_l")
    worst = 0.0
    for i in range(len(ts) - 1):
        dwk = abs(wk[i + 1] - wk[i]) / (ts[i + 1] - ts[i])
        bound = 10.0 * ts[i] ** -2.0 * sl[i] * wk[i]
        if bound > 0.0:
            worst = max(worst, dwk / bound)
    out["growth_monitor_ratio"] = worst
    return out


def decay_pipeline(cfg, grid, gamma, amplitude, eta=0.0, rel_cap=None, t0_limit=None):
    """Limit-solution construction + all decay/profile series for one gamma."""
    params = arena_params(cfg, gamma)
    pair = _pair(cfg)
    datum, _ = arena_datum(cfg, grid, amplitude)
    t_lo, t_hi = cfg.fit_window
    ts = geometric_sample_grid(t_lo, t_hi)
    tails = tail_hats_at(datum, ts, params, pair.k, cfg.quad_tol)
    observer, extras = make_omega_observer(datum, params, pair, dict(zip(ts, tails)))
    icfg = IntegratorConfig(
        sample_times=ts,
        rel_dt_cap=cfg.rel_dt_cap if rel_cap is None else rel_cap,
        eta=eta,
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        run = wave_operator_W(
            datum,
            [cfg.t0_limit if t0_limit is None else t0_limit],
            params,
            pair,
            icfg,
            t_max=t_hi,
            keep_snapshots=False,
            limit_observer=observer,
            stream_diffs=True,
        )
    rec = run.limit
    window = cfg.fit_window
    fits = {
        "decay_w": fit_power_law(rec.sample_times(), rec.series("err_w_plus_k"), window),
        "decay_s_s02": fit_power_law(rec.sample_times(), rec.series("err_s02_l"), window),
        "decay_s_s0": fit_power_law(rec.sample_times(), rec.series("err_s0_l"), window),
        "prof_dollard": fit_power_law(rec.sample_times(), rec.series("err_prof_dollard"), window),
        "prof_refined": fit_power_law(rec.sample_times(), rec.series("err_prof_refined"), window),
    }
    for r in (2.0, 6.0):
        lt, lv = lr_profile_errors(extras, r)
        fits[f"prof_lr{int(r)}"] = fit_power_law(lt, lv, window)
    dt_, dv_ = zip(*sorted(extras["diag_dispersive"].items()))
    fits["diag_dispersive"] = fit_power_law(np.asarray(dt_), np.asarray(dv_), window)
    return {
        "record": rec,
        "extras": extras,
        "fits": fits,
        "conservation": _conservation_stats(rec),
        "run": run,
    }


def cauchy_pipeline(cfg, grid, gamma, amplitude, eta=0.0, rel_cap=None, window=None):
    """Cauchy-in-t0 convergence along the pinned schedule for one gamma."""
    params = arena_params(cfg, gamma)
    pair = _pair(cfg)
    datum, _ = arena_datum(cfg, grid, amplitude)
    win = cfg.cauchy_window if window is None else window
    ts = geometric_sample_grid(win[0], win[1])
    icfg = IntegratorConfig(
        sample_times=ts,
        rel_dt_cap=cfg.rel_dt_cap if rel_cap is None else rel_cap,
        eta=eta,
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        run = wave_operator_W(
            datum,
            cfg.schedule,
            params,
            pair,
            icfg,
            t_max=win[1],
            keep_snapshots=False,
            stream_diffs=True,
        )
    diffs = run.cauchy_diffs
    decreasing = bool(len(diffs) > 1 and np.all(np.diff(diffs) < 0.0))
    slope, r2 = slope_estimate(run.cauchy_t0, diffs)
    cons = [_conservation_stats(rec) for rec in run.trajectories]
    return {
        "run": run,
        "diffs": diffs,
        "decreasing": decreasing,
        "slope": slope,
        "slope_r2": r2,
        "conservation": cons,
    }


# ---------------------------------------------------------------------------
# suite items
# ---------------------------------------------------------------------------


def _identities_suite(cfg, verdicts, artifacts):
    for t in (1.0, 2.0, 10.0):
        worst = 0.0
        for sym in (GaussianSymbol(1.0, 1.0, 3), GaussianSymbol(0.7 + 0.3j, 1.5 + 0.4j, 3)):
            worst = max(worst, symbol_distance(mdfm_compose(sym, t), gaussian_apply(sym, "U", t)))
        verdicts.append(upper_verdict(f"ident_mdfm_t{t:g}", worst, 1.0e-12))

    grid = arena_grid(cfg)
    sigma = 4.0 * grid.h
    f = ComplexField(grid, np.exp(-grid.radius_squared() / (2.0 * sigma**2)))
    for t in (1.0, 2.0, 10.0):
        res = chirp_conjugation_residual(f, t)
        verdicts.append(upper_verdict(f"ident_chirp_t{t:g}", res, 1.0e-6))


def _structure_suite(cfg, verdicts, artifacts):
    """Split-step conservation and the direct-solver cross check."""
    grid = arena_grid(cfg)
    datum, amplitude = arena_datum(cfg, grid)
    artifacts.setdefault("amplitude", amplitude)
    params = arena_params(cfg, cfg.gauge_gamma)
    pair = _pair(cfg)
    lo, hi = cfg.crosscheck_span
    ts = geometric_sample_grid(lo, hi)
    icfg = IntegratorConfig(sample_times=ts, rel_dt_cap=cfg.rel_dt_cap)
    seed = seed_at_t0(datum, hi, params)
    rec = integrate_aux(seed, lo, icfg, params, pair, keep_snapshots=True)
    cts, disc, mass_steps = cross_check_gauge(rec, params, rel_dt_cap=0.02)
    mass_ref = rec.series("mass")[0]
    verdicts.append(
        upper_verdict("cons_splitstep_mass_per_step", float(np.max(mass_steps)), 1.0e-13)
    )
    verdicts.append(
        diagnostic_verdict(
            "diag_crosscheck_discrepancy",
            float(np.max(disc)) / mass_ref,
            "direct split-step solve vs auxiliary-system reconstruction, relative to mass",
        )
    )
    artifacts["crosscheck"] = {"ts": cts, "disc": disc, "mass_ref": mass_ref}
    artifacts.setdefault("conservation", []).append(_conservation_stats(rec))


def _parallel_map(fn, items):
    """Map preserving input order; honors the HARTREELAB_WORKERS env var."""
    import os

    workers = int(os.environ.get("HARTREELAB_WORKERS", "1"))
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _decay_suites(cfg, verdicts, artifacts, include_profiles: bool):
    grid = arena_grid(cfg)
    _, amplitude = arena_datum(cfg, grid)
    artifacts.setdefault("amplitude", amplitude)
    base = {}
    outs = _parallel_map(lambda g: decay_pipeline(cfg, grid, g, amplitude), list(cfg.gammas))
    for gamma, out in zip(cfg.gammas, outs):
        base[gamma] = out
        tag = f"g{gamma:g}"
        fits = out["fits"]
        verdicts.append(exponent_verdict(f"decay_w_{tag}", fits["decay_w"], -gamma, 0.2))
        verdicts.append(
            exponent_verdict(f"decay_s_s02_{tag}", fits["decay_s_s02"], 0.5 - gamma, 0.2)
        )
        verdicts.append(
            exponent_verdict(f"decay_s_s0_{tag}", fits["decay_s_s0"], 1.0 - 2.0 * gamma, 0.2)
        )
        if include_profiles:
            verdicts.append(
                exponent_verdict(f"prof_dollard_{tag}", fits["prof_dollard"], 0.5 - gamma, 0.25)
            )
            verdicts.append(
                exponent_verdict(f"prof_refined_{tag}", fits["prof_refined"], 1.0 - 2.0 * gamma, 0.25)
            )
            shift = fits["prof_lr6"].exponent - fits["prof_lr2"].exponent
            verdicts.append(
                Verdict(
                    f"prof_lr_shift_{tag}",
                    -1.0,
                    shift,
                    0.25,
                    min(fits["prof_lr6"].r_squared, fits["prof_lr2"].r_squared),
                    abs(shift + 1.0) <= 0.25
                    and min(fits["prof_lr6"].r_squared, fits["prof_lr2"].r_squared) >= 0.9,
                )
            )
            rec = out["record"]
            ts = rec.sample_times()
            tail_mask = ts >= cfg.fit_window[1] * 10.0**-0.25
            dollard = rec.series("err_prof_dollard")[tail_mask]
            refined = rec.series("err_prof_refined")[tail_mask]
            verdicts.append(
                boolean_verdict(
                    f"prof_order_{tag}",
                    bool(np.all(refined <= dollard)),
                    "refined-profile error eventually below the simple-profile error",
                )
            )
        verdicts.append(
            diagnostic_verdict(
                f"diag_dispersive_{tag}",
                fits["diag_dispersive"].exponent,
                "fitted decay of |(U*(1/t)-1) w+|_k on the grid; 1/2-gamma rates "
                "require the critical-regularity value -1/2 through the window",
            )
        )
        artifacts.setdefault("conservation", []).append(out["conservation"])
        verdicts.append(
            upper_verdict(
                f"cons_growth_monitor_{tag}",
                out["conservation"]["growth_monitor_ratio"],
                1.0,
                "sampled d|w|_k/dt against 10 t^-2 |s|_l |w|_k",
            )
        )
    artifacts["decay_base"] = base


def _cauchy_suite(cfg, verdicts, artifacts):
    grid = arena_grid(cfg)
    _, amplitude = arena_datum(cfg, grid)
    base = {}
    for gamma in cfg.gammas:
        out = cauchy_pipeline(cfg, grid, gamma, amplitude)
        base[gamma] = out
        tag = f"g{gamma:g}"
        verdicts.append(
            boolean_verdict(
                f"cauchy_decreasing_{tag}", out["decreasing"], f"differences {out['diffs']}"
            )
        )
        bound = -(min(gamma, 0.5) - 0.2)
        verdicts.append(
            Verdict(
                f"cauchy_rate_{tag}",
                bound,
                out["slope"],
                0.0,
                out["slope_r2"],
                out["slope"] <= bound and out["slope_r2"] >= 0.9,
                "upper",
                "fitted t0-exponent of successive Cauchy differences",
            )
        )
        for cons in out["conservation"]:
            artifacts.setdefault("conservation", []).append(cons)
    artifacts["cauchy_base"] = base


def _roundtrip_suite(cfg, verdicts, artifacts):
    grid = arena_grid(cfg)
    _, amplitude = arena_datum(cfg, grid)
    params = arena_params(cfg, cfg.roundtrip_gamma)
    pair = _pair(cfg)
    r2_grid = grid.radius_squared()
    shape = np.exp(-r2_grid / (2.0 * cfg.datum_sigma**2))
    phi1 = RealField(grid, cfg.roundtrip_phi_amp * np.exp(-r2_grid / (2.0 * cfg.roundtrip_phi_width**2)))
    datum = AsymptoticDatum(ComplexField(grid, amplitude * shape), phi1)
    ts = geometric_sample_grid(cfg.fit_window[0], cfg.roundtrip_extract_hi)
    icfg = IntegratorConfig(sample_times=ts, rel_dt_cap=cfg.rel_dt_cap)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = round_trip_check(datum, params, pair, icfg, t0_limit=cfg.roundtrip_t0)
    verdicts.append(upper_verdict("roundtrip_w", report["w_rel_err"], 1.0e-2))
    verdicts.append(upper_verdict("roundtrip_s02", report["s02_rel_err"], 2.0e-2))
    artifacts.setdefault("conservation", []).append(
        _conservation_stats(report["run"].limit)
    )

    # extraction error proxy |w(2t) - w(t)|_(k-1): its decay tracks -gamma
    from .spectral import sobolev_norm_hat

    rec = report["run"].limit
    snaps = sorted(rec.snapshots, key=lambda s: s["t"])
    ts_proxy, vals_proxy = [], []
    for snap in snaps:
        t = snap["t"]
        if not cfg.fit_window[0] <= t <= cfg.fit_window[1]:
            continue
        other = min(snaps, key=lambda s: abs(s["t"] - 2.0 * t))
        if abs(other["t"] - 2.0 * t) <= 1e-6 * t:
            ts_proxy.append(t)
            vals_proxy.append(
                sobolev_norm_hat(grid, [other["w_hat"] - snap["w_hat"]], pair.k - 1)
            )
    if len(ts_proxy) >= 4:
        proxy_fit = fit_power_law(ts_proxy, vals_proxy)
        verdicts.append(
            diagnostic_verdict(
                "diag_w_doubling_rate",
                proxy_fit.exponent,
                f"extraction proxy |w(2t)-w(t)|_(k-1) decay, expect ~{-params.gamma:+.2f}",
            )
        )

    # degenerate case lambda = 0, zero phase seed: the system is exactly
    # static, and for t0 large enough the seeding phase U(1/t0) - 1 is below
    # the gate as well, making the round trip exact.
    p0 = arena_params(cfg, cfg.roundtrip_gamma, lam=0.0)
    datum0 = AsymptoticDatum(ComplexField(grid, amplitude * shape))
    ts0 = geometric_sample_grid(cfg.fit_window[0], 1.0e4, ratio=2.0)
    icfg0 = IntegratorConfig(sample_times=ts0, rel_dt_cap=0.2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report0 = round_trip_check(datum0, p0, pair, icfg0, t0_limit=1.0e11)
    worst0 = max(report0["w_rel_err"], report0["s02_rel_err"])
    verdicts.append(upper_verdict("roundtrip_lambda0", worst0, 1.0e-10))
    artifacts["roundtrip"] = {"report": report, "lambda0": worst0}


def _gauge_suite(cfg, verdicts, artifacts):
    grid = arena_grid(cfg)
    datum, amplitude = arena_datum(cfg, grid)
    params = arena_params(cfg, cfg.gauge_gamma)
    pair = _pair(cfg)
    sigma = RealField(
        grid, cfg.gauge_amp * np.exp(-grid.radius_squared() / (2.0 * cfg.gauge_width**2))
    )
    ts = geometric_sample_grid(cfg.fit_window[0], cfg.fit_window[1])
    icfg = IntegratorConfig(sample_times=ts, rel_dt_cap=cfg.rel_dt_cap)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        out = gauge_covariance_check(
            datum, GaugeFunction(sigma), params, pair, icfg, t0_limit=cfg.t0_limit
        )
    rel = float(np.max(out["v_discrepancy"])) / out["mass_scale"]
    verdicts.append(upper_verdict("gauge_v_discrepancy", rel, 1.0e-3))
    fit = fit_power_law(out["ts"], out["phase_drift"], cfg.fit_window)
    verdicts.append(exponent_verdict("gauge_drift_rate", fit, -cfg.gauge_gamma, 0.25))
    for run in out["runs"]:
        artifacts.setdefault("conservation", []).append(_conservation_stats(run.limit))
    artifacts["gauge"] = out


ROBUST_METRICS = (
    "decay_w",
    "decay_s_s02",
    "decay_s_s0",
    "prof_dollard",
    "prof_refined",
)


def _robustness_suite(cfg, verdicts, artifacts):
    base = artifacts.get("decay_base")
    cauchy_base = artifacts.get("cauchy_base")
    if base is None or cauchy_base is None:
        raise ParameterError("robustness suite needs the decay and cauchy suites")
    amplitude = artifacts["amplitude"]
    variants = {
        "boxL": dict(grid=arena_grid(cfg, doubled=True), eta=0.0, rel=cfg.robust_rel_dt_cap),
        "eta": dict(grid=arena_grid(cfg), eta=cfg.eta_variant, rel=cfg.rel_dt_cap),
    }
    for vname, v in variants.items():
        for gamma in cfg.gammas:
            tag = f"g{gamma:g}"
            out = decay_pipeline(cfg, v["grid"], gamma, amplitude, eta=v["eta"], rel_cap=v["rel"])
            for metric in ROBUST_METRICS:
                delta = abs(out["fits"][metric].exponent - base[gamma]["fits"][metric].exponent)
                verdicts.append(
                    upper_verdict(f"robust_{vname}_{metric}_{tag}", delta, 0.05)
                )
            shift = out["fits"]["prof_lr6"].exponent - out["fits"]["prof_lr2"].exponent
            shift0 = (
                base[gamma]["fits"]["prof_lr6"].exponent
                - base[gamma]["fits"]["prof_lr2"].exponent
            )
            verdicts.append(
                upper_verdict(f"robust_{vname}_prof_lr_shift_{tag}", abs(shift - shift0), 0.05)
            )
            cout = cauchy_pipeline(
                cfg, v["grid"], gamma, amplitude, eta=v["eta"], rel_cap=v["rel"],
                window=cfg.robust_cauchy_window,
            )
            delta = abs(cout["slope"] - cauchy_base[gamma]["slope"])
            verdicts.append(upper_verdict(f"robust_{vname}_cauchy_rate_{tag}", delta, 0.05))
            if v["eta"] == 0.0:
                artifacts.setdefault("conservation", []).append(out["conservation"])


def _conservation_verdicts(cfg, verdicts, artifacts):
    stats = artifacts.get("conservation", [])
    if not stats:
        return
    verdicts.append(
        upper_verdict(
            "cons_mass_drift_per_log",
            max(s["mass_drift_per_log"] for s in stats),
            1.0e-8,
            f"max over {len(stats)} conservative acceptance trajectories",
        )
    )
    verdicts.append(
        upper_verdict("cons_vorticity", max(s["vort_ratio"] for s in stats), 1.0e-6)
    )
    verdicts.append(
        upper_verdict("cons_gradient_gap", max(s["gap_ratio"] for s in stats), 1.0e-6)
    )


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


def run_acceptance_suite(cfg: AcceptanceConfig | None = None, outdir=None):
    """Execute the selected acceptance experiments and build the verdict table.

    Returns (verdicts, artifacts).  Individual failures are recorded as failed
    verdicts; the suite always completes.  When outdir is given the verdict
    CSV/JSON and the per-gamma series CSVs are written there.
    """
    cfg = cfg or AcceptanceConfig()
    verdicts: list = []
    artifacts: dict = {"config": cfg, "timings": {}}

    stages = {
        "identities": _identities_suite,
        "structure": _structure_suite,
        "cauchy": _cauchy_suite,
        "roundtrip": _roundtrip_suite,
        "gauge": _gauge_suite,
        "robustness": _robustness_suite,
    }
    order = [s for s in ALL_SUITES if s in cfg.suites]
    for name in order:
        started = time.perf_counter()
        try:
            if name == "decay":
                _decay_suites(cfg, verdicts, artifacts, include_profiles="profiles" in cfg.suites)
            elif name == "profiles":
                if "decay" not in cfg.suites:
                    _decay_suites(cfg, verdicts, artifacts, include_profiles=True)
            else:
                stages[name](cfg, verdicts, artifacts)
        except Exception as exc:  # recorded, never fatal to the suite
            verdicts.append(
                boolean_verdict(f"suite_{name}_completed", False, f"{type(exc).__name__}: {exc}")
            )
        artifacts["timings"][name] = time.perf_counter() - started

    if "structure" in cfg.suites or "decay" in cfg.suites:
        _conservation_verdicts(cfg, verdicts, artifacts)

    if outdir is not None:
        write_suite_outputs(cfg, verdicts, artifacts, outdir)
    return verdicts, artifacts


def _series_csv(record) -> str:
    return record.to_csv()


def write_suite_outputs(cfg, verdicts, artifacts, outdir):
    import os

    os.makedirs(outdir, exist_ok=True)
    datum_sums = {}
    grid = arena_grid(cfg)
    datum, _ = arena_datum(cfg, grid, artifacts.get("amplitude"))
    datum_sums["w_plus"] = hashlib.sha256(
        np.ascontiguousarray(datum.w_plus.values).tobytes()
    ).hexdigest()
    base = artifacts.get("decay_base", {})
    series_dir = os.path.join(outdir, "series")
    os.makedirs(series_dir, exist_ok=True)
    for gamma, out in base.items():
        path = os.path.join(series_dir, f"decay_g{gamma:g}.csv")
        with open(path, "w") as fh:
            fh.write(_series_csv(out["record"]))
    cauchy = artifacts.get("cauchy_base", {})
    for gamma, out in cauchy.items():
        rows = ["t0,cauchy_diff"]
        for t0, d in zip(out["run"].cauchy_t0, out["diffs"]):
            rows.append(f"{t0:.17g},{d:.17g}")
        with open(os.path.join(series_dir, f"cauchy_g{gamma:g}.csv"), "w") as fh:
            fh.write("\n".join(rows) + "\n")
    provenance = {
        "config": cfg.to_dict(),
        "config_sha256": config_hash(cfg),
        "field_checksums": datum_sums,
        "timings": artifacts.get("timings", {}),
    }
    with open(os.path.join(outdir, "verdicts.csv"), "w") as fh:
        fh.write(verdicts_csv(verdicts))
    with open(os.path.join(outdir, "verdicts.json"), "w") as fh:
        fh.write(verdicts_json(verdicts, provenance))
