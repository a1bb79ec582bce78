"""Run orchestration: configuration file, subcommands, manifests.

Usage: ``hartreelab <subcommand> <config.json> <output-dir>``

Subcommands: simulate-aux, wave-operator, extract-asymptotics, verify-rates,
check-identities, cross-check.  The configuration is a single JSON file
(schema documented in the README); the only things on the command line are
the subcommand, the config path, and the output directory, so a run is fully
reproducible from its manifest.

Exit codes: 0 success, 1 usage/config error, 2 numerical failure, 3 a gated
claim failed.  HARTREELAB_WORKERS sets the worker count for independent
experiment items.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import ConfigError, ParameterError, QuadratureError
from .grids import ComplexField, GridSpec, RealField, write_field
from .model import AdmissiblePair, ModelParams, check_admissible
from .profiles import AsymptoticDatum
from .dynamics import (
    AuxState,
    IntegratorConfig,
    cross_check_gauge,
    integrate_aux,
)
from .acceptance import AcceptanceConfig, run_acceptance_suite
from .scattering import (
    extract_s02,
    extract_w_plus,
    geometric_sample_grid,
    seed_at_t0,
    wave_operator_W,
)
from .spectral import gradient, sobolev_norm


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def _get(d: dict, key: str, default=None, required=False):
    if key not in d:
        if required:
            raise ConfigError(f"missing config field: {key}")
        return default
    return d[key]


class RunConfig:
    """Validated view of the JSON configuration file."""

    def __init__(self, raw: dict):
        self.raw = raw
        model = _get(raw, "model", {}, required=False) or {}
        self.params = ModelParams(
            n=int(_get(model, "n", 3)),
            lam=float(_get(model, "lam", 1.0)),
            gamma=float(_get(model, "gamma", 0.8)),
            mu=float(_get(model, "mu", 1.0)),
        )
        pair = _get(raw, "pair", {}) or {}
        self.pair = AdmissiblePair(int(_get(pair, "k", 2)), int(_get(pair, "ell", 2)))
        res = check_admissible(self.params.n, self.params.mu, self.pair.k, self.pair.ell)
        if not res:
            raise ConfigError(
                f"pair (k={self.pair.k}, l={self.pair.ell}) refused; violated: "
                + "; ".join(res.violations)
            )
        grid = _get(raw, "grid", {}) or {}
        self.grid = GridSpec(
            n=self.params.n,
            points_per_axis=int(_get(grid, "points_per_axis", 32)),
            half_width=float(_get(grid, "half_width", 16.0)),
        )
        integ = _get(raw, "integrator", {}) or {}
        samples = _get(integ, "sample_times", None)
        if samples is None:
            span = _get(integ, "sample_span", {"t_lo": 1.0e2, "t_hi": 1.0e4})
            samples = geometric_sample_grid(float(span["t_lo"]), float(span["t_hi"]))
        self.integrator = IntegratorConfig(
            dt_base=float(_get(integ, "dt_base", 1.0e9)),
            cfl_safety=float(_get(integ, "cfl_safety", 0.9)),
            eta=float(_get(integ, "eta", 0.0)),
            sample_times=tuple(float(x) for x in samples),
            tol_grad=float(_get(integ, "tol_grad", 1.0e-6)),
            tol_vort=float(_get(integ, "tol_vort", 1.0e-6)),
            rel_dt_cap=float(_get(integ, "rel_dt_cap", 0.05)),
        )
        datum = _get(raw, "datum", {}) or {}
        self.datum_sigma = float(_get(datum, "sigma", 1.5))
        self.datum_amp = _get(datum, "amplitude", None)
        self.datum_norm = float(_get(datum, "norm_target", 0.5))
        self.datum_phi = _get(datum, "phi02", None)
        self._validate_datum()
        self.schedule = tuple(float(x) for x in _get(raw, "schedule", (100.0, 200.0, 400.0, 800.0)))
        windows = _get(raw, "windows", {}) or {}
        self.fit_window = tuple(_get(windows, "fit", (1.0e2, 1.0e4)))
        self.simulate = _get(raw, "simulate", {}) or {}
        self.extraction = _get(raw, "extraction", {}) or {}
        self.acceptance_overrides = _get(raw, "acceptance", {}) or {}
        out = _get(raw, "output", {}) or {}
        self.write_snapshots = bool(_get(out, "snapshots", False))

    def _validate_datum(self):
        # the bump must span at least four grid cells: width ~ 4 sigma >= 4h
        h = self.grid.h
        if 4.0 * self.datum_sigma < 4.0 * h:
            raise ConfigError(
                f"datum Gaussian too narrow: sigma {self.datum_sigma} below the spacing {h}"
            )
        # analytic bound on the |x|^2-density mass outside the half-box
        ratio = 3.0 * math.erfc(0.5 * self.grid.half_width / self.datum_sigma)
        if ratio > 1.0e-10:
            raise ConfigError(
                f"datum mass outside |x| <= L/2 is ~{ratio:.2e} > 1e-10; "
                "narrow the Gaussian or enlarge the box"
            )

    def build_datum(self) -> AsymptoticDatum:
        r2 = self.grid.radius_squared()
        shape = np.exp(-r2 / (2.0 * self.datum_sigma**2))
        if self.datum_amp is None:
            probe = AsymptoticDatum(ComplexField(self.grid, shape))
            amp = self.datum_norm / sobolev_norm(probe.w_plus, self.pair.k + 1)
        else:
            amp = float(self.datum_amp)
        phi = None
        if self.datum_phi:
            phi = RealField(
                self.grid,
                float(self.datum_phi["amplitude"])
                * np.exp(-r2 / (2.0 * float(self.datum_phi["sigma"]) ** 2)),
            )
        return AsymptoticDatum(ComplexField(self.grid, amp * shape), phi)


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config {path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return RunConfig(raw)


# ---------------------------------------------------------------------------
# manifest
# ---------------------------------------------------------------------------


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


class Manifest:
    def __init__(self, outdir: str, config_raw: dict, command: str):
        self.outdir = outdir
        self.data = {
            "artifact_version": __version__,
            "command": command,
            "config": config_raw,
            "started": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "stages": {},
            "files": {},
        }

    def stage(self, name: str, status: str):
        self.data["stages"][name] = status

    def finalize(self):
        self.data["finished"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
        for root, _, files in os.walk(self.outdir):
            for name in files:
                if name == "manifest.json":
                    continue
                path = os.path.join(root, name)
                rel = os.path.relpath(path, self.outdir)
                self.data["files"][rel] = _sha256(path)
        with open(os.path.join(self.outdir, "manifest.json"), "w") as fh:
            json.dump(self.data, fh, indent=2, sort_keys=True)
            fh.write("\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _write(outdir, name, text):
    with open(os.path.join(outdir, name), "w") as fh:
        fh.write(text)


def cmd_simulate_aux(cfg: RunConfig, outdir: str, manifest: Manifest) -> int:
    datum = cfg.build_datum()
    sim = cfg.simulate
    t_start = float(sim.get("t_start", min(cfg.integrator.sample_times)))
    t_target = float(sim.get("t_target", max(cfg.integrator.sample_times)))
    phi0 = datum.phi02_at_1
    phi = phi0 if phi0 is not None else RealField.zero(cfg.grid)
    state = AuxState(t_start, datum.w_plus, gradient(phi), phi)
    rec = integrate_aux(
        state, t_target, cfg.integrator, cfg.params, cfg.pair,
        keep_snapshots=cfg.write_snapshots,
    )
    _write(outdir, "trajectory.csv", rec.to_csv())
    if cfg.write_snapshots and rec.snapshots:
        from .dynamics import snapshot_state

        last = snapshot_state(rec, rec.snapshots[-1])
        write_field(last.w, os.path.join(outdir, "w_final.hlf"))
        write_field(last.s, os.path.join(outdir, "s_final.hlf"))
    manifest.stage("integration", "failed: " + rec.failure_reason if rec.failed else "ok")
    if rec.flags:
        _write(outdir, "flags.txt", "\n".join(rec.flags) + "\n")
    return 2 if rec.failed else 0


def cmd_wave_operator(cfg: RunConfig, outdir: str, manifest: Manifest) -> int:
    datum = cfg.build_datum()
    run = wave_operator_W(
        datum, cfg.schedule, cfg.params, cfg.pair, cfg.integrator, keep_snapshots=True
    )
    for t0, rec in zip(run.t0_schedule, run.trajectories):
        _write(outdir, f"traj_t0_{t0:g}.csv", rec.to_csv())
    rows = ["t0,cauchy_diff"]
    for t0, d in zip(run.cauchy_t0, run.cauchy_diffs):
        rows.append(f"{t0:.17g},{d:.17g}")
    _write(outdir, "differences.csv", "\n".join(rows) + "\n")
    if run.limit.snapshots:
        from .dynamics import snapshot_state

        last = snapshot_state(run.limit, run.limit.snapshots[-1])
        write_field(last.w, os.path.join(outdir, "limit_w.hlf"))
        write_field(last.s, os.path.join(outdir, "limit_s.hlf"))
        if last.phi is not None:
            write_field(last.phi, os.path.join(outdir, "limit_phi.hlf"))
    summary = {
        "schedule": list(run.t0_schedule),
        "window": list(run.window),
        "diverged": run.diverged,
        "calibration": run.calibration,
        "cauchy_diffs": [float(x) for x in run.cauchy_diffs],
    }
    _write(outdir, "run.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    manifest.stage("wave-operator", "diverged" if run.diverged else "ok")
    failed = any(rec.failed for rec in run.trajectories)
    return 2 if failed else 0


def cmd_extract_asymptotics(cfg: RunConfig, outdir: str, manifest: Manifest) -> int:
    datum = cfg.build_datum()
    t_lo = float(cfg.extraction.get("t_lo", min(cfg.integrator.sample_times)))
    run = wave_operator_W(
        datum,
        [float(cfg.extraction.get("t0", max(cfg.schedule)))],
        cfg.params,
        cfg.pair,
        cfg.integrator,
        keep_snapshots=True,
    )
    rec = run.limit
    w_rec, proxy = extract_w_plus(rec, cfg.params, cfg.pair)
    fields, tail = extract_s02(rec, w_rec, cfg.params, cfg.pair, [t_lo])
    write_field(w_rec, os.path.join(outdir, "extracted_w_plus.hlf"))
    write_field(fields[0][1], os.path.join(outdir, f"extracted_s02_t{t_lo:g}.hlf"))
    summary = {"w_plus_proxy_err": proxy, "s0_tail_bound": tail, "eval_t": t_lo}
    _write(outdir, "extraction.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    manifest.stage("extraction", "ok")
    return 0


def _acceptance_config(cfg: RunConfig, suites=None) -> AcceptanceConfig:
    overrides = dict(cfg.acceptance_overrides)
    if suites is not None:
        overrides["suites"] = tuple(suites)
    return AcceptanceConfig.from_dict(overrides)


def _verdict_exit(verdicts) -> int:
    return 3 if any(not v.passed for v in verdicts) else 0


def cmd_verify_rates(cfg: RunConfig, outdir: str, manifest: Manifest) -> int:
    acc = _acceptance_config(cfg)
    verdicts, artifacts = run_acceptance_suite(acc, outdir)
    manifest.stage("acceptance", "ok")
    for name, secs in artifacts.get("timings", {}).items():
        manifest.stage(f"suite:{name}", f"{secs:.1f}s")
    return _verdict_exit(verdicts)


def cmd_check_identities(cfg: RunConfig, outdir: str, manifest: Manifest) -> int:
    acc = _acceptance_config(cfg, suites=("identities", "structure"))
    verdicts, _ = run_acceptance_suite(acc, outdir)
    manifest.stage("identities", "ok")
    return _verdict_exit(verdicts)


def cmd_cross_check(cfg: RunConfig, outdir: str, manifest: Manifest) -> int:
    datum = cfg.build_datum()
    seed = seed_at_t0(datum, max(cfg.integrator.sample_times), cfg.params)
    rec = integrate_aux(
        seed, min(cfg.integrator.sample_times), cfg.integrator, cfg.params, cfg.pair,
        keep_snapshots=True,
    )
    if rec.failed:
        manifest.stage("cross-check", "failed: " + rec.failure_reason)
        return 2
    ts, disc, mass_steps = cross_check_gauge(rec, cfg.params)
    rows = ["t,v_discrepancy"]
    for t, d in zip(ts, disc):
        rows.append(f"{t:.17g},{d:.17g}")
    _write(outdir, "crosscheck.csv", "\n".join(rows) + "\n")
    summary = {
        "max_discrepancy": float(np.max(disc)),
        "mass_scale": float(rec.series("mass")[0]),
        "max_splitstep_mass_drift": float(np.max(mass_steps)) if len(mass_steps) else 0.0,
    }
    _write(outdir, "crosscheck.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    manifest.stage("cross-check", "ok")
    return 0


COMMANDS = {
    "simulate-aux": cmd_simulate_aux,
    "wave-operator": cmd_wave_operator,
    "extract-asymptotics": cmd_extract_asymptotics,
    "verify-rates": cmd_verify_rates,
    "check-identities": cmd_check_identities,
    "cross-check": cmd_cross_check,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hartreelab",
        description="Numerical laboratory for modified scattering of long-range "
        "Hartree-type equations.",
    )
    parser.add_argument("subcommand", choices=sorted(COMMANDS))
    parser.add_argument("config", help="path to the JSON run configuration")
    parser.add_argument("outdir", help="output directory (created if absent)")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0

    try:
        cfg = load_config(args.config)
    except (ConfigError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    os.makedirs(args.outdir, exist_ok=True)
    manifest = Manifest(args.outdir, cfg.raw, args.subcommand)
    try:
        code = COMMANDS[args.subcommand](cfg, args.outdir, manifest)
    except (ParameterError, ConfigError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        manifest.stage(args.subcommand, f"usage error: {exc}")
        manifest.finalize()
        return 1
    except (QuadratureError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        manifest.stage(args.subcommand, f"numerical failure: {exc}")
        manifest.finalize()
        return 2
    manifest.finalize()
    return code


if __name__ == "__main__":
    sys.exit(main())
