"""Render log-log decay panels and a verdict table from a run directory.

Input contract (the primary laboratory's documented output formats only):

* ``verdicts.json``  -- claim table with fitted exponents and pass flags;
* ``series/decay_g<gamma>.csv`` -- trajectory series in the fixed column
  schema ``t,mass,...,err_w_plus_k,err_s0_l,err_s02_l,err_prof_dollard,
  err_prof_refined``;
* ``series/cauchy_g<gamma>.csv`` -- ``t0,cauchy_diff`` rows.

Every annotated slope is read back from the verdict JSON, never re-fitted,
so the report cannot disagree with the gate.  The markdown is byte-stable
under re-runs; image files may differ in embedded metadata only.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field


class ReportError(ValueError):
    """Missing files, unknown series, or a CSV that breaks the schema."""


# series column -> claim prefix carrying its fitted exponent and theory value
SERIES_CLAIMS = {
    "err_w_plus_k": "decay_w",
    "err_s02_l": "decay_s_s02",
    "err_s0_l": "decay_s_s0",
    "err_prof_dollard": "prof_dollard",
    "err_prof_refined": "prof_refined",
}

SERIES_LABELS = {
    "err_w_plus_k": "amplitude distance to the asymptotic state",
    "err_s02_l": "distance to the simple free profile",
    "err_s0_l": "distance to the refined free profile",
    "err_prof_dollard": "Dollard-phase profile error",
    "err_prof_refined": "refined-phase profile error",
    "cauchy_diff": "Cauchy differences in t0",
}


@dataclass
class ReportSpec:
    input_dir: str
    output_dir: str
    series: list = field(default_factory=list)  # e.g. ["decay_g0.75:err_w_plus_k"]
    image_format: str = "png"

    def __post_init__(self):
        if not os.path.isdir(self.input_dir):
            raise ReportError(f"input directory not found: {self.input_dir}")
        if self.image_format not in ("png", "svg"):
            raise ReportError(f"unsupported image format: {self.image_format}")


def read_csv_columns(path):
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise ReportError(f"empty CSV: {path}")
    header = lines[0].split(",")
    cols = {name: [] for name in header}
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != len(header):
            raise ReportError(f"ragged row in {path}: {ln!r}")
        for name, cell in zip(header, cells):
            cols[name].append(float(cell) if cell else math.nan)
    return cols


def load_verdicts(input_dir):
    path = os.path.join(input_dir, "verdicts.json")
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        return json.load(fh)["verdicts"]


def discover_series(input_dir):
    """All plottable series in the directory, in deterministic order."""
    series_dir = os.path.join(input_dir, "series")
    out = []
    if not os.path.isdir(series_dir):
        return out
    for name in sorted(os.listdir(series_dir)):
        if not name.endswith(".csv"):
            continue
        stem = name[:-4]
        cols = read_csv_columns(os.path.join(series_dir, name))
        if stem.startswith("decay_"):
            for col in SERIES_CLAIMS:
                if col in cols:
                    out.append(f"{stem}:{col}")
        elif stem.startswith("cauchy_"):
            out.append(f"{stem}:cauchy_diff")
    return out


def _claim_for(stem, column, verdicts):
    if verdicts is None:
        return None
    gamma_tag = stem.split("_", 1)[1] if "_" in stem else ""
    if column == "cauchy_diff":
        wanted = f"cauchy_rate_{gamma_tag}"
    else:
        wanted = f"{SERIES_CLAIMS[column]}_{gamma_tag}"
    for row in verdicts:
        if row["claim_id"] == wanted:
            return row
    return None


def _render_panel(spec, stem, column, verdicts):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    path = os.path.join(spec.input_dir, "series", stem + ".csv")
    if not os.path.exists(path):
        raise ReportError(f"series file not found: {path}")
    cols = read_csv_columns(path)
    if column not in cols:
        raise ReportError(f"column {column!r} not in {path} (schema mismatch)")
    tname = "t" if "t" in cols else "t0"
    ts = np.asarray(cols[tname])
    ys = np.asarray(cols[column])
    keep = ~np.isnan(ys) & (ys > 0)
    ts, ys = ts[keep], ys[keep]
    if len(ts) == 0:
        raise ReportError(f"series {stem}:{column} has no positive samples")

    claim = _claim_for(stem, column, verdicts)
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.loglog(ts, ys, "o-", ms=3.5, lw=1.0, label=column)
    note = ""
    if claim is not None and claim.get("fitted") is not None:
        slope = claim["fitted"]
        anchor = len(ts) // 2
        guide = ys[anchor] * (ts / ts[anchor]) ** slope
        ax.loglog(ts, guide, "--", lw=1.0, label=f"fitted slope {slope:+.3f}")
        if claim.get("theory") is not None:
            theory = claim["theory"]
            guide_t = ys[anchor] * (ts / ts[anchor]) ** theory
            ax.loglog(ts, guide_t, ":", lw=1.0, label=f"theory slope {theory:+.3f}")
            note = f"fitted {slope:+.3f}, theory {theory:+.3f}, pass={claim['pass']}"
        else:
            note = f"fitted {slope:+.3f}"
    ax.set_xlabel(tname)
    ax.set_ylabel(SERIES_LABELS.get(column, column))
    ax.set_title(f"{stem}:{column}")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fname = f"{stem}_{column}.{spec.image_format}"
    fig.savefig(os.path.join(spec.output_dir, fname), dpi=110, metadata={})
    plt.close(fig)
    return fname, note


def _verdict_table(verdicts):
    lines = [
        "| claim | fitted | theory | tolerance | r^2 | pass |",
        "|---|---|---|---|---|---|",
    ]
    for row in verdicts:
        theory = "" if row.get("theory") is None else f"{row['theory']:+.4g}"
        tol = "" if row.get("tolerance") is None else f"{row['tolerance']:.3g}"
        r2 = "" if row.get("r2") is None else f"{row['r2']:.4f}"
        mark = "pass" if row["pass"] else "**FAIL**"
        lines.append(
            f"| `{row['claim_id']}` | {row['fitted']:+.5g} | {theory} | {tol} | {r2} | {mark} |"
        )
    return "\n".join(lines)


def render_report(spec: ReportSpec) -> str:
    """Build the report bundle; returns the markdown path."""
    os.makedirs(spec.output_dir, exist_ok=True)
    verdicts = load_verdicts(spec.input_dir)
    selected = spec.series if spec.series else discover_series(spec.input_dir)

    md = ["# Decay-rate report", ""]
    if selected:
        md.append("## Log-log panels")
        md.append("")
        for item in selected:
            try:
                stem, column = item.split(":", 1)
            except ValueError as exc:
                raise ReportError(f"series selector must be 'file:column', got {item!r}") from exc
            fname, note = _render_panel(spec, stem, column, verdicts)
            md.append(f"### {stem}:{column}")
            md.append("")
            md.append(f"![{stem}:{column}]({fname})")
            if note:
                md.append("")
                md.append(note)
            md.append("")
    if verdicts is not None:
        md.append("## Verdicts")
        md.append("")
        md.append(_verdict_table(verdicts))
        md.append("")
        failed = sum(1 for row in verdicts if not row["pass"])
        md.append(f"{len(verdicts) - failed} of {len(verdicts)} claims pass.")
        md.append("")
    else:
        md.append("*(no verdicts.json found; verdict section omitted)*")
        md.append("")

    out_path = os.path.join(spec.output_dir, "report.md")
    with open(out_path, "w") as fh:
        fh.write("\n".join(md))
    return out_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hartree-report",
        description="Render log-log decay plots and a verdict table from a "
        "hartreelab output directory.",
    )
    parser.add_argument("input_dir")
    parser.add_argument("output_dir")
    parser.add_argument("--series", nargs="*", default=None, help="file:column selectors")
    parser.add_argument("--format", choices=("png", "svg"), default="png")
    args = parser.parse_args(argv)
    try:
        spec = ReportSpec(
            args.input_dir, args.output_dir, args.series or [], args.format
        )
        path = render_report(spec)
    except ReportError as exc:
        print(f"report error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
