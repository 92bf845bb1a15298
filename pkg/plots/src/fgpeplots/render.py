"""Figure rendering from run artifacts.

Five figure kinds, all read-only over their inputs and deterministic in
their output bytes: critical-mass curve, boundary barrier, dilation-path
energies, sweep trends with the kinetic band, and rescaled-profile
overlays against the dilated reference profile.  Failed sweep rows come
through as NaN and draw as gaps; nothing is interpolated across them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schemas import EmptyInputError, SchemaError, read_csv_columns, read_field

__all__ = ["FigureSpec", "render", "FIGURE_KINDS"]

FIGURE_KINDS = ("n_star_curve", "gap_curve", "dilation_path", "sweep_trends",
                "rescaled_profiles")

_PNG_META = {"Software": None}  # strip version strings for byte-stable output


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input artifact paths, figure kind, output image path,
    optional axis-label overrides."""

    kind: str
    inputs: tuple
    output: Path
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; "
                              f"expected one of {FIGURE_KINDS}")
        object.__setattr__(self, "inputs", tuple(Path(p) for p in self.inputs))
        object.__setattr__(self, "output", Path(self.output))


def _axes(spec, ax, default_x, default_y):
    ax.set_xlabel(spec.labels.get("x", default_x))
    ax.set_ylabel(spec.labels.get("y", default_y))


def _save(fig, spec: FigureSpec) -> Path:
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    kwargs = {"dpi": 130}
    if spec.output.suffix.lower() == ".png":
        kwargs["metadata"] = _PNG_META
    fig.savefig(spec.output, **kwargs)
    plt.close(fig)
    return spec.output


def _render_n_star_curve(spec: FigureSpec) -> Path:
    cols = read_csv_columns(spec.inputs[0], "n_star_curve")
    s = np.asarray(cols["s"])
    ns = np.asarray(cols["Ns_star"])
    fig, ax = plt.subplots(figsize=(5.4, 3.6), constrained_layout=True)
    ax.plot(s, ns, "o-", color="tab:blue", label="critical mass")
    at_one = np.isclose(s, 1.0)
    if at_one.any():
        ax.axhline(float(ns[at_one][0]), color="tab:red", ls="--", lw=1,
                   label="mass at order 1")
    _axes(spec, ax, "fractional order s", "critical mass")
    ax.legend(frameon=False)
    return _save(fig, spec)


def _render_gap_curve(spec: FigureSpec) -> Path:
    cols = read_csv_columns(spec.inputs[0], "gap_curve")
    t = np.asarray(cols["t"])
    f = np.asarray(cols["f"])
    fig, ax = plt.subplots(figsize=(5.4, 3.6), constrained_layout=True)
    ax.semilogx(t, f, color="tab:blue")
    k = int(np.nanargmax(f))
    ax.plot(t[k], f[k], "o", color="tab:red", label="barrier maximum")
    ax.axhline(0.0, color="0.6", lw=0.8)
    _axes(spec, ax, "kinetic energy t", "barrier f(t)")
    ax.legend(frameon=False)
    return _save(fig, spec)


def _render_dilation_path(spec: FigureSpec) -> Path:
    cols = read_csv_columns(spec.inputs[0], "dilation_path")
    t = np.asarray(cols["t"])
    disc = np.asarray(cols["energy_discrete"])
    closed = np.asarray(cols["energy_closed"])
    fig, ax = plt.subplots(figsize=(5.4, 3.6), constrained_layout=True)
    ax.semilogx(t, closed, "-", color="0.4", label="closed form")
    ax.semilogx(t, disc, "o", color="tab:blue", ms=4, label="grid dilation")
    _axes(spec, ax, "dilation factor t", "energy along the path")
    ax.legend(frameon=False)
    return _save(fig, spec)


def _render_sweep_trends(spec: FigureSpec) -> Path:
    cols = read_csv_columns(spec.inputs[0], "sweep")
    summary = json.loads(Path(spec.inputs[1]).read_text())
    N = float(summary["N"])
    s = np.asarray(cols["s"])
    kin = np.asarray(cols["kin_saddle"])
    ns = np.asarray(cols["Ns_star"])
    resc = np.asarray(cols["rescale_err"])
    minerr = np.asarray(cols["min_err"])
    ratio = (ns / N) ** (s / (1.0 - s))
    band_lo = N * (1.0 - s) / (2.0 * s - 1.0) * ratio
    band_hi = 2.0 * N * ratio
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6), constrained_layout=True)
    ax1.fill_between(s, band_lo, band_hi, color="tab:orange", alpha=0.25,
                     label="admissible band")
    ax1.plot(s, kin, "o-", color="tab:blue", label="saddle kinetic")
    ax1.set_yscale("log")
    ax1.set_xlabel(spec.labels.get("x", "fractional order s"))
    ax1.set_ylabel("kinetic energy")
    ax1.legend(frameon=False)
    ax2.plot(s, resc, "o-", color="tab:green", label="rescaled-profile error")
    ax2.plot(s, minerr, "s-", color="tab:purple", label="minimizer error")
    ax2.set_yscale("log")
    ax2.set_xlabel("fractional order s")
    ax2.set_ylabel(spec.labels.get("y", "L2 distance"))
    ax2.legend(frameon=False)
    return _save(fig, spec)


def _axis_profile(values: np.ndarray, L: float) -> tuple[np.ndarray, np.ndarray]:
    n = values.shape[0]
    c = n // 2
    r = (np.arange(c) ) * (L / n)
    return r, values[c:, c]


def _render_rescaled_profiles(spec: FigureSpec) -> Path:
    if len(spec.inputs) < 2:
        raise SchemaError("rescaled_profiles needs the reference field plus "
                          "at least one rescaled profile")
    ref_vals, ref_meta = read_field(spec.inputs[0])
    fig, ax = plt.subplots(figsize=(5.8, 3.8), constrained_layout=True)
    for base in spec.inputs[1:]:
        vals, meta = read_field(base)
        r, prof = _axis_profile(vals, float(meta["L"]))
        ax.plot(r, prof, lw=1.2, label=f"s = {meta.get('s')}")
    # reference: dilated by sqrt(N) in radius, 1/sqrt(N1*) in amplitude,
    # both read off the sidecars (axis transforms only)
    n_star = float(ref_meta["N"])
    any_meta = read_field(spec.inputs[1])[1]
    N = float(any_meta["N"])
    r_ref, prof_ref = _axis_profile(ref_vals, float(ref_meta["L"]))
    ax.plot(r_ref * math.sqrt(N), prof_ref / math.sqrt(n_star), "k--", lw=1.4,
            label="dilated reference")
    ax.set_xlim(0.0, 4.0 * math.sqrt(N))
    _axes(spec, ax, "radius", "rescaled amplitude")
    ax.legend(frameon=False, fontsize=8)
    return _save(fig, spec)


_RENDERERS = {
    "n_star_curve": _render_n_star_curve,
    "gap_curve": _render_gap_curve,
    "dilation_path": _render_dilation_path,
    "sweep_trends": _render_sweep_trends,
    "rescaled_profiles": _render_rescaled_profiles,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure; raises SchemaError/EmptyInputError before any
    output file is created when inputs do not conform."""
    for p in spec.inputs:
        probe = Path(p)
        raw = probe.parent / (probe.name + ".f64")
        if not probe.exists() and not raw.exists():
            raise EmptyInputError(f"input {probe} not found")
    return _RENDERERS[spec.kind](spec)
