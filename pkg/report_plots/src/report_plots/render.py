"""Figures from run outputs: tracked functionals with law-predicted overlays
and theorem growth bounds against observed norms.

Rendering is a pure function of the input files: fixed styles, fixed dpi,
no timestamps in content, so re-rendering identical inputs is byte-stable.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .frames import SeriesFrame, load_json, load_series

DPI = 110
PNG_METADATA = {"Software": "report-plots"}

_SCENARIO_OBSERVED = {
    "t13": ("w_u2", "second-moment norm growth"),
    "t14a": ("w_u1", "first-moment norm growth"),
    "t14b": ("P", "running sup of P"),
}


def _cumtrapz(values: np.ndarray, t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(values)
    if len(t) > 1:
        inc = 0.5 * (values[1:] + values[:-1]) * np.diff(t)
        out[1:] = np.cumsum(inc)
    return out


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=DPI, metadata=PNG_METADATA)
    plt.close(fig)
    return path


def _law_sign(direction: str) -> float:
    return 1.0 if direction == "right" else -1.0


def _functional_figure(frame: SeriesFrame, name: str, observed: np.ndarray,
                       predicted: np.ndarray | None, residual: np.ndarray | None,
                       title: str, outpath: Path) -> Path:
    single = len(frame) == 1
    if single or residual is None:
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        axes = [ax]
    else:
        fig, axes = plt.subplots(
            2, 1, figsize=(6.4, 5.6), sharex=True,
            gridspec_kw={"height_ratios": [3, 1]},
        )
    ax = axes[0]
    style = {"marker": "o", "linestyle": "none"} if single else {}
    ax.plot(frame.t, observed, color="#1f4e79", label=f"tracked {name}", **style)
    if predicted is not None:
        ax.plot(frame.t, predicted, color="#c44e52", linestyle="--",
                label="law prediction", **({"marker": "x"} if single else {}))
    ax.set_ylabel(name)
    ax.set_title(title)
    ax.legend(loc="best")
    if not single and residual is not None:
        axr = axes[1]
        positive = np.maximum(residual, 1e-18)
        axr.semilogy(frame.t, positive, color="#55a868")
        axr.set_ylabel("residual")
        axr.set_xlabel("t")
    else:
        ax.set_xlabel("t")
    fig.tight_layout()
    return _save(fig, outpath)


def render_timeseries(series_path, summary_path, outdir) -> list:
    """Three figures: M, Q, E with their law-predicted overlays.

    The Q and E predictions integrate the recorded flux columns by the
    trapezoid rule with the direction-dependent sign from the summary; the
    mass overlay is the conserved value, which is the law whenever the
    boundary signals are homogeneous (the general mass flux is not part of
    the CSV contract).
    """
    frame = load_series(series_path)
    summary = load_json(summary_path)
    sgn = _law_sign(summary.get("direction", "right"))
    outdir = Path(outdir)
    t = frame.t

    homogeneous = all(
        summary.get("config", {}).get(key, {}).get("kind", "zero") == "zero"
        for key in ("f", "g", "h")
    )
    m_pred = np.full_like(t, frame["M"][0]) if homogeneous else None
    q_pred = frame["Q"][0] - sgn * _cumtrapz(frame["Qu"] + frame["Qv"], t)
    e_pred = frame["E"][0] - sgn * _cumtrapz(frame["E1"] + frame["E2"], t)

    single = len(frame) == 1
    paths = [
        _functional_figure(frame, "M", frame["M"], m_pred,
                           None if single else frame["r_mass"],
                           "mass and its evolution law", outdir / "mass.png"),
        _functional_figure(frame, "Q", frame["Q"], q_pred,
                           None if single else frame["r_moment"],
                           "moment and its evolution law", outdir / "moment.png"),
        _functional_figure(frame, "E", frame["E"], e_pred,
                           None if single else frame["r_energy"],
                           "energy and its evolution law", outdir / "energy.png"),
    ]
    return paths


def render_growth(verdict_path, series_path, outdir) -> Path:
    """Observed growth quantity against the predicted theorem bound.

    Pass / fail verdicts plot both curves with the margin shaded; a failed
    bound annotates the first crossing time; a hypotheses-not-met verdict
    renders a stub figure naming the gate values instead.
    """
    verdict = load_json(verdict_path)
    frame = load_series(series_path)
    outdir = Path(outdir)
    outpath = outdir / "growth.png"
    scenario = verdict.get("scenario", "unknown")

    if not verdict.get("hypotheses_met", False):
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        ax.axis("off")
        lines = [f"scenario {scenario}: hypotheses not met", ""]
        for key, value in sorted(verdict.get("hypotheses", {}).items()):
            lines.append(f"{key} = {value}")
        ax.text(0.05, 0.95, "\n".join(lines), va="top", family="monospace")
        return _save(fig, outpath)

    samples = verdict.get("bound_samples") or []
    if not samples:
        raise ValueError(f"verdict {verdict_path} carries no bound samples")
    arr = np.asarray(samples, dtype=float)
    t, predicted, observed = arr[:, 0], arr[:, 1], arr[:, 2]

    column, label = _SCENARIO_OBSERVED.get(scenario, ("w_u2", "observed norm"))
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(t, observed, color="#1f4e79", label=label)
    ax.plot(t, predicted, color="#c44e52", linestyle="--", label="predicted bound")
    ax.fill_between(t, predicted, observed, where=observed >= predicted,
                    color="#1f4e79", alpha=0.15, label="margin")
    if verdict.get("status") == "fail":
        below = np.nonzero(observed < predicted)[0]
        if below.size:
            tc = t[below[0]]
            ax.axvline(tc, color="#c44e52", linewidth=0.8)
            ax.annotate(f"bound crossed at t = {tc:.3g}", (tc, predicted[below[0]]),
                        textcoords="offset points", xytext=(6, 10))
    ax.set_xlabel("t")
    ax.set_ylabel(column)
    ax.set_title(f"scenario {scenario}: {verdict.get('status')} "
                 f"(margin {verdict.get('margin', float('nan')):.3g})")
    ax.legend(loc="best")
    fig.tight_layout()
    return _save(fig, outpath)
