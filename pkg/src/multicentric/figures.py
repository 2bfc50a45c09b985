"""Matplotlib rendering of lemniscate analyses and table charts.

Figures are written to files (SVG by default) next to the delimited
output; nothing interactive.  Metadata that would break byte-for-byte
reproducibility (dates) is stripped.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .polynomials import critical_points

_SAVE_KW = {"svg": {"metadata": {"Date": None}}, "png": {"dpi": 150}}


def _savefig(fig, path):
    ext = str(path).rsplit(".", 1)[-1].lower()
    fig.savefig(path, **_SAVE_KW.get(ext, {}))
    plt.close(fig)


def render_lemniscate(analysis, path):
    """Contours, roots (dots) and critical points (crosses) at one level."""
    fig, ax = plt.subplots(figsize=(6, 6))
    for seg in analysis.contours:
        ax.plot(seg[:, 0], seg[:, 1], color="tab:blue", lw=1.0)
    p = analysis.polynomial
    ax.plot(p.roots.real, p.roots.imag, "k.", ms=8, label="roots")
    if p.degree >= 2:
        cps = np.array([zc for zc, _ in critical_points(p)])
        ax.plot(cps.real, cps.imag, "rx", ms=7, label="critical points")
    ax.axvline(0.0, color="0.7", lw=0.5)
    ax.axhline(0.0, color="0.7", lw=0.5)
    ax.set_aspect("equal")
    ax.set_title(f"|p(z)| = {analysis.level:g}, {analysis.component_count} component(s)")
    ax.legend(loc="upper right", fontsize=8)
    _savefig(fig, path)


def render_table_chart(rows, path):
    """Per-degree chart of the separation data next to the reference values."""
    degrees = [r["degree"] for r in rows]
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.6))
    panels = [("C", "constant C (log)", True),
              ("s", "gap s", False),
              ("ratio", "a/b", False)]
    for ax, (key, title, logy) in zip(axes, panels):
        comp = [r.get(key) for r in rows]
        ref = [r.get("ref_" + key) for r in rows]
        ax.plot(degrees, comp, "o-", label="computed")
        if any(v is not None for v in ref):
            ax.plot(degrees, ref, "s--", label="reference")
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel("degree")
        ax.set_title(title)
        ax.legend(fontsize=8)
    fig.tight_layout()
    _savefig(fig, path)
