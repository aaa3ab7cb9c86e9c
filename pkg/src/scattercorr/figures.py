"""Figure rendering for the CLI report path.

Renders matplotlib figures to files next to the delimited output: field
magnitude maps for grid tables, value-versus-separation curves for pair
tables, residual bars for verification reports, and a two-route
comparison for projector reports. Uses the Agg backend so it works
headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = [
    "render_field_figure",
    "render_pair_figure",
    "render_residual_figure",
    "render_projector_figure",
]


def _magnitudes(rows: list[dict]) -> np.ndarray:
    out = np.full(len(rows), np.nan)
    for i, row in enumerate(rows):
        if not row.get("note"):
            out[i] = np.hypot(row["re"], row["im"])
    return out


def render_field_figure(rows: list[dict], n1: int, n2: int, path: str) -> str:
    """Heatmap of |field| over a regular grid; masked cells are invalid rows."""
    mag = _magnitudes(rows).reshape(n1, n2)
    x1 = np.array([r["x1"] for r in rows]).reshape(n1, n2)
    x2 = np.array([r["x2"] for r in rows]).reshape(n1, n2)
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    mesh = ax.pcolormesh(x1, x2, np.ma.masked_invalid(mag), shading="auto")
    fig.colorbar(mesh, ax=ax, label="|field|")
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_aspect("equal")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_pair_figure(rows: list[dict], path: str, ylabel: str) -> str:
    """Real/imaginary parts of a two-point quantity against pair separation."""
    sep, re, im = [], [], []
    for row in rows:
        if row.get("note"):
            continue
        dx = np.array([row[f"x{i}"] for i in (1, 2, 3) if f"x{i}" in row])
        dy = np.array([row[f"y{i}"] for i in (1, 2, 3) if f"y{i}" in row])
        sep.append(np.linalg.norm(dx - dy))
        re.append(row["re"])
        im.append(row["im"])
    order = np.argsort(sep)
    sep = np.asarray(sep)[order]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(sep, np.asarray(re)[order], "o-", label="Re")
    ax.plot(sep, np.asarray(im)[order], "s--", label="Im")
    ax.set_xlabel("|x - y|")
    ax.set_ylabel(ylabel)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_residual_figure(residuals: list[float], tolerance: float, path: str) -> str:
    """Per-pair relative residuals on a log scale against the tolerance line."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    idx = np.arange(len(residuals))
    ax.bar(idx, np.maximum(residuals, 1e-18))
    ax.axhline(tolerance, color="crimson", linestyle="--", label=f"tolerance {tolerance:g}")
    ax.set_yscale("log")
    ax.set_xlabel("pair index")
    ax.set_ylabel("relative residual")
    ax.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_projector_figure(stone: complex, scattering: complex, path: str) -> str:
    """Side-by-side comparison of the two projector-kernel routes."""
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    labels = ["Stone", "scattering"]
    re = [stone.real, scattering.real]
    im = [stone.imag, scattering.imag]
    pos = np.arange(2)
    ax.bar(pos - 0.17, re, width=0.34, label="Re")
    ax.bar(pos + 0.17, im, width=0.34, label="Im")
    ax.set_xticks(pos, labels)
    ax.set_ylabel("projector kernel value")
    diff = abs(stone - scattering)
    ax.set_title(f"route difference {diff:.3e}")
    ax.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
