"""Deterministic matplotlib renderings of scenario reports.

Every figure is drawn with a pinned hash salt and stripped date metadata so
that identical inputs produce byte-identical SVG (and PNG) files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_HASH_SALT = "holomotion"

RENDERABLE_KINDS = ("counterexample", "monodromy", "geometry", "extend", "barycenter")


def _new_figure(width: float = 6.0, height: float = 6.0):
    plt.rcParams["svg.hashsalt"] = _HASH_SALT
    plt.rcParams["figure.dpi"] = 120
    return plt.subplots(figsize=(width, height))


def _save(fig, path) -> None:
    path = str(path)
    if path.endswith(".svg"):
        fig.savefig(path, format="svg", metadata={"Date": None})
    elif path.endswith(".png"):
        fig.savefig(path, format="png", metadata={"Software": None})
    else:
        raise ValueError(f"unsupported figure format for {path!r}")
    plt.close(fig)


def render_figure(report: dict, kind: str, path) -> None:
    """Render the figure matching the scenario kind to the given file."""
    if kind in ("counterexample", "monodromy"):
        _render_trace_schematic(report, path)
    elif kind == "geometry":
        _render_threshold(report, path)
    elif kind == "extend":
        _render_curve_family(report, path)
    elif kind == "barycenter":
        _render_barycenter(report, path)
    else:
        raise ValueError(f"no figure renderer for scenario kind {kind!r}")


def _render_trace_schematic(report: dict, path) -> None:
    """Marked configuration with loop generators around each finite puncture."""
    results = report.get("results", {})
    inputs = report.get("inputs", {})
    raw_points = results.get("points", inputs.get("points", []))
    points = [complex(p[0], p[1]) for p in raw_points]
    z0 = results.get("z0", inputs.get("z0", [-1.0, 0.0]))
    z0 = complex(z0[0], z0[1])
    fixed = [0j, 1 + 0j, *points]
    labels = ["0", "1"] + [f"z{j + 1}" for j in range(len(points))]

    fig, ax = _new_figure(7.0, 4.5)
    for lab, p in zip(labels, fixed):
        ax.plot(p.real, p.imag, "ko", markersize=5)
        ax.annotate(lab, (p.real, p.imag), textcoords="offset points", xytext=(4, 6))
        loop = p + 0.3 * np.exp(2j * np.pi * np.linspace(0, 1, 128))
        ax.plot(loop.real, loop.imag, "b-", linewidth=0.8)
    ax.plot(z0.real, z0.imag, "r*", markersize=10)
    ax.annotate("z0", (z0.real, z0.imag), textcoords="offset points", xytext=(4, 6))
    word = report.get("results", {}).get("word", "")
    ax.set_title(f"trace word: {word[:60]}{'...' if len(word) > 60 else ''}")
    ax.set_aspect("equal")
    ax.grid(True, linewidth=0.3, alpha=0.5)
    _save(fig, path)


def _render_threshold(report: dict, path) -> None:
    """Extension threshold as a function of the length bound."""
    results = report.get("results", {})
    L = results.get("length_bound")
    grid = np.linspace(0.05, np.pi**2, 400)
    thresh = np.exp(np.pi**2 / grid)

    fig, ax = _new_figure(6.0, 4.0)
    ax.semilogy(grid, thresh, "b-", linewidth=1.0)
    if L:
        ax.axvline(L, color="r", linewidth=0.8, linestyle="--")
        ax.annotate(f"L = {L:.4f}", (L, np.exp(np.pi**2 / L)), xytext=(6, 0),
                    textcoords="offset points")
    ax.set_xlabel("configuration length bound")
    ax.set_ylabel("outer radius threshold")
    ax.grid(True, linewidth=0.3, alpha=0.5)
    _save(fig, path)


def _render_curve_family(report: dict, path) -> None:
    """Radial curves at one boundary sample plus marked trace images."""
    payload = report.get("figure_data", {})
    curves = payload.get("curves", [])
    marks = payload.get("marks", [])
    radii = payload.get("radii", {})
    if not curves:
        raise ValueError("extend figure payload carries no curves")

    fig, ax = _new_figure(6.5, 6.5)
    for curve in curves:
        arr = np.array([complex(p[0], p[1]) for p in curve])
        ax.plot(arr.real, arr.imag, "b-", linewidth=0.6)
    for ring, style in ((radii.get("r"), "g--"), (radii.get("R"), "k-")):
        if ring:
            circle = ring * np.exp(2j * np.pi * np.linspace(0, 1, 256))
            ax.plot(circle.real, circle.imag, style, linewidth=0.8)
    for m in payload.get("grid_images", []):
        ax.plot(m[0], m[1], ".", color="0.6", markersize=3)
    for m in marks:
        ax.plot(m[0], m[1], "r.", markersize=6)
    ax.set_aspect("equal")
    ax.set_title("flow-line family at xi = 1")
    _save(fig, path)


def _render_barycenter(report: dict, path) -> None:
    """Boundary map and the extension image of a polar test grid."""
    payload = report.get("figure_data", {})
    boundary = payload.get("boundary", [])
    images = payload.get("grid_images", [])

    fig, ax = _new_figure(6.0, 6.0)
    circle = np.exp(2j * np.pi * np.linspace(0, 1, 257))
    ax.plot(circle.real, circle.imag, "k-", linewidth=0.8)
    if boundary:
        arr = np.array([complex(p[0], p[1]) for p in boundary])
        ax.plot(arr.real, arr.imag, "b.", markersize=2)
    if images:
        arr = np.array([complex(p[0], p[1]) for p in images])
        ax.plot(arr.real, arr.imag, "r.", markersize=3)
    ax.set_aspect("equal")
    ax.set_title("barycentric extension samples")
    _save(fig, path)
