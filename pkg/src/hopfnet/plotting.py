"""Minimal SVG line plots of trajectories, grouped by topic or by agent."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .dynamics import Trajectory

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]

PANEL_W, PANEL_H, PAD = 640, 180, 40


def _polyline(t, x, x0, y0, tmin, tmax, lo, hi, color):
    sx = (t - tmin) / (tmax - tmin or 1.0) * (PANEL_W - 2 * PAD) + x0 + PAD
    sy = y0 + PANEL_H - PAD / 2 - (x - lo) / (hi - lo or 1.0) * (PANEL_H - PAD)
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(sx, sy))
    return f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>'


def trajectory_svg(traj: Trajectory, group: str = "topic", max_points: int = 2000) -> str:
    """One panel per topic (lines are agents) or per agent (lines are topics)."""
    if group not in ("topic", "agent"):
        raise ValueError("group must be 'topic' or 'agent'")
    step = max(1, len(traj) // max_points)
    t = traj.times[::step]
    grid = traj.grid()[::step]
    lo, hi = float(grid.min()), float(grid.max())
    npanel = traj.n_topics if group == "topic" else traj.n_agents
    nline = traj.n_agents if group == "topic" else traj.n_topics
    height = npanel * PANEL_H
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{PANEL_W}" height="{height}" '
             f'viewBox="0 0 {PANEL_W} {height}">',
             '<rect width="100%" height="100%" fill="white"/>']
    for k in range(npanel):
        y0 = k * PANEL_H
        title = f"topic {k + 1}" if group == "topic" else f"agent {k + 1}"
        parts.append(f'<text x="{PAD}" y="{y0 + 14}" font-family="sans-serif" font-size="12">'
                     f'{escape(title)}</text>')
        parts.append(f'<rect x="{PAD}" y="{y0 + PAD / 2}" width="{PANEL_W - 2 * PAD}" '
                     f'height="{PANEL_H - PAD}" fill="none" stroke="#999"/>')
        for m in range(nline):
            series = grid[:, m, k] if group == "topic" else grid[:, k, m]
            parts.append(_polyline(t, series, 0, y0, t[0], t[-1], lo, hi,
                                   PALETTE[m % len(PALETTE)]))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
