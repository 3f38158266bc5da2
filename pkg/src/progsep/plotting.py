"""SVG figures: KM step curves per risk group and survival-difference curves.

Figures are built on a bare :class:`~matplotlib.figure.Figure` (no pyplot
state) and written with a fixed hash salt and no date, so the same input
always produces the same file. Each data line carries an SVG ``id``
(``km-low``, ``km-high``, ``diff-0``, ...) so files can be inspected.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import matplotlib as mpl
from matplotlib.figure import Figure

from .cohort import Group
from .survival import SurvivalCurve

_STYLE = {
    "svg.hashsalt": "progsep",
    "svg.fonttype": "none",
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
}
_COLORS = {Group.LOW: "#1f77b4", Group.HIGH: "#d62728"}


def step_xy(curve: SurvivalCurve, t_end: float | None = None) -> tuple[list[float], list[float]]:
    """Vertices of the right-continuous step function, starting at (0, 1)."""
    xs, ys = [0.0], [1.0]
    for p in curve.points:
        xs.append(p.t)
        ys.append(p.s)
    if t_end is not None and t_end > xs[-1]:
        xs.append(t_end)
        ys.append(ys[-1])
    return xs, ys


def _save(fig: Figure, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})


def plot_km(curves: Mapping[Group, SurvivalCurve], path, title: str | None = None, t_end: float | None = None):
    with mpl.rc_context(_STYLE):
        fig = Figure(figsize=(6, 4))
        ax = fig.add_subplot()
        for group in (Group.LOW, Group.HIGH):
            xs, ys = step_xy(curves[group], t_end)
            (line,) = ax.step(xs, ys, where="post", color=_COLORS[group], label=group.name)
            line.set_gid(f"km-{group.value}")
        ax.set_xlabel("Time (years)")
        ax.set_ylabel("Survival probability")
        ax.set_ylim(0, 1.02)
        ax.set_xlim(left=0)
        ax.legend(frameon=False)
        if title:
            ax.set_title(title)
        fig.tight_layout()
        _save(fig, path)


def plot_difference_curves(
    curves: Sequence[tuple[tuple[float, float], Sequence[tuple[float, float]]]], path
):
    with mpl.rc_context(_STYLE):
        fig = Figure(figsize=(6, 4))
        ax = fig.add_subplot()
        for i, ((sens, spec), points) in enumerate(curves):
            (line,) = ax.plot(
                [r for r, _ in points],
                [d for _, d in points],
                label=f"sens={sens:g}, spec={spec:g}",
            )
            line.set_gid(f"diff-{i}")
        ax.set_xlabel("Population survival rate at horizon")
        ax.set_ylabel("S_low - S_high")
        ax.set_xlim(0, 1)
        ax.legend(frameon=False)
        fig.tight_layout()
        _save(fig, path)
